// include/classroom/pipeline.h

// Copyright 2026 The Classroom Acoustics Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CLASSROOM_PIPELINE_H_
#define CLASSROOM_PIPELINE_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "classroom/audio_io.h"
#include "classroom/models.h"
#include "classroom/stats.h"

namespace classroom {

// Every tunable the analysis depends on. The CLI exposes each field as a flag
// and echoes the effective values into its reports.
struct AnalysisConfig {
  double frame_len_ms = 32.0;
  double overlap = 0.5;
  double calibration_offset_db = kDefaultCalibrationOffsetDb;
  int knn_k = 5;
  int gmm_components = 4;
  std::uint64_t seed = 0;
  double speaker_delta_db = 3.0;
  double level_bin_width_db = 2.0;
  double low_level_threshold_db = 55.0;   // below: Low
  double high_level_threshold_db = 65.0;  // above: High

  FrameParams Frames(int sample_rate) const {
    return FrameParams::FromMilliseconds(sample_rate, frame_len_ms, overlap);
  }
  void Validate() const;
};

std::string ConfigToJson(const AnalysisConfig &config);
// Starts from `base` and overrides every field present in the document.
AnalysisConfig ConfigFromJson(const std::string &text, AnalysisConfig base = {});

struct ClipNoiseResult {
  NoiseLabel label = NoiseLabel::kQuiet;
  NormalFit spl_fit;
};

struct ClipVerdict {
  std::string clip_id;
  int sequence_index = 0;
  Position position = Position::kUnspecified;
  NoiseLabel noise = NoiseLabel::kQuiet;
  NormalFit spl_fit;
  double mean_level_dba = 0.0;
  SpeakerRole role = SpeakerRole::kUnknown;
  Gender gender = Gender::kUnknown;
  std::size_t voiced_frames = 0;
};

struct LectureRecord {
  std::string lecture_id;
  LectureLabel label = LectureLabel::kTie;
  double instructor_level_dba = 0.0;
  SpeechLevel speech_level = SpeechLevel::kMedium;
  Gender instructor_gender = Gender::kUnknown;
  std::vector<ClipVerdict> clips;  // ordered by sequence_index
};

struct AssociationTest {
  ContingencyTable table;      // rows: noisy, quiet
  ChiSquareResult chi_square;
  ContingencyTable collapsed;  // 2x2 used for the proportion difference
  double proportion_difference = 0.0;
};

struct CorrelationReport {
  AssociationTest noise_vs_speech_level;
  AssociationTest noise_vs_gender;
  std::size_t lectures = 0;
  std::size_t tie_lectures = 0;            // excluded from both tests
  std::size_t unknown_gender_lectures = 0; // excluded from the gender test
  std::map<std::string, std::size_t> category_counts;
};

// SPL series -> normal fit -> k-NN on (mean, std).
ClipNoiseResult ClassifyClipNoise(const KnnModel &model, const AudioClip &clip,
                                  const AnalysisConfig &config = {});

// Strict majority; equal counts give kTie. Throws on empty input.
LectureLabel ClassifyLecture(std::span<const NoiseLabel> labels);

// Center of the modal histogram bin of the clip levels. Among equally full
// bins the lowest wins.
double InstructorLevel(std::span<const double> clip_levels, double bin_width = 2.0,
                       double origin = 0.0);

// Teacher iff |clip_level - instructor_level| <= delta.
SpeakerRole DifferentiateSpeaker(double clip_level, double instructor_level,
                                 double delta = 3.0);

SpeechLevel CategorizeSpeechLevel(double level_dba, const AnalysisConfig &config = {});

struct PositionedClip {
  Position position;
  AudioClip clip;
};

struct LocalizationResult {
  Position quadrant = Position::kUnspecified;
  std::map<Position, double> mean_levels;
};

// The quadrant whose clip has the highest mean A-weighted level. Needs one
// clip per quadrant; means within 1e-9 of each other at the top are an
// ambiguous result and throw kAmbiguous.
LocalizationResult LocalizeNoise(std::span<const PositionedClip> clips,
                                 const AnalysisConfig &config = {});

struct LoadedClip {
  ClipMetadata metadata;
  AudioClip clip;
};

LectureRecord AnalyzeClips(const std::string &lecture_id, std::span<const LoadedClip> clips,
                           const KnnModel &knn, const GmmModel &male,
                           const GmmModel &female, const AnalysisConfig &config = {});

// Loads every clip named in the manifest and runs AnalyzeClips.
LectureRecord AnalyzeLecture(const LectureManifest &manifest, const KnnModel &knn,
                             const GmmModel &male, const GmmModel &female,
                             const AnalysisConfig &config = {});

// Chi-square tests of lecture noise against instructor speech level (2x3,
// absent levels dropped; proportions over low vs medium+high) and against
// instructor gender (2x2).
CorrelationReport Correlate(std::span<const LectureRecord> records);

// JSON with every non-integer number printed with six fractional digits.
std::string RecordToJson(const LectureRecord &record, const AnalysisConfig *config = nullptr);
LectureRecord RecordFromJson(const std::string &text);
std::string ReportToJson(const CorrelationReport &report,
                         const AnalysisConfig *config = nullptr);

}  // namespace classroom

#endif  // CLASSROOM_PIPELINE_H_
