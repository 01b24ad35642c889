// src/pipeline.cc

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

#include "classroom/pipeline.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "classroom/error.h"

namespace classroom {

namespace {

constexpr double kLocalizationTieTolerance = 1e-9;

constexpr std::array<Position, 4> kQuadrants{Position::kFrontLeft, Position::kFrontRight,
                                             Position::kBackLeft, Position::kBackRight};

ContingencyTable DropEmptyColumns(const ContingencyTable &table) {
  ContingencyTable out;
  out.row_labels = table.row_labels;
  out.counts.assign(table.rows(), {});
  for (std::size_t j = 0; j < table.cols(); ++j) {
    std::int64_t total = 0;
    for (std::size_t i = 0; i < table.rows(); ++i) total += table.counts[i][j];
    if (total == 0) continue;
    out.col_labels.push_back(table.col_labels[j]);
    for (std::size_t i = 0; i < table.rows(); ++i) out.counts[i].push_back(table.counts[i][j]);
  }
  return out;
}

}  // namespace

void AnalysisConfig::Validate() const {
  auto fail = [](const std::string &what) {
    throw Error(ErrorCode::kInvalidArgument, "config: " + what);
  };
  if (!(frame_len_ms > 0.0)) fail("frame_len_ms must be positive");
  if (!(overlap >= 0.0 && overlap < 1.0)) fail("overlap must be in [0, 1)");
  if (!std::isfinite(calibration_offset_db)) fail("calibration_offset_db must be finite");
  if (knn_k < 1 || knn_k % 2 == 0) fail("knn_k must be odd and positive");
  if (gmm_components < 1) fail("gmm_components must be positive");
  if (!(speaker_delta_db >= 0.0)) fail("speaker_delta_db must be non-negative");
  if (!(level_bin_width_db > 0.0)) fail("level_bin_width_db must be positive");
  if (!(low_level_threshold_db <= high_level_threshold_db)) {
    fail("low_level_threshold_db must not exceed high_level_threshold_db");
  }
}

ClipNoiseResult ClassifyClipNoise(const KnnModel &model, const AudioClip &clip,
                                  const AnalysisConfig &config) {
  const SplSeries spl = ComputeSplSeries(clip, config.Frames(clip.sample_rate()),
                                         config.calibration_offset_db);
  ClipNoiseResult result;
  result.spl_fit = FitNormal(spl.levels);
  result.label = KnnClassify(model, {result.spl_fit.mean, result.spl_fit.std});
  return result;
}

LectureLabel ClassifyLecture(std::span<const NoiseLabel> labels) {
  if (labels.empty()) throw Error(ErrorCode::kInsufficientData, "lecture has no clip labels");
  const auto noisy = std::count(labels.begin(), labels.end(), NoiseLabel::kNoisy);
  const auto quiet = static_cast<long>(labels.size()) - noisy;
  if (noisy > quiet) return LectureLabel::kNoisy;
  if (quiet > noisy) return LectureLabel::kQuiet;
  return LectureLabel::kTie;
}

double InstructorLevel(std::span<const double> clip_levels, double bin_width, double origin) {
  if (clip_levels.empty()) {
    throw Error(ErrorCode::kInsufficientData, "instructor level of no clips");
  }
  const auto bins = Histogram(clip_levels, bin_width, origin);
  auto best = bins.begin();
  for (auto it = bins.begin(); it != bins.end(); ++it) {
    if (it->second > best->second) best = it;  // map order: first max is the lowest bin
  }
  return origin + (static_cast<double>(best->first) + 0.5) * bin_width;
}

SpeakerRole DifferentiateSpeaker(double clip_level, double instructor_level, double delta) {
  if (!std::isfinite(clip_level) || !std::isfinite(instructor_level)) {
    throw Error(ErrorCode::kNonFinite, "speaker differentiation of non-finite level");
  }
  return std::fabs(clip_level - instructor_level) <= delta ? SpeakerRole::kTeacher
                                                           : SpeakerRole::kStudent;
}

SpeechLevel CategorizeSpeechLevel(double level_dba, const AnalysisConfig &config) {
  if (level_dba < config.low_level_threshold_db) return SpeechLevel::kLow;
  if (level_dba > config.high_level_threshold_db) return SpeechLevel::kHigh;
  return SpeechLevel::kMedium;
}

LocalizationResult LocalizeNoise(std::span<const PositionedClip> clips,
                                 const AnalysisConfig &config) {
  if (clips.size() != kQuadrants.size()) {
    throw Error(ErrorCode::kInvalidArgument, "localization needs exactly four clips");
  }
  LocalizationResult result;
  for (const PositionedClip &pc : clips) {
    if (std::find(kQuadrants.begin(), kQuadrants.end(), pc.position) == kQuadrants.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "localization clip has no quadrant position");
    }
    if (result.mean_levels.count(pc.position)) {
      throw Error(ErrorCode::kDuplicate,
                  "duplicate quadrant " + std::string(ToString(pc.position)));
    }
    const SplSeries spl = ComputeSplSeries(pc.clip, config.Frames(pc.clip.sample_rate()),
                                           config.calibration_offset_db);
    result.mean_levels[pc.position] = FitNormal(spl.levels).mean;
  }

  auto best = result.mean_levels.begin();
  for (auto it = result.mean_levels.begin(); it != result.mean_levels.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  for (const auto &[position, mean] : result.mean_levels) {
    if (position != best->first && best->second - mean <= kLocalizationTieTolerance) {
      throw Error(ErrorCode::kAmbiguous,
                  "ambiguous localization: " + std::string(ToString(best->first)) + " and " +
                      std::string(ToString(position)) + " tie");
    }
  }
  result.quadrant = best->first;
  return result;
}

LectureRecord AnalyzeClips(const std::string &lecture_id, std::span<const LoadedClip> clips,
                           const KnnModel &knn, const GmmModel &male,
                           const GmmModel &female, const AnalysisConfig &config) {
  if (clips.empty()) throw Error(ErrorCode::kInsufficientData, "lecture has no clips");
  config.Validate();

  LectureRecord record;
  record.lecture_id = lecture_id;
  std::vector<NoiseLabel> labels;
  std::vector<double> levels;
  std::vector<bool> voiced;
  for (const LoadedClip &loaded : clips) {
    ClipVerdict verdict;
    verdict.clip_id = loaded.clip.id();
    verdict.sequence_index = loaded.metadata.sequence_index;
    verdict.position = loaded.metadata.position;

    const ClipNoiseResult noise = ClassifyClipNoise(knn, loaded.clip, config);
    verdict.noise = noise.label;
    verdict.spl_fit = noise.spl_fit;
    verdict.mean_level_dba = noise.spl_fit.mean;

    const auto features =
        GenderFeatures(loaded.clip, config.Frames(loaded.clip.sample_rate()));
    verdict.voiced_frames = features.size();
    if (!features.empty()) verdict.gender = ClassifyGender(male, female, features);

    labels.push_back(verdict.noise);
    levels.push_back(verdict.mean_level_dba);
    voiced.push_back(!features.empty());
    record.clips.push_back(std::move(verdict));
  }

  record.label = ClassifyLecture(labels);
  record.instructor_level_dba = InstructorLevel(levels, config.level_bin_width_db);
  record.speech_level = CategorizeSpeechLevel(record.instructor_level_dba, config);

  std::size_t male_votes = 0, female_votes = 0;
  for (std::size_t i = 0; i < record.clips.size(); ++i) {
    ClipVerdict &v = record.clips[i];
    if (!voiced[i]) continue;
    v.role = DifferentiateSpeaker(v.mean_level_dba, record.instructor_level_dba,
                                  config.speaker_delta_db);
    if (v.role != SpeakerRole::kTeacher) continue;
    if (v.gender == Gender::kMale) ++male_votes;
    if (v.gender == Gender::kFemale) ++female_votes;
  }
  if (male_votes > female_votes) record.instructor_gender = Gender::kMale;
  if (female_votes > male_votes) record.instructor_gender = Gender::kFemale;

  std::stable_sort(record.clips.begin(), record.clips.end(),
                   [](const ClipVerdict &a, const ClipVerdict &b) {
                     return a.sequence_index < b.sequence_index;
                   });
  return record;
}

LectureRecord AnalyzeLecture(const LectureManifest &manifest, const KnnModel &knn,
                             const GmmModel &male, const GmmModel &female,
                             const AnalysisConfig &config) {
  std::vector<LoadedClip> clips;
  clips.reserve(manifest.clips.size());
  for (const ClipEntry &entry : manifest.clips) {
    clips.push_back({entry.metadata, LoadWav(entry.path)});
  }
  return AnalyzeClips(manifest.lecture_id, clips, knn, male, female, config);
}

CorrelationReport Correlate(std::span<const LectureRecord> records) {
  CorrelationReport report;
  report.lectures = records.size();

  ContingencyTable levels;
  levels.row_labels = {"noisy", "quiet"};
  levels.col_labels = {"low", "medium", "high"};
  levels.counts.assign(2, std::vector<std::int64_t>(3, 0));
  ContingencyTable genders;
  genders.row_labels = {"noisy", "quiet"};
  genders.col_labels = {"male", "female"};
  genders.counts.assign(2, std::vector<std::int64_t>(2, 0));

  for (const LectureRecord &r : records) {
    ++report.category_counts["noise:" + std::string(ToString(r.label))];
    ++report.category_counts["speech_level:" + std::string(ToString(r.speech_level))];
    ++report.category_counts["gender:" + std::string(ToString(r.instructor_gender))];
    if (r.label == LectureLabel::kTie) {
      ++report.tie_lectures;
      continue;
    }
    const std::size_t row = r.label == LectureLabel::kNoisy ? 0 : 1;
    ++levels.counts[row][static_cast<std::size_t>(r.speech_level)];
    if (r.instructor_gender == Gender::kUnknown) {
      ++report.unknown_gender_lectures;
      continue;
    }
    ++genders.counts[row][r.instructor_gender == Gender::kMale ? 0 : 1];
  }

  AssociationTest &level_test = report.noise_vs_speech_level;
  level_test.table = levels;
  const ContingencyTable present = DropEmptyColumns(levels);
  if (present.cols() < 2) {
    throw Error(ErrorCode::kDegenerateTable,
                "speech-level test needs lectures in at least two level categories");
  }
  level_test.chi_square = ChiSquareIndependence(present);
  level_test.collapsed.row_labels = levels.row_labels;
  level_test.collapsed.col_labels = {"low", "medium_high"};
  for (std::size_t i = 0; i < 2; ++i) {
    level_test.collapsed.counts.push_back(
        {levels.counts[i][0], levels.counts[i][1] + levels.counts[i][2]});
  }
  level_test.proportion_difference = DifferenceOfProportions(level_test.collapsed);

  AssociationTest &gender_test = report.noise_vs_gender;
  gender_test.table = genders;
  gender_test.collapsed = genders;
  gender_test.chi_square = ChiSquareIndependence(genders);
  gender_test.proportion_difference = DifferenceOfProportions(genders);
  return report;
}

}  // namespace classroom
