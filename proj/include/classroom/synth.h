// include/classroom/synth.h

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

#ifndef CLASSROOM_SYNTH_H_
#define CLASSROOM_SYNTH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "classroom/audio_io.h"
#include "classroom/pipeline.h"

namespace classroom {

// Deterministic test signals and classroom scenarios. Every generator is a
// pure function of its arguments, seed included.

// amp * sin(2 pi f t). Requires 0 < freq < rate / 2.
AudioClip GenTone(double freq_hz, double duration_s, double amp, int sample_rate);

// Harmonic series k * f0 (k >= 1, below 4 kHz and Nyquist) with 1/k
// amplitudes, scaled so the peak magnitude equals amp. Requires
// 60 <= f0 <= 400.
AudioClip GenVoiced(double f0_hz, double duration_s, double amp, int sample_rate);

// Seeded uniform white noise on [-amp, amp].
AudioClip GenNoise(double amp, double duration_s, int sample_rate, std::uint64_t seed);

// Mean-square of the A-weighted harmonic series GenVoiced(f0, ., 1, .) would
// produce, in dB relative to a full-scale sine, before any envelope. Computed
// from the harmonic amplitudes, not measured.
double VoicedLevelDb(double f0_hz, int sample_rate);

// Room geometry for the localization scenario: 10 m wide, 12 m deep, one
// microphone 1 m in from each corner.
struct Point2 {
  double x = 0.0;
  double y = 0.0;
};
Point2 MicrophonePosition(Position quadrant);

// One talking source placed 1-2 m from the microphone of `source`, heard by
// the four microphones with 1/d amplitude attenuation (d >= 1 m) over
// independent low-level background noise. Clips are 2 s long.
std::vector<PositionedClip> GenQuadrantScenario(Position source, double source_amp,
                                                int sample_rate, std::uint64_t seed);

struct ScenarioConfig {
  std::uint64_t seed = 1;
  int lectures = 30;
  int clips_per_lecture = 20;
  double clip_seconds = 2.0;
  int sample_rate = 16000;
  // Instructor speech, A-weighted, at the default calibration.
  double teacher_level_dba = 60.0;
  double teacher_level_spread_db = 4.0;  // per-lecture uniform +/- spread
  // Background bed of quiet clips and the babble of noisy clips.
  double quiet_floor_dbfs = -40.0;
  double noisy_level_dbfs = -15.0;
  double noisy_level_spread_db = 4.0;
  int babble_voices = 4;
  double noisy_lecture_fraction = 0.5;
  // Fraction of clips carrying babble in a noisy (quiet) lecture is drawn
  // from [0.6, 0.8] ([0.2, 0.4]).
  std::vector<Gender> gender_plan;  // empty: seeded coin flip per lecture

  void Validate() const;
};

struct ClipTruth {
  int sequence_index = 0;
  std::string path;
  NoiseLabel noise = NoiseLabel::kQuiet;
};

struct LectureTruth {
  std::string lecture_id;
  LectureLabel noise_label = LectureLabel::kQuiet;
  Gender gender = Gender::kMale;
  double instructor_level_dba = 0.0;
  double teacher_f0_hz = 0.0;
  std::vector<ClipTruth> clips;
};

struct SynthLecture {
  LectureTruth truth;
  std::vector<LoadedClip> clips;
};

// Lecture `index` of the scenario, generated in memory.
SynthLecture GenLecture(const ScenarioConfig &config, int index);

std::string LectureId(int index);

struct Corpus {
  std::vector<LectureManifest> manifests;
  std::vector<LectureTruth> truth;
};

// Writes <dir>/<lecture_id>/clip_NN.wav, <dir>/<lecture_id>/manifest.json
// and <dir>/truth.json. Manifest paths are relative to the manifest.
Corpus GenLectureCorpus(const ScenarioConfig &config, const std::string &dir);

std::string TruthToJson(const std::vector<LectureTruth> &truth);
std::vector<LectureTruth> TruthFromJson(const std::string &text);

}  // namespace classroom

#endif  // CLASSROOM_SYNTH_H_
