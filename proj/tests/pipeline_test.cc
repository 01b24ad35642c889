// tests/pipeline_test.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "classroom/pipeline.h"
#include "classroom/synth.h"
#include "test_support.h"

namespace classroom {
namespace {

using testing::ThrowsCode;

constexpr int kRate = 16000;

// Voiced clip whose A-weighted level is `dba` at the default calibration.
AudioClip VoicedAt(double f0, double dba, double seconds = 1.0) {
  const double gain = std::pow(10.0, (dba - 94.0 - VoicedLevelDb(f0, kRate)) / 20.0);
  return GenVoiced(f0, seconds, 1.0, kRate).Scaled(gain);
}

AudioClip Mix(const AudioClip &a, const AudioClip &b) {
  std::vector<double> out(a.samples().begin(), a.samples().end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::clamp(out[i] + b.samples()[i], -1.0, 1.0);
  return AudioClip(out, a.sample_rate());
}

struct Models {
  KnnModel knn;
  GmmModel male;
  GmmModel female;
};

const Models &TrainedModels() {
  static const Models models = [] {
    Models m;
    std::vector<KnnPoint> points;
    std::vector<NoiseLabel> labels;
    for (int i = 0; i < 12; ++i) {
      const AudioClip quiet = VoicedAt(110.0 + 10 * i, 54.0 + i);
      const AudioClip noisy =
          Mix(VoicedAt(110.0 + 10 * i, 60.0), GenNoise(0.2 + 0.02 * i, 1.0, kRate, 50 + i));
      for (const auto &[clip, label] :
           {std::pair{&quiet, NoiseLabel::kQuiet}, std::pair{&noisy, NoiseLabel::kNoisy}}) {
        const NormalFit fit =
            FitNormal(ComputeSplSeries(*clip, FrameParams::FromMilliseconds(kRate)).levels);
        points.push_back({fit.mean, fit.std});
        labels.push_back(label);
      }
    }
    m.knn = TrainKnn(points, labels, 5);

    std::vector<FeatureVector> male, female;
    for (int i = 0; i < 6; ++i) {
      for (const auto &v : GenderFeatures(VoicedAt(100.0 + 8 * i, 60.0), {512, 256})) male.push_back(v);
      for (const auto &v : GenderFeatures(VoicedAt(190.0 + 12 * i, 60.0), {512, 256})) female.push_back(v);
    }
    GmmTrainOptions options;
    m.male = TrainGmm(male, options).model;
    m.female = TrainGmm(female, options).model;
    return m;
  }();
  return models;
}

TEST_CASE("lecture label by strict majority") {
  using N = NoiseLabel;
  CHECK(ClassifyLecture(std::vector<N>{N::kNoisy, N::kNoisy, N::kQuiet}) == LectureLabel::kNoisy);
  CHECK(ClassifyLecture(std::vector<N>{N::kQuiet, N::kNoisy, N::kQuiet}) == LectureLabel::kQuiet);
  CHECK(ClassifyLecture(std::vector<N>{N::kNoisy, N::kQuiet}) == LectureLabel::kTie);
  std::vector<N> labels{N::kNoisy, N::kQuiet, N::kQuiet, N::kNoisy, N::kNoisy};
  const LectureLabel verdict = ClassifyLecture(labels);
  std::sort(labels.begin(), labels.end());
  do {
    CHECK(ClassifyLecture(labels) == verdict);
  } while (std::next_permutation(labels.begin(), labels.end()));
  CHECK(ThrowsCode([] { ClassifyLecture(std::vector<N>{}); }, ErrorCode::kInsufficientData));
}

TEST_CASE("instructor level, speaker role, speech level") {
  CHECK(InstructorLevel(std::vector<double>{60.1, 60.4, 59.9, 72.0}) == 61.0);
  CHECK(InstructorLevel(std::vector<double>{59.0, 61.0}) == 59.0);  // equal bins: lower wins
  CHECK(InstructorLevel(std::vector<double>{60.5, 60.7, 61.2, 61.9, 75.0, 40.0}) == 61.0);
  CHECK(ThrowsCode([] { InstructorLevel(std::vector<double>{}); }, ErrorCode::kInsufficientData));

  CHECK(DifferentiateSpeaker(61.0, 60.0) == SpeakerRole::kTeacher);
  CHECK(DifferentiateSpeaker(63.0, 60.0) == SpeakerRole::kTeacher);
  CHECK(DifferentiateSpeaker(70.0, 60.0) == SpeakerRole::kStudent);
  CHECK(DifferentiateSpeaker(56.5, 60.0) == SpeakerRole::kStudent);

  CHECK(CategorizeSpeechLevel(54.9) == SpeechLevel::kLow);
  CHECK(CategorizeSpeechLevel(55.0) == SpeechLevel::kMedium);
  CHECK(CategorizeSpeechLevel(65.0) == SpeechLevel::kMedium);
  CHECK(CategorizeSpeechLevel(65.1) == SpeechLevel::kHigh);
  AnalysisConfig config;
  config.low_level_threshold_db = 40.0;
  CHECK(CategorizeSpeechLevel(50.0, config) == SpeechLevel::kMedium);
}

TEST_CASE("noise localization") {
  const AudioClip base = GenNoise(0.1, 1.0, kRate, 3);
  auto clips_with = [&](Position loud, double gain_db) {
    std::vector<PositionedClip> clips;
    for (Position p : {Position::kFrontLeft, Position::kFrontRight, Position::kBackLeft,
                       Position::kBackRight}) {
      clips.push_back({p, base.Scaled(p == loud ? std::pow(10.0, gain_db / 20.0) : 1.0)});
    }
    return clips;
  };
  CHECK(ThrowsCode([&] { LocalizeNoise(clips_with(Position::kFrontLeft, 0.0)); },
                   ErrorCode::kAmbiguous));
  const LocalizationResult r = LocalizeNoise(clips_with(Position::kFrontRight, 6.0));
  CHECK(r.quadrant == Position::kFrontRight);
  CHECK(r.mean_levels.size() == 4);
  CHECK(r.mean_levels.at(Position::kFrontRight) - r.mean_levels.at(Position::kBackLeft) ==
        doctest::Approx(6.0).epsilon(1e-3));

  // A common gain leaves the verdict alone.
  auto louder = clips_with(Position::kBackLeft, 3.0);
  for (auto &c : louder) c.clip = c.clip.Scaled(2.0);
  CHECK(LocalizeNoise(louder).quadrant == Position::kBackLeft);

  auto three = clips_with(Position::kBackLeft, 3.0);
  three.pop_back();
  CHECK(ThrowsCode([&] { LocalizeNoise(three); }, ErrorCode::kInvalidArgument));
  auto dup = clips_with(Position::kBackLeft, 3.0);
  dup[3].position = Position::kFrontLeft;
  CHECK(ThrowsCode([&] { LocalizeNoise(dup); }, ErrorCode::kDuplicate));
}

TEST_CASE("noise classification of clips") {
  const Models &m = TrainedModels();
  const AudioClip quiet = Mix(VoicedAt(130.0, 60.0), GenNoise(0.0058, 1.0, kRate, 7));
  const AudioClip noisy = Mix(VoicedAt(130.0, 60.0), GenNoise(0.3, 1.0, kRate, 8));
  CHECK(ClassifyClipNoise(m.knn, quiet).label == NoiseLabel::kQuiet);
  CHECK(ClassifyClipNoise(m.knn, noisy).label == NoiseLabel::kNoisy);
  const ClipNoiseResult a = ClassifyClipNoise(m.knn, noisy);
  const ClipNoiseResult b = ClassifyClipNoise(m.knn, noisy);
  CHECK(a.label == b.label);
  CHECK(a.spl_fit.mean == b.spl_fit.mean);
}

TEST_CASE("lecture analysis") {
  const Models &m = TrainedModels();
  std::vector<LoadedClip> clips;
  for (int i = 0; i < 20; ++i) {
    const Position pos = static_cast<Position>(i % 4);
    if (i % 4 == 3) {
      // Loud female-pitched student over noise.
      clips.push_back({{"L", pos, i},
                       Mix(VoicedAt(240.0, 76.0), GenNoise(0.05, 1.0, kRate, 100 + i))});
    } else {
      clips.push_back({{"L", pos, i}, VoicedAt(118.0 + (i % 3), 59.6 + 0.1 * (i % 5))});
    }
  }
  std::reverse(clips.begin(), clips.end());
  const LectureRecord r = AnalyzeClips("L", clips, m.knn, m.male, m.female);
  CHECK(r.label == LectureLabel::kQuiet);
  CHECK(std::fabs(r.instructor_level_dba - 60.0) <= 1.0);
  CHECK(r.speech_level == SpeechLevel::kMedium);
  CHECK(r.instructor_gender == Gender::kMale);
  REQUIRE(r.clips.size() == 20);
  for (int i = 0; i < 20; ++i) {
    const ClipVerdict &v = r.clips[static_cast<std::size_t>(i)];
    CHECK(v.sequence_index == i);
    CHECK(v.role == (i % 4 == 3 ? SpeakerRole::kStudent : SpeakerRole::kTeacher));
    CHECK(v.noise == (i % 4 == 3 ? NoiseLabel::kNoisy : NoiseLabel::kQuiet));
  }

  const std::vector<LoadedClip> silent{
      {{"S", Position::kUnspecified, 0},
       AudioClip(std::vector<double>(kRate, 0.0), kRate, "silent")}};
  const LectureRecord s = AnalyzeClips("S", silent, m.knn, m.male, m.female);
  CHECK(s.instructor_gender == Gender::kUnknown);
  CHECK(s.clips[0].role == SpeakerRole::kUnknown);
  CHECK(s.clips[0].gender == Gender::kUnknown);
  CHECK(s.clips[0].voiced_frames == 0);

  CHECK(ThrowsCode([&] { AnalyzeClips("E", {}, m.knn, m.male, m.female); },
                   ErrorCode::kInsufficientData));
}

LectureRecord Record(const std::string &id, LectureLabel label, SpeechLevel level, Gender g) {
  LectureRecord r;
  r.lecture_id = id;
  r.label = label;
  r.speech_level = level;
  r.instructor_gender = g;
  return r;
}

TEST_CASE("corpus correlation") {
  std::vector<LectureRecord> records;
  for (int i = 0; i < 10; ++i) {
    records.push_back(Record("n" + std::to_string(i), LectureLabel::kNoisy, SpeechLevel::kLow,
                             Gender::kMale));
    records.push_back(Record("q" + std::to_string(i), LectureLabel::kQuiet,
                             i % 2 ? SpeechLevel::kMedium : SpeechLevel::kHigh, Gender::kFemale));
  }
  records.push_back(Record("t", LectureLabel::kTie, SpeechLevel::kHigh, Gender::kMale));
  records.push_back(Record("u", LectureLabel::kNoisy, SpeechLevel::kLow, Gender::kUnknown));

  const CorrelationReport report = Correlate(records);
  CHECK(report.lectures == 22);
  CHECK(report.tie_lectures == 1);
  CHECK(report.unknown_gender_lectures == 1);
  CHECK(report.category_counts.at("noise:tie") == 1);
  CHECK(report.noise_vs_speech_level.table.counts ==
        std::vector<std::vector<std::int64_t>>{{11, 0, 0}, {0, 5, 5}});
  CHECK(report.noise_vs_speech_level.chi_square.dof == 2);
  CHECK(report.noise_vs_speech_level.chi_square.p_value < 0.01);
  CHECK(std::fabs(report.noise_vs_speech_level.proportion_difference) == 1.0);
  CHECK(report.noise_vs_gender.table.counts ==
        std::vector<std::vector<std::int64_t>>{{10, 0}, {0, 10}});
  CHECK(std::fabs(report.noise_vs_gender.proportion_difference) == 1.0);
  CHECK(report.noise_vs_gender.chi_square.p_value < 0.01);

  // Levels absent from the corpus drop out of the level test.
  std::vector<LectureRecord> two_levels;
  for (int i = 0; i < 8; ++i) {
    two_levels.push_back(Record("a", i < 4 ? LectureLabel::kNoisy : LectureLabel::kQuiet,
                                i % 2 ? SpeechLevel::kLow : SpeechLevel::kMedium,
                                i % 3 ? Gender::kMale : Gender::kFemale));
  }
  const CorrelationReport r2 = Correlate(two_levels);
  CHECK(r2.noise_vs_speech_level.chi_square.dof == 1);
  CHECK(r2.noise_vs_speech_level.chi_square.statistic == 0.0);

  CHECK(ThrowsCode([&] { Correlate(std::span<const LectureRecord>(records).first(1)); },
                   ErrorCode::kDegenerateTable));
}

TEST_CASE("record and report JSON") {
  LectureRecord r = Record("lecture_007", LectureLabel::kNoisy, SpeechLevel::kHigh, Gender::kFemale);
  r.instructor_level_dba = 67.0;
  ClipVerdict v;
  v.clip_id = "clip_00";
  v.position = Position::kBackLeft;
  v.noise = NoiseLabel::kNoisy;
  v.spl_fit = {70.123456789, 3.5};
  v.mean_level_dba = 70.123456789;
  v.role = SpeakerRole::kStudent;
  v.gender = Gender::kMale;
  v.voiced_frames = 12;
  r.clips.push_back(v);

  const AnalysisConfig config;
  const std::string json = RecordToJson(r, &config);
  CHECK(json.find("\"instructor_level_dba\": 67.000000") != std::string::npos);
  CHECK(json.find("\"spl_mean_dba\": 70.123457") != std::string::npos);
  CHECK(json.find("\"voiced_frames\": 12\n") != std::string::npos);
  CHECK(json.find("\"frame_len_ms\": 32.000000") != std::string::npos);
  const LectureRecord back = RecordFromJson(json);
  CHECK(back.lecture_id == r.lecture_id);
  CHECK(back.label == r.label);
  CHECK(back.clips[0].position == Position::kBackLeft);
  CHECK(back.clips[0].spl_fit.mean == 70.123457);
  CHECK(RecordToJson(back, &config) == json);
  CHECK(ThrowsCode([] { RecordFromJson(R"({"lecture_id":"x"})"); }, ErrorCode::kParse));
}

TEST_CASE("config JSON") {
  AnalysisConfig c = ConfigFromJson(R"({"knn_k": 3, "seed": 9, "overlap": 0.25})");
  CHECK(c.knn_k == 3);
  CHECK(c.seed == 9);
  CHECK(c.overlap == 0.25);
  CHECK(c.frame_len_ms == 32.0);
  CHECK(ConfigFromJson(ConfigToJson(c)).knn_k == 3);
  CHECK(ThrowsCode([] { ConfigFromJson(R"({"knn": 3})"); }, ErrorCode::kUnknownValue));
  CHECK(ThrowsCode([] { ConfigFromJson(R"({"knn_k": 4})"); }, ErrorCode::kInvalidArgument));
  CHECK(ThrowsCode([] { ConfigFromJson(R"({"knn_k": "five"})"); }, ErrorCode::kParse));
}

}  // namespace
}  // namespace classroom
