// src/synth.cc

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

#include "classroom/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "classroom/error.h"
#include "classroom/features.h"
#include "classroom/random.h"
#include "json.hpp"

namespace classroom {

namespace {

constexpr double kHarmonicCeilingHz = 4000.0;
constexpr double kRoomWidthM = 10.0;
constexpr double kRoomDepthM = 12.0;
constexpr double kMicInsetM = 1.0;
constexpr double kQuadrantClipSeconds = 2.0;
constexpr double kQuadrantBackgroundRms = 1e-3;  // about -60 dBFS

std::uint64_t SplitMix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                         std::uint64_t c = 0) {
  return SplitMix(SplitMix(SplitMix(SplitMix(seed) ^ a) ^ b) ^ c);
}

std::size_t SampleCount(double duration_s, int sample_rate) {
  if (!(duration_s > 0.0) || sample_rate <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "duration and sample rate must be positive");
  }
  const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "duration shorter than one sample");
  return n;
}

int HarmonicCount(double f0, int sample_rate) {
  const double ceiling = std::min(kHarmonicCeilingHz, sample_rate / 2.0);
  int k = 0;
  while ((k + 1) * f0 < ceiling) ++k;
  return k;
}

// sum_k sin(k theta) / k via the Chebyshev recurrence
// sin(k theta) = 2 cos(theta) sin((k-1) theta) - sin((k-2) theta).
double HarmonicSum(double theta, int harmonics) {
  const double c2 = 2.0 * std::cos(theta);
  double prev = 0.0, cur = std::sin(theta);
  double sum = cur;
  for (int k = 2; k <= harmonics; ++k) {
    const double next = c2 * cur - prev;
    prev = cur;
    cur = next;
    sum += cur / k;
  }
  return sum;
}

// Peak of the unnormalized series over one period on a dense grid.
double HarmonicPeak(int harmonics) {
  constexpr int kGrid = 8192;
  double peak = 0.0;
  for (int i = 0; i < kGrid; ++i) {
    peak = std::max(peak, std::fabs(HarmonicSum(2.0 * M_PI * i / kGrid, harmonics)));
  }
  return peak;
}

std::vector<double> Voiced(double f0, std::size_t n, int sample_rate, double phase) {
  const int harmonics = HarmonicCount(f0, sample_rate);
  const double scale = 1.0 / HarmonicPeak(harmonics);
  std::vector<double> out(n);
  const double step = 2.0 * M_PI * f0 / sample_rate;
  for (std::size_t t = 0; t < n; ++t) {
    out[t] = std::clamp(scale * HarmonicSum(step * static_cast<double>(t) + phase, harmonics),
                        -1.0, 1.0);
  }
  return out;
}

// Random on/off gating with 20 ms raised-cosine ramps, mimicking syllables
// and pauses.
std::vector<double> SyllableGate(std::size_t n, int sample_rate, Rng *rng) {
  std::vector<double> gate(n, 0.0);
  const auto ramp = static_cast<std::size_t>(0.02 * sample_rate);
  std::size_t t = static_cast<std::size_t>(rng->Uniform(0.0, 0.2) * sample_rate);
  while (t < n) {
    const auto on = static_cast<std::size_t>(rng->Uniform(0.15, 0.4) * sample_rate);
    for (std::size_t i = 0; i < on && t + i < n; ++i) {
      double g = 1.0;
      if (i < ramp) g = 0.5 - 0.5 * std::cos(M_PI * static_cast<double>(i) / ramp);
      if (on - i <= ramp) g = std::min(g, 0.5 - 0.5 * std::cos(M_PI * static_cast<double>(on - i) / ramp));
      gate[t + i] = g;
    }
    t += on + static_cast<std::size_t>(rng->Uniform(0.05, 0.3) * sample_rate);
  }
  return gate;
}

// Several gated talkers over a little broadband noise, scaled to unit RMS.
std::vector<double> Babble(std::size_t n, int sample_rate, int voices, Rng *rng) {
  std::vector<double> mix(n, 0.0);
  for (int v = 0; v < voices; ++v) {
    const double f0 = rng->Uniform(100.0, 280.0);
    const auto voice = Voiced(f0, n, sample_rate, rng->Uniform(0.0, 2.0 * M_PI));
    const auto gate = SyllableGate(n, sample_rate, rng);
    const double gain = rng->Uniform(0.6, 1.0);
    for (std::size_t t = 0; t < n; ++t) mix[t] += gain * gate[t] * voice[t];
  }
  for (std::size_t t = 0; t < n; ++t) mix[t] += 0.1 * rng->Uniform(-1.0, 1.0);
  double ms = 0.0;
  for (double x : mix) ms += x * x;
  const double rms = std::sqrt(ms / static_cast<double>(n));
  if (rms > 0.0) {
    for (double &x : mix) x /= rms;
  }
  return mix;
}

// Linear RMS of a sine whose level is `dbfs` re full scale.
double SineRms(double dbfs) { return std::pow(10.0, dbfs / 20.0) / std::sqrt(2.0); }

AudioClip Finish(std::vector<double> samples, int sample_rate, std::string id) {
  for (double &x : samples) x = std::clamp(x, -1.0, 1.0);
  return AudioClip(std::move(samples), sample_rate, std::move(id));
}

std::vector<int> NoisyLectures(const ScenarioConfig &config) {
  std::vector<int> order(static_cast<std::size_t>(config.lectures));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(DeriveSeed(config.seed, 0x4c454354ULL));
  rng.Shuffle(&order);
  const auto count = static_cast<std::size_t>(
      std::llround(config.noisy_lecture_fraction * config.lectures));
  order.resize(std::min(count, order.size()));
  return order;
}

}  // namespace

AudioClip GenTone(double freq_hz, double duration_s, double amp, int sample_rate) {
  if (!(freq_hz > 0.0) || !(freq_hz < sample_rate / 2.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tone frequency must be in (0, Nyquist)");
  }
  if (!(amp >= 0.0 && amp <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "amp must be in [0, 1]");
  const std::size_t n = SampleCount(duration_s, sample_rate);
  std::vector<double> out(n);
  const double step = 2.0 * M_PI * freq_hz / sample_rate;
  for (std::size_t t = 0; t < n; ++t) out[t] = amp * std::sin(step * static_cast<double>(t));
  return AudioClip(std::move(out), sample_rate, "tone");
}

AudioClip GenVoiced(double f0_hz, double duration_s, double amp, int sample_rate) {
  if (!(f0_hz >= 60.0 && f0_hz <= 400.0)) {
    throw Error(ErrorCode::kInvalidArgument, "voiced f0 must be in [60, 400] Hz");
  }
  if (!(amp >= 0.0 && amp <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "amp must be in [0, 1]");
  if (!(f0_hz < sample_rate / 2.0)) {
    throw Error(ErrorCode::kInvalidArgument, "voiced f0 above Nyquist");
  }
  auto samples = Voiced(f0_hz, SampleCount(duration_s, sample_rate), sample_rate, 0.0);
  for (double &x : samples) x *= amp;
  return AudioClip(std::move(samples), sample_rate, "voiced");
}

AudioClip GenNoise(double amp, double duration_s, int sample_rate, std::uint64_t seed) {
  if (!(amp >= 0.0 && amp <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "amp must be in [0, 1]");
  Rng rng(seed);
  std::vector<double> out(SampleCount(duration_s, sample_rate));
  for (double &x : out) x = amp * rng.Uniform(-1.0, 1.0);
  return AudioClip(std::move(out), sample_rate, "noise");
}

double VoicedLevelDb(double f0_hz, int sample_rate) {
  const int harmonics = HarmonicCount(f0_hz, sample_rate);
  const double peak = HarmonicPeak(harmonics);
  double power = 0.0;
  for (int k = 1; k <= harmonics; ++k) {
    const double a = 1.0 / (k * peak);
    power += a * a * std::pow(10.0, AWeightGainDb(k * f0_hz) / 10.0);
  }
  return 10.0 * std::log10(power);
}

Point2 MicrophonePosition(Position quadrant) {
  switch (quadrant) {
    case Position::kFrontLeft: return {kMicInsetM, kMicInsetM};
    case Position::kFrontRight: return {kRoomWidthM - kMicInsetM, kMicInsetM};
    case Position::kBackLeft: return {kMicInsetM, kRoomDepthM - kMicInsetM};
    case Position::kBackRight: return {kRoomWidthM - kMicInsetM, kRoomDepthM - kMicInsetM};
    case Position::kUnspecified: break;
  }
  throw Error(ErrorCode::kInvalidArgument, "quadrant scenario needs a quadrant position");
}

std::vector<PositionedClip> GenQuadrantScenario(Position source, double source_amp,
                                                int sample_rate, std::uint64_t seed) {
  if (!(source_amp > 0.0 && source_amp <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "source amplitude must be in (0, 1]");
  }
  const Point2 mic = MicrophonePosition(source);
  Rng rng(DeriveSeed(seed, 0x51554144ULL));

  // Two students talking 1-2 m from their microphone, towards the room
  // center.
  const double cx = kRoomWidthM / 2.0 - mic.x, cy = kRoomDepthM / 2.0 - mic.y;
  const double norm = std::hypot(cx, cy);
  const double dist = rng.Uniform(1.0, 2.0);
  const double lateral = rng.Uniform(-0.5, 0.5);
  const Point2 src{mic.x + (cx * dist - cy * lateral) / norm,
                   mic.y + (cy * dist + cx * lateral) / norm};

  const std::size_t n = SampleCount(kQuadrantClipSeconds, sample_rate);
  std::vector<double> talk = Babble(n, sample_rate, 2, &rng);
  double peak = 0.0;
  for (double x : talk) peak = std::max(peak, std::fabs(x));
  for (double &x : talk) x *= source_amp / peak;

  std::vector<PositionedClip> clips;
  for (Position q : {Position::kFrontLeft, Position::kFrontRight, Position::kBackLeft,
                     Position::kBackRight}) {
    const Point2 m = MicrophonePosition(q);
    const double gain = 1.0 / std::max(1.0, std::hypot(src.x - m.x, src.y - m.y));
    Rng background(DeriveSeed(seed, 0x424b4744ULL, static_cast<std::uint64_t>(q)));
    std::vector<double> samples(n);
    for (std::size_t t = 0; t < n; ++t) {
      samples[t] = gain * talk[t] +
                   kQuadrantBackgroundRms * std::sqrt(3.0) * background.Uniform(-1.0, 1.0);
    }
    clips.push_back({q, Finish(std::move(samples), sample_rate, std::string(ToString(q)))});
  }
  return clips;
}

void ScenarioConfig::Validate() const {
  auto fail = [](const std::string &what) {
    throw Error(ErrorCode::kInvalidArgument, "scenario: " + what);
  };
  if (lectures < 0) fail("lecture count must be non-negative");
  if (clips_per_lecture < 1) fail("need at least one clip per lecture");
  if (sample_rate < 8000) fail("sample rate must be at least 8000 Hz");
  if (!(clip_seconds * sample_rate >= 0.064 * sample_rate)) fail("clips must be at least 64 ms");
  if (babble_voices < 1) fail("need at least one babble voice");
  if (!(noisy_lecture_fraction >= 0.0 && noisy_lecture_fraction <= 1.0)) {
    fail("noisy_lecture_fraction must be in [0, 1]");
  }
  if (!gender_plan.empty() && gender_plan.size() != static_cast<std::size_t>(lectures)) {
    fail("gender plan must list one gender per lecture");
  }
  for (Gender g : gender_plan) {
    if (g == Gender::kUnknown) fail("gender plan entries must be male or female");
  }
}

std::string LectureId(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "lecture_%03d", index);
  return buf;
}

SynthLecture GenLecture(const ScenarioConfig &config, int index) {
  config.Validate();
  if (index < 0 || index >= config.lectures) {
    throw Error(ErrorCode::kInvalidArgument, "lecture index out of range");
  }
  const auto lecture_seed = static_cast<std::uint64_t>(index);
  Rng rng(DeriveSeed(config.seed, 0x54454143ULL, lecture_seed));

  SynthLecture lecture;
  LectureTruth &truth = lecture.truth;
  truth.lecture_id = LectureId(index);
  const auto noisy_lectures = NoisyLectures(config);
  const bool noisy = std::find(noisy_lectures.begin(), noisy_lectures.end(), index) !=
                     noisy_lectures.end();
  truth.noise_label = noisy ? LectureLabel::kNoisy : LectureLabel::kQuiet;

  const double coin = rng.Uniform();
  truth.gender = config.gender_plan.empty()
                     ? (coin < 0.5 ? Gender::kMale : Gender::kFemale)
                     : config.gender_plan[static_cast<std::size_t>(index)];
  truth.teacher_f0_hz = truth.gender == Gender::kMale ? rng.Uniform(100.0, 140.0)
                                                      : rng.Uniform(190.0, 250.0);
  truth.instructor_level_dba =
      config.teacher_level_dba +
      rng.Uniform(-config.teacher_level_spread_db, config.teacher_level_spread_db);

  // Which clips carry babble; a strict majority in noisy lectures and a
  // strict minority in quiet ones.
  const int n = config.clips_per_lecture;
  int babble_clips = static_cast<int>(std::lround(n * rng.Uniform(noisy ? 0.6 : 0.2,
                                                                  noisy ? 0.8 : 0.4)));
  if (noisy && 2 * babble_clips <= n) babble_clips = n / 2 + 1;
  if (!noisy && 2 * babble_clips >= n) babble_clips = (n - 1) / 2;
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  rng.Shuffle(&order);
  std::vector<bool> has_babble(static_cast<std::size_t>(n), false);
  for (int i = 0; i < babble_clips; ++i) has_babble[static_cast<std::size_t>(order[i])] = true;

  constexpr std::array<Position, 4> kCycle{Position::kFrontLeft, Position::kFrontRight,
                                           Position::kBackLeft, Position::kBackRight};
  const std::size_t samples = SampleCount(config.clip_seconds, config.sample_rate);
  for (int c = 0; c < n; ++c) {
    Rng clip_rng(DeriveSeed(config.seed, 0x434c4950ULL, lecture_seed, static_cast<std::uint64_t>(c)));
    const double f0 = truth.teacher_f0_hz * clip_rng.Uniform(0.98, 1.02);
    const double level = truth.instructor_level_dba + clip_rng.Uniform(-1.0, 1.0);
    // Gain that puts the A-weighted teacher level at `level` under the
    // default calibration; the envelope has unit mean square.
    const double gain = std::pow(
        10.0, (level - kDefaultCalibrationOffsetDb - VoicedLevelDb(f0, config.sample_rate)) / 20.0);
    const double depth = 0.25;
    const double env_norm = 1.0 / std::sqrt(1.0 + depth * depth / 2.0);
    const double env_rate = clip_rng.Uniform(3.0, 5.0);
    const double env_phase = clip_rng.Uniform(0.0, 2.0 * M_PI);
    const auto voice = Voiced(f0, samples, config.sample_rate, clip_rng.Uniform(0.0, 2.0 * M_PI));

    std::vector<double> mix(samples);
    const double floor_amp = SineRms(config.quiet_floor_dbfs) * std::sqrt(3.0);
    for (std::size_t t = 0; t < samples; ++t) {
      const double time = static_cast<double>(t) / config.sample_rate;
      const double env = env_norm * (1.0 + depth * std::sin(2.0 * M_PI * env_rate * time + env_phase));
      mix[t] = gain * env * voice[t] + floor_amp * clip_rng.Uniform(-1.0, 1.0);
    }
    const bool babble = has_babble[static_cast<std::size_t>(c)];
    if (babble) {
      const double babble_level =
          config.noisy_level_dbfs +
          clip_rng.Uniform(-config.noisy_level_spread_db, config.noisy_level_spread_db);
      const auto noise = Babble(samples, config.sample_rate, config.babble_voices, &clip_rng);
      const double rms = SineRms(babble_level);
      for (std::size_t t = 0; t < samples; ++t) mix[t] += rms * noise[t];
    }

    char name[32];
    std::snprintf(name, sizeof(name), "clip_%02d", c);
    LoadedClip loaded{{truth.lecture_id, kCycle[static_cast<std::size_t>(c) % 4], c},
                      Finish(std::move(mix), config.sample_rate, name)};
    lecture.clips.push_back(std::move(loaded));
    truth.clips.push_back({c, std::string(name) + ".wav",
                           babble ? NoiseLabel::kNoisy : NoiseLabel::kQuiet});
  }
  return lecture;
}

Corpus GenLectureCorpus(const ScenarioConfig &config, const std::string &dir) {
  config.Validate();
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create '" + dir + "': " + ec.message());

  Corpus corpus;
  for (int i = 0; i < config.lectures; ++i) {
    SynthLecture lecture = GenLecture(config, i);
    const fs::path lecture_dir = fs::path(dir) / lecture.truth.lecture_id;
    fs::create_directories(lecture_dir, ec);
    if (ec) throw Error(ErrorCode::kIo, "cannot create '" + lecture_dir.string() + "'");

    LectureManifest manifest;
    manifest.lecture_id = lecture.truth.lecture_id;
    manifest.instructor_label = lecture.truth.gender;
    for (std::size_t c = 0; c < lecture.clips.size(); ++c) {
      const std::string &file = lecture.truth.clips[c].path;
      WriteWav((lecture_dir / file).string(), lecture.clips[c].clip);
      manifest.clips.push_back({file, lecture.clips[c].metadata});
    }
    std::ofstream out(lecture_dir / "manifest.json");
    out << ManifestToJson(manifest);
    if (!out) throw Error(ErrorCode::kIo, "cannot write manifest for " + manifest.lecture_id);

    // Returned manifests carry resolved paths, like LoadManifest's.
    for (ClipEntry &entry : manifest.clips) entry.path = (lecture_dir / entry.path).string();
    corpus.manifests.push_back(std::move(manifest));
    corpus.truth.push_back(std::move(lecture.truth));
  }
  std::ofstream truth_out(fs::path(dir) / "truth.json");
  truth_out << TruthToJson(corpus.truth);
  if (!truth_out) throw Error(ErrorCode::kIo, "cannot write truth file");
  return corpus;
}

std::string TruthToJson(const std::vector<LectureTruth> &truth) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const LectureTruth &t : truth) {
    nlohmann::ordered_json clips = nlohmann::ordered_json::array();
    for (const ClipTruth &c : t.clips) {
      clips.push_back({{"sequence_index", c.sequence_index},
                       {"path", c.path},
                       {"noise_label", std::string(ToString(c.noise))}});
    }
    doc[t.lecture_id] = {{"noise_label", std::string(ToString(t.noise_label))},
                         {"gender", std::string(ToString(t.gender))},
                         {"instructor_level_dba", t.instructor_level_dba},
                         {"teacher_f0_hz", t.teacher_f0_hz},
                         {"clips", clips}};
  }
  return doc.dump(2) + "\n";
}

std::vector<LectureTruth> TruthFromJson(const std::string &text) {
  using Json = nlohmann::ordered_json;
  try {
    const Json doc = Json::parse(text);
    if (!doc.is_object()) throw Error(ErrorCode::kParse, "truth file: expected an object");
    std::vector<LectureTruth> out;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      const Json &j = it.value();
      LectureTruth t;
      t.lecture_id = it.key();
      t.noise_label = ParseLectureLabel(j.at("noise_label").get<std::string>());
      t.gender = ParseGender(j.at("gender").get<std::string>());
      t.instructor_level_dba = j.at("instructor_level_dba").get<double>();
      t.teacher_f0_hz = j.value("teacher_f0_hz", 0.0);
      for (const Json &c : j.at("clips")) {
        t.clips.push_back({c.at("sequence_index").get<int>(), c.at("path").get<std::string>(),
                           ParseNoiseLabel(c.at("noise_label").get<std::string>())});
      }
      out.push_back(std::move(t));
    }
    return out;
  } catch (const Json::exception &e) {
    throw Error(ErrorCode::kParse, std::string("truth file: ") + e.what());
  }
}

}  // namespace classroom
