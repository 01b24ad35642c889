// tests/audio_io_test.cc

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

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "classroom/audio_io.h"
#include "classroom/synth.h"
#include "test_support.h"

namespace classroom {
namespace {

using testing::TempDir;
using testing::ThrowsCode;
using testing::WriteFile;

void Put16(std::string *s, std::uint16_t v) {
  s->push_back(static_cast<char>(v & 0xff));
  s->push_back(static_cast<char>(v >> 8));
}
void Put32(std::string *s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

// Canonical RIFF/WAVE bytes around `data`. `declared_data` overrides the
// data chunk size when nonzero.
std::string Wav(std::uint16_t format, std::uint16_t channels, std::uint32_t rate,
                std::uint16_t bits, const std::string &data, std::uint32_t declared_data = 0) {
  std::string fmt;
  Put16(&fmt, format);
  Put16(&fmt, channels);
  Put32(&fmt, rate);
  Put32(&fmt, rate * channels * bits / 8);
  Put16(&fmt, static_cast<std::uint16_t>(channels * bits / 8));
  Put16(&fmt, bits);
  std::string body = "WAVE";
  body += "fmt ";
  Put32(&body, static_cast<std::uint32_t>(fmt.size()));
  body += fmt;
  body += "data";
  Put32(&body, declared_data ? declared_data : static_cast<std::uint32_t>(data.size()));
  body += data;
  std::string out = "RIFF";
  Put32(&out, static_cast<std::uint32_t>(body.size()));
  return out + body;
}

std::string Pcm16(const std::vector<std::int16_t> &values) {
  std::string s;
  for (std::int16_t v : values) Put16(&s, static_cast<std::uint16_t>(v));
  return s;
}

TEST_CASE("clip invariants") {
  CHECK(ThrowsCode([] { AudioClip({}, 16000); }, ErrorCode::kInvalidArgument));
  CHECK(ThrowsCode([] { AudioClip({0.1}, 0); }, ErrorCode::kInvalidArgument));
  CHECK(ThrowsCode([] { AudioClip({1.5}, 16000); }, ErrorCode::kInvalidArgument));
  CHECK(ThrowsCode([] { AudioClip({NAN}, 16000); }, ErrorCode::kInvalidArgument));
  const AudioClip c({0.5, -0.75}, 8000, "x");
  CHECK(c.duration() == doctest::Approx(2.0 / 8000));
  const AudioClip s = c.Scaled(2.0);
  CHECK(s.samples()[0] == 1.0);
  CHECK(s.samples()[1] == -1.0);
}

TEST_CASE("load silence and stereo") {
  TempDir dir("audio");
  WriteFile(dir / "silence.wav", Wav(1, 1, 16000, 16, std::string(32000, '\0')));
  const AudioClip silence = LoadWav(dir / "silence.wav");
  CHECK(silence.size() == 16000);
  CHECK(silence.sample_rate() == 16000);
  CHECK(silence.id() == "silence");
  for (double x : silence.samples()) CHECK(x == 0.0);

  std::vector<std::int16_t> lr;
  for (int i = 0; i < 100; ++i) {
    lr.push_back(16384);
    lr.push_back(-16384);
  }
  WriteFile(dir / "stereo.wav", Wav(1, 2, 8000, 16, Pcm16(lr)));
  const AudioClip mono = LoadWav(dir / "stereo.wav");
  CHECK(mono.size() == 100);
  for (double x : mono.samples()) CHECK(x == 0.0);
}

TEST_CASE("sample scaling") {
  TempDir dir("audio");
  WriteFile(dir / "a.wav", Wav(1, 1, 8000, 16, Pcm16({-32768, 32767, 16384, 0})));
  const AudioClip a = LoadWav(dir / "a.wav");
  CHECK(a.samples()[0] == -1.0);
  CHECK(a.samples()[1] == 32767.0 / 32768.0);
  CHECK(a.samples()[2] == 0.5);

  // 8-bit is unsigned with 128 as zero.
  WriteFile(dir / "b.wav", Wav(1, 1, 8000, 8, std::string("\x00\x80\xff\xc0", 4)));
  const AudioClip b = LoadWav(dir / "b.wav");
  REQUIRE(b.size() == 4);
  CHECK(b.samples()[0] == -1.0);
  CHECK(b.samples()[1] == 0.0);
  CHECK(b.samples()[2] == 127.0 / 128.0);
  CHECK(b.samples()[3] == 0.5);
}

TEST_CASE("malformed files have distinct errors") {
  TempDir dir("audio");
  const std::string data = Pcm16({1, 2, 3, 4});
  WriteFile(dir / "text.wav", "definitely not audio");
  WriteFile(dir / "float.wav", Wav(3, 1, 8000, 16, data));
  WriteFile(dir / "deep.wav", Wav(1, 1, 8000, 24, std::string(12, '\0')));
  WriteFile(dir / "wide.wav", Wav(1, 3, 8000, 16, std::string(12, '\0')));
  WriteFile(dir / "short.wav", Wav(1, 1, 8000, 16, data, 4000));
  std::string no_data = Wav(1, 1, 8000, 16, "");
  no_data.resize(no_data.size() - 8);
  WriteFile(dir / "nodata.wav", no_data);

  CHECK(ThrowsCode([&] { LoadWav(dir / "absent.wav"); }, ErrorCode::kMissingFile));
  CHECK(ThrowsCode([&] { LoadWav(dir / "text.wav"); }, ErrorCode::kMalformedWav));
  CHECK(ThrowsCode([&] { LoadWav(dir / "float.wav"); }, ErrorCode::kNonPcm));
  CHECK(ThrowsCode([&] { LoadWav(dir / "deep.wav"); }, ErrorCode::kUnsupportedBitDepth));
  CHECK(ThrowsCode([&] { LoadWav(dir / "wide.wav"); }, ErrorCode::kUnsupportedChannels));
  CHECK(ThrowsCode([&] { LoadWav(dir / "short.wav"); }, ErrorCode::kTruncatedData));
  CHECK(ThrowsCode([&] { LoadWav(dir / "nodata.wav"); }, ErrorCode::kMalformedWav));
}

TEST_CASE("write and read back") {
  TempDir dir("audio");
  const AudioClip tone = GenTone(440.0, 0.5, 0.8, 16000);
  WriteWav(dir / "tone.wav", tone);
  const AudioClip back = LoadWav(dir / "tone.wav");
  REQUIRE(back.size() == tone.size());
  double peak = 0.0;
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(std::fabs(back.samples()[i] - tone.samples()[i]) <= 1.0 / 32768.0);
    peak = std::max(peak, std::fabs(back.samples()[i]));
  }
  CHECK(peak >= 0.79);
  CHECK(peak <= 0.80);

  // Reading is deterministic and writing is idempotent after quantization.
  CHECK(LoadWav(dir / "tone.wav").samples()[123] == back.samples()[123]);
  WriteWav(dir / "again.wav", back);
  CHECK(testing::ReadFile(dir / "again.wav") == testing::ReadFile(dir / "tone.wav"));

  const AudioClip loud({1.0, -1.0, 0.0}, 8000);
  WriteWav(dir / "loud.wav", loud);
  const AudioClip l = LoadWav(dir / "loud.wav");
  CHECK(l.samples()[0] == 32767.0 / 32768.0);
  CHECK(l.samples()[1] == -1.0);
}

TEST_CASE("manifest parsing") {
  const LectureManifest one = ParseManifest(
      R"({"lecture_id":"L1","instructor_label":null,)"
      R"("clips":[{"path":"a.wav","position":"front_left","sequence_index":0}]})",
      "/data");
  CHECK(one.lecture_id == "L1");
  CHECK(!one.instructor_label.has_value());
  REQUIRE(one.clips.size() == 1);
  CHECK(one.clips[0].metadata.position == Position::kFrontLeft);
  CHECK(one.clips[0].metadata.lecture_id == "L1");
  CHECK(one.clips[0].path == "/data/a.wav");

  const LectureManifest labeled = ParseManifest(
      R"({"lecture_id":"L2","instructor_label":"female",)"
      R"("clips":[{"path":"/abs/b.wav","position":"back_right","sequence_index":3}]})",
      "/data");
  CHECK(labeled.instructor_label == Gender::kFemale);
  CHECK(labeled.clips[0].path == "/abs/b.wav");

  CHECK(ThrowsCode([] { ParseManifest(R"({"lecture_id":"x","clips":[]})"); },
                   ErrorCode::kInsufficientData));
  CHECK(ThrowsCode([] { ParseManifest("{not json"); }, ErrorCode::kParse));
  CHECK(ThrowsCode(
      [] {
        ParseManifest(R"({"lecture_id":"x","clips":[)"
                      R"({"path":"a.wav","position":"front_left","sequence_index":0},)"
                      R"({"path":"a.wav","position":"front_right","sequence_index":1}]})");
      },
      ErrorCode::kDuplicate));
  CHECK(ThrowsCode(
      [] {
        ParseManifest(R"({"lecture_id":"x","clips":[)"
                      R"({"path":"a.wav","position":"front_left","sequence_index":0},)"
                      R"({"path":"b.wav","position":"front_right","sequence_index":0}]})");
      },
      ErrorCode::kDuplicate));
  CHECK(ThrowsCode(
      [] {
        ParseManifest(R"({"lecture_id":"x","clips":[)"
                      R"({"path":"a.wav","position":"middle","sequence_index":0}]})");
      },
      ErrorCode::kUnknownValue));
}

TEST_CASE("manifest round trip through the synth corpus") {
  TempDir dir("audio");
  ScenarioConfig config;
  config.lectures = 1;
  config.clips_per_lecture = 20;
  config.clip_seconds = 0.25;
  GenLectureCorpus(config, dir.path().string());
  const LectureManifest m = LoadManifest(dir / "lecture_000/manifest.json");
  REQUIRE(m.clips.size() == 20);
  for (int i = 0; i < 20; ++i) {
    CHECK(m.clips[static_cast<std::size_t>(i)].metadata.sequence_index == i);
    CHECK(LoadWav(m.clips[static_cast<std::size_t>(i)].path).size() == 4000);
  }
  const LectureManifest again = ParseManifest(ManifestToJson(m));
  CHECK(again.clips.size() == 20);
  CHECK(again.instructor_label == m.instructor_label);
}

}  // namespace
}  // namespace classroom
