// src/labels.cc

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

#include "classroom/labels.h"

#include <array>
#include <utility>

#include "classroom/error.h"

namespace classroom {

namespace {

template <typename Enum, std::size_t N>
using NameTable = std::array<std::pair<Enum, std::string_view>, N>;

constexpr NameTable<Position, 5> kPositionNames{{
    {Position::kFrontLeft, "front_left"},
    {Position::kFrontRight, "front_right"},
    {Position::kBackLeft, "back_left"},
    {Position::kBackRight, "back_right"},
    {Position::kUnspecified, "unspecified"},
}};

constexpr NameTable<Gender, 3> kGenderNames{{
    {Gender::kMale, "male"},
    {Gender::kFemale, "female"},
    {Gender::kUnknown, "unknown"},
}};

constexpr NameTable<NoiseLabel, 2> kNoiseNames{{
    {NoiseLabel::kNoisy, "noisy"},
    {NoiseLabel::kQuiet, "quiet"},
}};

constexpr NameTable<LectureLabel, 3> kLectureNames{{
    {LectureLabel::kNoisy, "noisy"},
    {LectureLabel::kQuiet, "quiet"},
    {LectureLabel::kTie, "tie"},
}};

constexpr NameTable<SpeakerRole, 3> kRoleNames{{
    {SpeakerRole::kTeacher, "teacher"},
    {SpeakerRole::kStudent, "student"},
    {SpeakerRole::kUnknown, "unknown"},
}};

constexpr NameTable<SpeechLevel, 3> kLevelNames{{
    {SpeechLevel::kLow, "low"},
    {SpeechLevel::kMedium, "medium"},
    {SpeechLevel::kHigh, "high"},
}};

template <typename Enum, std::size_t N>
std::string_view Lookup(const NameTable<Enum, N> &table, Enum value) {
  for (const auto &[key, name] : table) {
    if (key == value) return name;
  }
  return "?";
}

template <typename Enum, std::size_t N>
Enum Parse(const NameTable<Enum, N> &table, std::string_view text,
           const char *what) {
  for (const auto &[key, name] : table) {
    if (name == text) return key;
  }
  throw Error(ErrorCode::kUnknownValue,
              std::string("unknown ") + what + " '" + std::string(text) + "'");
}

}  // namespace

std::string_view ToString(Position value) { return Lookup(kPositionNames, value); }
std::string_view ToString(Gender value) { return Lookup(kGenderNames, value); }
std::string_view ToString(NoiseLabel value) { return Lookup(kNoiseNames, value); }
std::string_view ToString(LectureLabel value) { return Lookup(kLectureNames, value); }
std::string_view ToString(SpeakerRole value) { return Lookup(kRoleNames, value); }
std::string_view ToString(SpeechLevel value) { return Lookup(kLevelNames, value); }

Position ParsePosition(std::string_view text) {
  return Parse(kPositionNames, text, "position");
}
Gender ParseGender(std::string_view text) {
  return Parse(kGenderNames, text, "gender");
}
NoiseLabel ParseNoiseLabel(std::string_view text) {
  return Parse(kNoiseNames, text, "noise label");
}
LectureLabel ParseLectureLabel(std::string_view text) {
  return Parse(kLectureNames, text, "lecture label");
}
SpeakerRole ParseSpeakerRole(std::string_view text) {
  return Parse(kRoleNames, text, "speaker role");
}
SpeechLevel ParseSpeechLevel(std::string_view text) {
  return Parse(kLevelNames, text, "speech level");
}

const char *ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kMissingFile: return "missing_file";
    case ErrorCode::kMalformedWav: return "malformed_wav";
    case ErrorCode::kNonPcm: return "non_pcm";
    case ErrorCode::kUnsupportedBitDepth: return "unsupported_bit_depth";
    case ErrorCode::kUnsupportedChannels: return "unsupported_channels";
    case ErrorCode::kTruncatedData: return "truncated_data";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kDuplicate: return "duplicate";
    case ErrorCode::kUnknownValue: return "unknown_value";
    case ErrorCode::kInsufficientData: return "insufficient_data";
    case ErrorCode::kNonFinite: return "non_finite";
    case ErrorCode::kAmbiguous: return "ambiguous";
    case ErrorCode::kDegenerateTable: return "degenerate_table";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace classroom
