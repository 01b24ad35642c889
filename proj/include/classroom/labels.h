// include/classroom/labels.h

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

#ifndef CLASSROOM_LABELS_H_
#define CLASSROOM_LABELS_H_

#include <string>
#include <string_view>

namespace classroom {

// Categorical values shared by the manifest, model, and report formats. Each
// has a lowercase snake_case wire name; the Parse* functions throw
// Error(kUnknownValue) on anything else.

enum class Position { kFrontLeft, kFrontRight, kBackLeft, kBackRight, kUnspecified };

enum class Gender { kMale, kFemale, kUnknown };

enum class NoiseLabel { kNoisy, kQuiet };

enum class LectureLabel { kNoisy, kQuiet, kTie };

enum class SpeakerRole { kTeacher, kStudent, kUnknown };

enum class SpeechLevel { kLow, kMedium, kHigh };

std::string_view ToString(Position value);
std::string_view ToString(Gender value);
std::string_view ToString(NoiseLabel value);
std::string_view ToString(LectureLabel value);
std::string_view ToString(SpeakerRole value);
std::string_view ToString(SpeechLevel value);

Position ParsePosition(std::string_view text);
Gender ParseGender(std::string_view text);
NoiseLabel ParseNoiseLabel(std::string_view text);
LectureLabel ParseLectureLabel(std::string_view text);
SpeakerRole ParseSpeakerRole(std::string_view text);
SpeechLevel ParseSpeechLevel(std::string_view text);

}  // namespace classroom

#endif  // CLASSROOM_LABELS_H_
