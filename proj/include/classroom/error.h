// include/classroom/error.h

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

#ifndef CLASSROOM_ERROR_H_
#define CLASSROOM_ERROR_H_

#include <stdexcept>
#include <string>

namespace classroom {

enum class ErrorCode {
  kInvalidArgument,
  // WAV loading.
  kMissingFile,
  kMalformedWav,
  kNonPcm,
  kUnsupportedBitDepth,
  kUnsupportedChannels,
  kTruncatedData,
  // Documents (manifests, models, records).
  kParse,
  kDuplicate,
  kUnknownValue,
  // Training and analysis.
  kInsufficientData,
  kNonFinite,
  kAmbiguous,
  kDegenerateTable,
  kIo,
};

const char *ErrorCodeName(ErrorCode code);

// All library failures are reported by throwing this type. Callers that need
// to distinguish failure kinds switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace classroom

#endif  // CLASSROOM_ERROR_H_
