// include/classroom/audio_io.h

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

#ifndef CLASSROOM_AUDIO_IO_H_
#define CLASSROOM_AUDIO_IO_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "classroom/labels.h"

namespace classroom {

// A mono recording with samples in [-1, 1]. The constructor enforces the
// invariants (non-empty, positive rate, samples in range and finite), so every
// AudioClip reaching the analysis code is valid.
class AudioClip {
 public:
  AudioClip(std::vector<double> samples, int sample_rate, std::string id = "");

  std::span<const double> samples() const { return samples_; }
  int sample_rate() const { return sample_rate_; }
  const std::string &id() const { return id_; }
  std::size_t size() const { return samples_.size(); }
  double duration() const {
    return static_cast<double>(samples_.size()) / sample_rate_;
  }

  // Returns a copy with every sample multiplied by `gain`, clamped to [-1, 1].
  AudioClip Scaled(double gain) const;

  bool operator==(const AudioClip &other) const = default;

 private:
  std::vector<double> samples_;
  int sample_rate_;
  std::string id_;
};

struct ClipMetadata {
  std::string lecture_id;
  Position position = Position::kUnspecified;
  int sequence_index = 0;
};

struct ClipEntry {
  std::string path;  // resolved against the manifest's directory
  ClipMetadata metadata;
};

struct LectureManifest {
  std::string lecture_id;
  std::vector<ClipEntry> clips;
  std::optional<Gender> instructor_label;
};

// Reads a RIFF/WAVE PCM file (8 or 16 bit, 1 or 2 channels). Stereo is
// averaged to mono; integer samples are divided by 128 (8 bit) or 32768
// (16 bit) and clamped to [-1, 1]. The clip id is the file's stem.
AudioClip LoadWav(const std::string &path);

// Writes 16-bit mono PCM. Samples are rounded to the nearest multiple of
// 1/32768 and saturated at the integer range.
void WriteWav(const std::string &path, const AudioClip &clip);

// Parses the lecture manifest JSON document. Relative clip paths are resolved
// against the directory holding the manifest.
LectureManifest LoadManifest(const std::string &path);
LectureManifest ParseManifest(const std::string &json_text,
                              const std::string &base_dir = "");

std::string ManifestToJson(const LectureManifest &manifest);

}  // namespace classroom

#endif  // CLASSROOM_AUDIO_IO_H_
