// src/audio_io.cc

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

#include "classroom/audio_io.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>

#include "classroom/error.h"
#include "json.hpp"

namespace classroom {

AudioClip::AudioClip(std::vector<double> samples, int sample_rate,
                     std::string id)
    : samples_(std::move(samples)), sample_rate_(sample_rate), id_(std::move(id)) {
  if (sample_rate_ <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "sample rate must be positive");
  }
  if (samples_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "audio clip has no samples");
  }
  for (double s : samples_) {
    if (!std::isfinite(s) || s < -1.0 || s > 1.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "audio sample outside [-1, 1] in clip '" + id_ + "'");
    }
  }
}

AudioClip AudioClip::Scaled(double gain) const {
  std::vector<double> out(samples_.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::clamp(samples_[i] * gain, -1.0, 1.0);
  }
  return AudioClip(std::move(out), sample_rate_, id_);
}

namespace {

std::uint32_t ReadU32(const std::vector<unsigned char> &bytes, std::size_t at) {
  return static_cast<std::uint32_t>(bytes[at]) |
         (static_cast<std::uint32_t>(bytes[at + 1]) << 8) |
         (static_cast<std::uint32_t>(bytes[at + 2]) << 16) |
         (static_cast<std::uint32_t>(bytes[at + 3]) << 24);
}

std::uint16_t ReadU16(const std::vector<unsigned char> &bytes, std::size_t at) {
  return static_cast<std::uint16_t>(bytes[at] | (bytes[at + 1] << 8));
}

bool HasTag(const std::vector<unsigned char> &bytes, std::size_t at,
            const char *tag) {
  return std::equal(tag, tag + 4, bytes.begin() + static_cast<long>(at));
}

void PutU32(std::string *out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void PutU16(std::string *out, std::uint16_t v) {
  out->push_back(static_cast<char>(v & 0xff));
  out->push_back(static_cast<char>((v >> 8) & 0xff));
}

struct WavFormat {
  std::uint16_t format_tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits_per_sample = 0;
};

}  // namespace

AudioClip LoadWav(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kMissingFile, "cannot open '" + path + "'");
  }
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || !HasTag(bytes, 0, "RIFF") || !HasTag(bytes, 8, "WAVE")) {
    throw Error(ErrorCode::kMalformedWav, "'" + path + "' is not a RIFF/WAVE file");
  }

  std::optional<WavFormat> format;
  std::size_t data_offset = 0, data_size = 0;
  bool have_data = false;
  std::size_t at = 12;
  while (at + 8 <= bytes.size()) {
    const std::size_t chunk_size = ReadU32(bytes, at + 4);
    const std::size_t body = at + 8;
    if (HasTag(bytes, at, "fmt ")) {
      if (chunk_size < 16 || body + 16 > bytes.size()) {
        throw Error(ErrorCode::kMalformedWav, "short fmt chunk in '" + path + "'");
      }
      WavFormat f;
      f.format_tag = ReadU16(bytes, body);
      f.channels = ReadU16(bytes, body + 2);
      f.sample_rate = ReadU32(bytes, body + 4);
      f.block_align = ReadU16(bytes, body + 12);
      f.bits_per_sample = ReadU16(bytes, body + 14);
      format = f;
    } else if (HasTag(bytes, at, "data")) {
      data_offset = body;
      data_size = chunk_size;
      have_data = true;
      if (body + chunk_size > bytes.size()) break;  // truncated, reported below
    }
    at = body + chunk_size + (chunk_size & 1);
  }

  if (!format) {
    throw Error(ErrorCode::kMalformedWav, "no fmt chunk in '" + path + "'");
  }
  if (format->format_tag != 1) {
    throw Error(ErrorCode::kNonPcm, "'" + path + "' is not PCM (format tag " +
                                        std::to_string(format->format_tag) + ")");
  }
  if (format->bits_per_sample != 8 && format->bits_per_sample != 16) {
    throw Error(ErrorCode::kUnsupportedBitDepth,
                "'" + path + "' has unsupported bit depth " +
                    std::to_string(format->bits_per_sample));
  }
  if (format->channels != 1 && format->channels != 2) {
    throw Error(ErrorCode::kUnsupportedChannels,
                "'" + path + "' has " + std::to_string(format->channels) + " channels");
  }
  if (format->sample_rate == 0) {
    throw Error(ErrorCode::kMalformedWav, "'" + path + "' declares sample rate 0");
  }
  if (!have_data) {
    throw Error(ErrorCode::kMalformedWav, "no data chunk in '" + path + "'");
  }
  const std::size_t bytes_per_sample = format->bits_per_sample / 8;
  const std::size_t frame_bytes = bytes_per_sample * format->channels;
  if (data_offset + data_size > bytes.size() || data_size % frame_bytes != 0) {
    throw Error(ErrorCode::kTruncatedData, "truncated data chunk in '" + path + "'");
  }

  const std::size_t frames = data_size / frame_bytes;
  std::vector<double> samples(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double sum = 0.0;
    for (std::size_t c = 0; c < format->channels; ++c) {
      const std::size_t pos = data_offset + i * frame_bytes + c * bytes_per_sample;
      if (bytes_per_sample == 1) {
        sum += (static_cast<int>(bytes[pos]) - 128) / 128.0;
      } else {
        sum += static_cast<std::int16_t>(ReadU16(bytes, pos)) / 32768.0;
      }
    }
    samples[i] = std::clamp(sum / format->channels, -1.0, 1.0);
  }
  if (samples.empty()) {
    throw Error(ErrorCode::kTruncatedData, "empty data chunk in '" + path + "'");
  }
  return AudioClip(std::move(samples), static_cast<int>(format->sample_rate),
                   std::filesystem::path(path).stem().string());
}

void WriteWav(const std::string &path, const AudioClip &clip) {
  const auto n = static_cast<std::uint32_t>(clip.size());
  std::string out;
  out.reserve(44 + 2 * n);
  out += "RIFF";
  PutU32(&out, 36 + 2 * n);
  out += "WAVEfmt ";
  PutU32(&out, 16);
  PutU16(&out, 1);
  PutU16(&out, 1);
  PutU32(&out, static_cast<std::uint32_t>(clip.sample_rate()));
  PutU32(&out, static_cast<std::uint32_t>(clip.sample_rate()) * 2);
  PutU16(&out, 2);
  PutU16(&out, 16);
  out += "data";
  PutU32(&out, 2 * n);
  for (double s : clip.samples()) {
    const double q = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
    PutU16(&out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  std::ofstream file(path, std::ios::binary);
  if (!file.write(out.data(), static_cast<std::streamsize>(out.size()))) {
    throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  }
}

LectureManifest ParseManifest(const std::string &json_text,
                              const std::string &base_dir) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kParse, std::string("manifest: ") + e.what());
  }

  LectureManifest manifest;
  try {
    if (!doc.is_object()) throw Error(ErrorCode::kParse, "manifest: expected an object");
    manifest.lecture_id = doc.at("lecture_id").get<std::string>();
    if (doc.contains("instructor_label") && !doc["instructor_label"].is_null()) {
      manifest.instructor_label =
          ParseGender(doc["instructor_label"].get<std::string>());
      if (*manifest.instructor_label == Gender::kUnknown) {
        throw Error(ErrorCode::kUnknownValue,
                    "manifest: instructor_label must be male, female or null");
      }
    }
    const json &clips = doc.at("clips");
    if (!clips.is_array()) throw Error(ErrorCode::kParse, "manifest: clips must be an array");

    std::set<int> seen_index;
    std::set<std::string> seen_path;
    for (const json &entry : clips) {
      ClipEntry clip;
      std::filesystem::path p = entry.at("path").get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
      clip.path = p.lexically_normal().string();
      clip.metadata.lecture_id = manifest.lecture_id;
      clip.metadata.position = ParsePosition(entry.at("position").get<std::string>());
      clip.metadata.sequence_index = entry.at("sequence_index").get<int>();
      if (!seen_index.insert(clip.metadata.sequence_index).second) {
        throw Error(ErrorCode::kDuplicate,
                    "manifest: duplicate sequence_index " +
                        std::to_string(clip.metadata.sequence_index));
      }
      if (!seen_path.insert(clip.path).second) {
        throw Error(ErrorCode::kDuplicate, "manifest: duplicate clip path " + clip.path);
      }
      manifest.clips.push_back(std::move(clip));
    }
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kParse, std::string("manifest: ") + e.what());
  }
  if (manifest.clips.empty()) {
    throw Error(ErrorCode::kInsufficientData, "manifest: no clips");
  }
  return manifest;
}

LectureManifest LoadManifest(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot open '" + path + "'");
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  return ParseManifest(text, std::filesystem::path(path).parent_path().string());
}

std::string ManifestToJson(const LectureManifest &manifest) {
  nlohmann::ordered_json doc;
  doc["lecture_id"] = manifest.lecture_id;
  if (manifest.instructor_label) {
    doc["instructor_label"] = std::string(ToString(*manifest.instructor_label));
  } else {
    doc["instructor_label"] = nullptr;
  }
  doc["clips"] = nlohmann::ordered_json::array();
  for (const ClipEntry &clip : manifest.clips) {
    doc["clips"].push_back({{"path", clip.path},
                            {"position", std::string(ToString(clip.metadata.position))},
                            {"sequence_index", clip.metadata.sequence_index}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace classroom
