// include/classroom/dsp.h

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

#ifndef CLASSROOM_DSP_H_
#define CLASSROOM_DSP_H_

#include <cstddef>
#include <span>
#include <vector>

#include "classroom/audio_io.h"

namespace classroom {

struct FrameParams {
  std::size_t frame_len = 512;
  std::size_t hop = 256;

  // 32 ms frames with 50% overlap unless told otherwise.
  static FrameParams FromMilliseconds(int sample_rate, double frame_ms = 32.0,
                                      double overlap = 0.5);
};

struct FrameSequence {
  std::vector<std::vector<double>> frames;
  std::size_t frame_len = 0;
  std::size_t hop = 0;
  int sample_rate = 0;

  std::size_t size() const { return frames.size(); }
};

// Splits the clip into floor((N - frame_len) / hop) + 1 frames; the trailing
// remainder is dropped. Requires 0 < hop <= frame_len <= N.
FrameSequence FrameSignal(const AudioClip &clip, std::size_t frame_len,
                          std::size_t hop);
inline FrameSequence FrameSignal(const AudioClip &clip, const FrameParams &p) {
  return FrameSignal(clip, p.frame_len, p.hop);
}

// Symmetric Hamming window, 0.54 - 0.46 cos(2 pi i / (n - 1)). n >= 2.
std::vector<double> HammingWindow(std::size_t n);

// |DFT(x)|^2 for bins 0..floor(n/2). Radix-2 FFT for power-of-two lengths,
// direct summation otherwise.
std::vector<double> PowerSpectrum(std::span<const double> frame);

// r(k) = sum_t x(t) x(t + k) for k = 0..max_lag. max_lag < frame length.
std::vector<double> Autocorrelation(std::span<const double> frame,
                                    std::size_t max_lag);

// Running median with an odd window. Near the ends the window shrinks
// symmetrically, so the first and last samples pass through unchanged.
std::vector<double> MedianFilter(std::span<const double> series,
                                 std::size_t window);

}  // namespace classroom

#endif  // CLASSROOM_DSP_H_
