// src/dsp.cc

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

#include "classroom/dsp.h"

#include <algorithm>
#include <cmath>
#include <complex>

#include "classroom/error.h"

namespace classroom {

FrameParams FrameParams::FromMilliseconds(int sample_rate, double frame_ms,
                                          double overlap) {
  if (sample_rate <= 0 || frame_ms <= 0.0 || overlap < 0.0 || overlap >= 1.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "frame length must be positive and overlap in [0, 1)");
  }
  FrameParams p;
  p.frame_len = static_cast<std::size_t>(std::lround(sample_rate * frame_ms / 1000.0));
  p.frame_len = std::max<std::size_t>(p.frame_len, 2);
  p.hop = static_cast<std::size_t>(std::lround(p.frame_len * (1.0 - overlap)));
  p.hop = std::clamp<std::size_t>(p.hop, 1, p.frame_len);
  return p;
}

FrameSequence FrameSignal(const AudioClip &clip, std::size_t frame_len,
                          std::size_t hop) {
  const std::size_t n = clip.size();
  if (hop == 0 || hop > frame_len) {
    throw Error(ErrorCode::kInvalidArgument, "hop must satisfy 0 < hop <= frame_len");
  }
  if (frame_len > n) {
    throw Error(ErrorCode::kInvalidArgument,
                "frame length " + std::to_string(frame_len) +
                    " exceeds clip length " + std::to_string(n));
  }
  FrameSequence seq;
  seq.frame_len = frame_len;
  seq.hop = hop;
  seq.sample_rate = clip.sample_rate();
  const std::size_t count = (n - frame_len) / hop + 1;
  seq.frames.reserve(count);
  const auto samples = clip.samples();
  for (std::size_t f = 0; f < count; ++f) {
    const auto begin = samples.begin() + static_cast<long>(f * hop);
    seq.frames.emplace_back(begin, begin + static_cast<long>(frame_len));
  }
  return seq;
}

std::vector<double> HammingWindow(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "Hamming window needs n >= 2");
  std::vector<double> w(n);
  const double step = 2.0 * M_PI / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.54 - 0.46 * std::cos(step * static_cast<double>(i));
  }
  // cos() is not exactly symmetric around pi; mirror to make w(i) == w(n-1-i).
  for (std::size_t i = 0; i < n / 2; ++i) w[n - 1 - i] = w[i];
  return w;
}

namespace {

bool IsPowerOfTwo(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 decimation-in-time FFT.
void Fft(std::vector<std::complex<double>> *data) {
  auto &a = *data;
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    for (std::size_t k = 0; k < half; ++k) {
      // Twiddles from the angle directly rather than by repeated rotation.
      const double angle = -2.0 * M_PI * static_cast<double>(k) / static_cast<double>(len);
      const std::complex<double> w(std::cos(angle), std::sin(angle));
      for (std::size_t i = 0; i < n; i += len) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + half] * w;
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
}

}  // namespace

std::vector<double> PowerSpectrum(std::span<const double> frame) {
  const std::size_t n = frame.size();
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "power spectrum needs n >= 2");
  const std::size_t bins = n / 2 + 1;
  std::vector<double> power(bins);
  if (IsPowerOfTwo(n)) {
    std::vector<std::complex<double>> buf(frame.begin(), frame.end());
    Fft(&buf);
    for (std::size_t k = 0; k < bins; ++k) power[k] = std::norm(buf[k]);
    return power;
  }
  for (std::size_t k = 0; k < bins; ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double angle = -2.0 * M_PI * static_cast<double>((k * t) % n) /
                           static_cast<double>(n);
      re += frame[t] * std::cos(angle);
      im += frame[t] * std::sin(angle);
    }
    power[k] = re * re + im * im;
  }
  return power;
}

std::vector<double> Autocorrelation(std::span<const double> frame,
                                    std::size_t max_lag) {
  const std::size_t n = frame.size();
  if (max_lag >= n) {
    throw Error(ErrorCode::kInvalidArgument, "autocorrelation lag must be < frame length");
  }
  std::vector<double> r(max_lag + 1, 0.0);
  for (std::size_t k = 0; k <= max_lag; ++k) {
    double sum = 0.0;
    for (std::size_t t = 0; t + k < n; ++t) sum += frame[t] * frame[t + k];
    r[k] = sum;
  }
  return r;
}

std::vector<double> MedianFilter(std::span<const double> series,
                                 std::size_t window) {
  if (window == 0 || window % 2 == 0) {
    throw Error(ErrorCode::kInvalidArgument, "median filter window must be odd");
  }
  const std::size_t n = series.size();
  const std::size_t half = window / 2;
  std::vector<double> out(n);
  std::vector<double> scratch;
  scratch.reserve(window);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t h = std::min({half, i, n - 1 - i});
    scratch.assign(series.begin() + static_cast<long>(i - h),
                   series.begin() + static_cast<long>(i + h + 1));
    auto mid = scratch.begin() + static_cast<long>(h);
    std::nth_element(scratch.begin(), mid, scratch.end());
    out[i] = *mid;
  }
  return out;
}

}  // namespace classroom
