// tests/dsp_test.cc

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
#include <vector>

#include "classroom/dsp.h"
#include "classroom/random.h"
#include "test_support.h"

namespace classroom {
namespace {

using testing::ThrowsCode;

std::vector<double> DirectPowerSpectrum(const std::vector<double> &x) {
  const std::size_t n = x.size();
  std::vector<double> out(n / 2 + 1);
  for (std::size_t k = 0; k < out.size(); ++k) {
    long double re = 0, im = 0;
    for (std::size_t t = 0; t < n; ++t) {
      const long double arg = -2.0L * M_PIl * static_cast<long double>((k * t) % n) / n;
      re += x[t] * std::cos(arg);
      im += x[t] * std::sin(arg);
    }
    out[k] = static_cast<double>(re * re + im * im);
  }
  return out;
}

std::vector<double> RandomSignal(Rng *rng, std::size_t n) {
  std::vector<double> x(n);
  for (double &v : x) v = rng->Uniform(-1.0, 1.0);
  return x;
}

AudioClip Ramp(std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i % 100) / 100.0;
  return AudioClip(x, 16000);
}

TEST_CASE("frame counts") {
  CHECK(FrameSignal(Ramp(16000), 512, 256).size() == 61);
  CHECK(FrameSignal(Ramp(512), 512, 256).size() == 1);
  const FrameSequence disjoint = FrameSignal(Ramp(1024), 512, 512);
  REQUIRE(disjoint.size() == 2);
  CHECK(disjoint.frames[1][0] == doctest::Approx(0.12));  // sample 512
  CHECK(disjoint.frame_len == 512);
  CHECK(disjoint.hop == 512);
}

TEST_CASE("frames start hop samples apart") {
  const AudioClip clip = Ramp(3000);
  const FrameSequence seq = FrameSignal(clip, 400, 150);
  CHECK(seq.size() == (3000 - 400) / 150 + 1);
  for (std::size_t f = 0; f < seq.size(); ++f) {
    REQUIRE(seq.frames[f].size() == 400);
    for (std::size_t i = 0; i < 400; i += 37) CHECK(seq.frames[f][i] == clip.samples()[f * 150 + i]);
  }
}

TEST_CASE("framing is linear in amplitude") {
  const AudioClip clip = Ramp(2048);
  const FrameSequence a = FrameSignal(clip, 256, 128);
  const FrameSequence b = FrameSignal(clip.Scaled(0.25), 256, 128);
  for (std::size_t f = 0; f < a.size(); ++f) {
    for (std::size_t i = 0; i < 256; ++i) CHECK(b.frames[f][i] == 0.25 * a.frames[f][i]);
  }
}

TEST_CASE("frame parameter errors") {
  CHECK(ThrowsCode([] { FrameSignal(Ramp(100), 512, 256); }, ErrorCode::kInvalidArgument));
  CHECK(ThrowsCode([] { FrameSignal(Ramp(1000), 512, 0); }, ErrorCode::kInvalidArgument));
  CHECK(ThrowsCode([] { FrameSignal(Ramp(1000), 256, 512); }, ErrorCode::kInvalidArgument));
}

TEST_CASE("frame params from milliseconds") {
  const FrameParams p = FrameParams::FromMilliseconds(16000);
  CHECK(p.frame_len == 512);
  CHECK(p.hop == 256);
  const FrameParams q = FrameParams::FromMilliseconds(8000, 25.0, 0.6);
  CHECK(q.frame_len == 200);
  CHECK(q.hop == 80);
}

TEST_CASE("hamming window") {
  const auto w5 = HammingWindow(5);
  CHECK(w5[0] == doctest::Approx(0.08).epsilon(1e-12));
  CHECK(w5[2] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(w5[4] == doctest::Approx(0.08).epsilon(1e-12));
  for (std::size_t n : {2u, 3u, 16u, 255u, 512u, 1000u}) {
    const auto w = HammingWindow(n);
    REQUIRE(w.size() == n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(w[i] == w[n - 1 - i]);
      CHECK(w[i] >= 0.08 - 1e-15);
      CHECK(w[i] <= 1.0 + 1e-15);
      const double oracle = 0.54 - 0.46 * std::cos(2.0 * M_PI * i / (n - 1));
      CHECK(std::fabs(w[i] - oracle) <= 1e-12);
    }
  }
  CHECK(ThrowsCode([] { HammingWindow(1); }, ErrorCode::kInvalidArgument));
}

TEST_CASE("power spectrum matches the direct DFT") {
  Rng rng(17);
  for (std::size_t n : {2u, 3u, 7u, 64u, 100u, 256u, 400u, 512u}) {
    const auto x = RandomSignal(&rng, n);
    const auto got = PowerSpectrum(x);
    const auto want = DirectPowerSpectrum(x);
    REQUIRE(got.size() == n / 2 + 1);
    const double scale = *std::max_element(want.begin(), want.end());
    for (std::size_t k = 0; k < got.size(); ++k) {
      CHECK(got[k] >= 0.0);
      CHECK(std::fabs(got[k] - want[k]) <= 1e-9 * scale);
    }
  }
}

TEST_CASE("power spectrum closed forms") {
  const auto zero = PowerSpectrum(std::vector<double>(64, 0.0));
  for (double v : zero) CHECK(v == 0.0);

  const std::size_t n = 128, bin = 9;
  std::vector<double> c(n);
  for (std::size_t t = 0; t < n; ++t) c[t] = std::cos(2.0 * M_PI * bin * t / n);
  const auto p = PowerSpectrum(c);
  CHECK(p[bin] == doctest::Approx((n / 2.0) * (n / 2.0)).epsilon(1e-12));
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (k != bin) CHECK(p[k] < 1e-18 * p[bin] + 1e-18);
  }

  // Parseval over the full (mirrored) spectrum.
  Rng rng(5);
  for (std::size_t len : {64u, 99u}) {
    const auto x = RandomSignal(&rng, len);
    const auto half = PowerSpectrum(x);
    double energy = 0.0, spectral = 0.0;
    for (double v : x) energy += v * v;
    for (std::size_t k = 0; k < len; ++k) spectral += half[k <= len / 2 ? k : len - k];
    CHECK(spectral / len == doctest::Approx(energy).epsilon(1e-12));
  }
}

TEST_CASE("autocorrelation") {
  const auto r = Autocorrelation(std::vector<double>(8, 1.0), 2);
  REQUIRE(r.size() == 3);
  CHECK(r[0] == 8.0);
  CHECK(r[1] == 7.0);
  CHECK(r[2] == 6.0);

  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = RandomSignal(&rng, 50 + trial);
    const auto a = Autocorrelation(x, x.size() - 1);
    for (std::size_t k = 0; k < a.size(); ++k) {
      long double want = 0;
      for (std::size_t t = 0; t + k < x.size(); ++t) want += x[t] * x[t + k];
      CHECK(std::fabs(a[k] - static_cast<double>(want)) <= 1e-12 * a[0]);
      CHECK(std::fabs(a[k]) <= a[0]);
    }
  }

  // Pulse train of period 40: local maximum at lag 40.
  std::vector<double> pulses(400, 0.0);
  for (std::size_t t = 0; t < pulses.size(); t += 40) pulses[t] = 1.0;
  const auto p = Autocorrelation(pulses, 60);
  CHECK(p[40] > p[39]);
  CHECK(p[40] > p[41]);
  CHECK(std::max_element(p.begin() + 20, p.end()) - p.begin() == 40);

  CHECK(ThrowsCode([] { Autocorrelation(std::vector<double>(8, 1.0), 8); },
                   ErrorCode::kInvalidArgument));
}

TEST_CASE("median filter") {
  const std::vector<double> spike{1, 1, 9, 1, 1};
  CHECK(MedianFilter(spike, 3) == std::vector<double>(5, 1.0));
  CHECK(MedianFilter(spike, 1) == spike);
  const std::vector<double> flat(7, 2.5);
  CHECK(MedianFilter(flat, 5) == flat);

  // Edges shrink symmetrically: index 1 with window 5 uses [0, 2].
  const std::vector<double> edge{5, 1, 3, 100, 100, 100};
  const auto m = MedianFilter(edge, 5);
  CHECK(m[0] == 5);
  CHECK(m[1] == 3);
  CHECK(m[2] == 5);

  const std::vector<double> monotone{1, 2, 4, 4, 7, 9, 12};
  const auto once = MedianFilter(monotone, 3);
  CHECK(MedianFilter(once, 3) == once);

  CHECK(ThrowsCode([] { MedianFilter(std::vector<double>(4, 0.0), 2); },
                   ErrorCode::kInvalidArgument));
}

}  // namespace
}  // namespace classroom
