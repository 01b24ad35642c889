// src/features.cc

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

#include "classroom/features.h"

#include <algorithm>
#include <cmath>

#include "classroom/error.h"

namespace classroom {

namespace {

// RASTA band-pass across frames: numerator taps for x[t], x[t-1], ..., x[t-4]
// and a single pole.
constexpr std::array<double, 5> kRastaNumerator{0.2, 0.1, 0.0, -0.1, -0.2};
constexpr double kRastaPole = 0.94;
constexpr double kBandEnergyFloor = 1e-30;

double HzToBark(double hz) { return 6.0 * std::asinh(hz / 600.0); }
double BarkToHz(double bark) { return 600.0 * std::sinh(bark / 6.0); }

double DbFromPowerRatio(double ratio) {
  if (!(ratio > 0.0)) return kSilenceFloorDb;
  return std::max(10.0 * std::log10(ratio), kSilenceFloorDb);
}

// Spectral sums of a Hamming-windowed frame are divided by this so that a
// full-scale sine gives 1: the one-sided spectrum of a sine carries
// n * sum(w^2) / 4.
double SineNormalizer(const std::vector<double> &window) {
  double energy = 0.0;
  for (double w : window) energy += w * w;
  return static_cast<double>(window.size()) * energy / 4.0;
}

std::vector<double> Windowed(const std::vector<double> &frame,
                             const std::vector<double> &window) {
  std::vector<double> out(frame.size());
  for (std::size_t i = 0; i < frame.size(); ++i) out[i] = frame[i] * window[i];
  return out;
}

double Percentile(std::vector<double> values, double fraction) {
  std::sort(values.begin(), values.end());
  const double pos = fraction * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

// Hermansky critical-band shape: flat within half a Bark of the band center,
// rising 10 dB/Bark below and falling 25 dB/Bark above.
std::vector<std::vector<double>> BarkWeights(std::size_t bins, std::size_t fft_len,
                                             int sample_rate, std::size_t bands) {
  const double nyquist_bark = HzToBark(sample_rate / 2.0);
  const double step = nyquist_bark / static_cast<double>(bands - 1);
  std::vector<std::vector<double>> weights(bands, std::vector<double>(bins));
  for (std::size_t b = 0; b < bands; ++b) {
    const double center = step * static_cast<double>(b);
    for (std::size_t k = 0; k < bins; ++k) {
      const double hz = static_cast<double>(k) * sample_rate / static_cast<double>(fft_len);
      const double z = HzToBark(hz) - center;
      const double log_weight = std::min(0.0, std::min(z + 0.5, -2.5 * (z - 0.5)));
      weights[b][k] = std::pow(10.0, log_weight);
    }
  }
  return weights;
}

double BandCenterHz(std::size_t band, std::size_t bands, int sample_rate) {
  const double step = HzToBark(sample_rate / 2.0) / static_cast<double>(bands - 1);
  return BarkToHz(step * static_cast<double>(band));
}

}  // namespace

std::size_t PitchTrack::VoicedCount() const {
  return static_cast<std::size_t>(
      std::count_if(pitch.begin(), pitch.end(), [](const auto &p) { return p.has_value(); }));
}

double AWeightGainDb(double f) {
  if (!(f >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "negative frequency");
  if (f == 0.0) return kAWeightFloorDb;
  const double f2 = f * f;
  const double num = 12194.0 * 12194.0 * f2 * f2;
  const double den = (f2 + 20.6 * 20.6) *
                     std::sqrt((f2 + 107.7 * 107.7) * (f2 + 737.9 * 737.9)) *
                     (f2 + 12194.0 * 12194.0);
  return std::max(20.0 * std::log10(num / den) + 2.0, kAWeightFloorDb);
}

SplSeries ComputeSplSeries(const AudioClip &clip, const FrameParams &params,
                           double calibration_offset) {
  const FrameSequence frames = FrameSignal(clip, params);
  const std::vector<double> window = HammingWindow(frames.frame_len);
  const double normalizer = SineNormalizer(window);

  const std::size_t bins = frames.frame_len / 2 + 1;
  std::vector<double> a_weight(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    const double hz = static_cast<double>(k) * clip.sample_rate() /
                      static_cast<double>(frames.frame_len);
    a_weight[k] = std::pow(10.0, AWeightGainDb(hz) / 10.0);
  }

  SplSeries series;
  series.calibration_offset = calibration_offset;
  series.frame_len = frames.frame_len;
  series.hop = frames.hop;
  series.sample_rate = frames.sample_rate;
  series.levels.reserve(frames.size());
  for (const auto &frame : frames.frames) {
    const std::vector<double> power = PowerSpectrum(Windowed(frame, window));
    double weighted = 0.0;
    for (std::size_t k = 0; k < bins; ++k) weighted += power[k] * a_weight[k];
    series.levels.push_back(DbFromPowerRatio(weighted / normalizer) + calibration_offset);
  }
  return series;
}

std::vector<double> FrameLevelsDb(const AudioClip &clip, const FrameParams &params) {
  const FrameSequence frames = FrameSignal(clip, params);
  const std::vector<double> window = HammingWindow(frames.frame_len);
  double window_energy = 0.0;
  for (double w : window) window_energy += w * w;

  std::vector<double> levels;
  levels.reserve(frames.size());
  for (const auto &frame : frames.frames) {
    double energy = 0.0;
    for (std::size_t i = 0; i < frame.size(); ++i) {
      const double v = frame[i] * window[i];
      energy += v * v;
    }
    // Mean-square of a full-scale sine is 1/2.
    levels.push_back(DbFromPowerRatio(2.0 * energy / window_energy));
  }
  return levels;
}

std::vector<bool> SilenceMask(const AudioClip &clip, const FrameParams &params,
                              double threshold_db) {
  const std::vector<double> levels = FrameLevelsDb(clip, params);
  const double reference = Percentile(levels, 0.95);
  std::vector<bool> silent(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    silent[i] = levels[i] <= kSilenceFloorDb || levels[i] < reference - threshold_db;
  }
  return silent;
}

std::optional<double> EstimatePitch(std::span<const double> frame, int sample_rate,
                                    double fmin, double fmax) {
  if (frame.size() < 2 || !(fmin > 0.0) || !(fmax > fmin)) return std::nullopt;
  const auto min_lag = static_cast<std::size_t>(std::ceil(sample_rate / fmax));
  const std::size_t max_lag = std::min(
      static_cast<std::size_t>(std::floor(sample_rate / fmin)), frame.size() - 1);
  if (min_lag == 0 || min_lag > max_lag) return std::nullopt;

  const std::vector<double> r = Autocorrelation(frame, max_lag);
  if (!(r[0] > 0.0)) return std::nullopt;

  std::size_t best_lag = min_lag;
  double best = r[min_lag];
  for (std::size_t k = min_lag + 1; k <= max_lag; ++k) {
    if (r[k] > best) {
      best = r[k];
      best_lag = k;
    }
  }
  if (best / r[0] < kVoicingThreshold) return std::nullopt;
  return static_cast<double>(sample_rate) / static_cast<double>(best_lag);
}

std::vector<std::optional<double>> SmoothPitch(
    std::span<const std::optional<double>> raw, std::size_t window) {
  std::vector<std::optional<double>> out(raw.begin(), raw.end());
  std::size_t i = 0;
  while (i < raw.size()) {
    if (!raw[i]) {
      ++i;
      continue;
    }
    std::size_t end = i;
    std::vector<double> run;
    while (end < raw.size() && raw[end]) run.push_back(*raw[end++]);
    const std::vector<double> smoothed = MedianFilter(run, window);
    for (std::size_t j = 0; j < smoothed.size(); ++j) out[i + j] = smoothed[j];
    i = end;
  }
  return out;
}

PitchTrack ComputePitchTrack(const AudioClip &clip, const FrameParams &params,
                             double fmin, double fmax) {
  const FrameSequence frames = FrameSignal(clip, params);
  std::vector<std::optional<double>> raw;
  raw.reserve(frames.size());
  for (const auto &frame : frames.frames) {
    raw.push_back(EstimatePitch(frame, clip.sample_rate(), fmin, fmax));
  }
  PitchTrack track;
  track.fmin = fmin;
  track.fmax = fmax;
  track.pitch = SmoothPitch(raw);
  return track;
}

std::size_t BarkBandCount(int sample_rate) {
  return static_cast<std::size_t>(std::ceil(HzToBark(sample_rate / 2.0))) + 1;
}

std::vector<double> PlpCepstrumFromBands(std::span<const double> band_energies,
                                         int sample_rate, int order) {
  const std::size_t bands = band_energies.size();
  if (order < 1 || static_cast<std::size_t>(order) >= bands) {
    throw Error(ErrorCode::kInvalidArgument,
                "PLP order must be in [1, number of bands)");
  }

  // Equal loudness, then intensity-to-loudness compression.
  std::vector<double> loudness(bands);
  for (std::size_t b = 0; b < bands; ++b) {
    const double gain = std::pow(10.0, AWeightGainDb(BandCenterHz(b, bands, sample_rate)) / 10.0);
    loudness[b] = std::cbrt(std::max(band_energies[b], 0.0) * gain);
  }

  // Inverse DFT of the spectrum mirrored over [0, 2 pi) gives the
  // autocorrelation of the all-pole model's input.
  const std::size_t p = static_cast<std::size_t>(order);
  const double span = static_cast<double>(bands - 1);
  std::vector<double> r(p + 1);
  for (std::size_t k = 0; k <= p; ++k) {
    double sum = loudness[0] + ((k % 2) ? -loudness[bands - 1] : loudness[bands - 1]);
    for (std::size_t j = 1; j + 1 < bands; ++j) {
      sum += 2.0 * loudness[j] * std::cos(M_PI * static_cast<double>(j * k) / span);
    }
    r[k] = sum / (2.0 * span);
  }

  // Levinson-Durbin for A(z) = 1 + sum a_i z^-i.
  std::vector<double> a(p + 1, 0.0), prev(p + 1, 0.0);
  a[0] = 1.0;
  double error = r[0];
  for (std::size_t i = 1; i <= p && error > 0.0; ++i) {
    double acc = r[i];
    for (std::size_t j = 1; j < i; ++j) acc += a[j] * r[i - j];
    const double reflection = -acc / error;
    prev = a;
    for (std::size_t j = 1; j < i; ++j) a[j] = prev[j] + reflection * prev[i - j];
    a[i] = reflection;
    error *= 1.0 - reflection * reflection;
  }
  error = std::max(error, kBandEnergyFloor);

  // Cepstrum of gain / A(z).
  std::vector<double> c(p + 1, 0.0);
  c[0] = std::log(error);
  for (std::size_t n = 1; n <= p; ++n) {
    double acc = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
      acc += static_cast<double>(k) * c[k] * a[n - k];
    }
    c[n] = -a[n] - acc / static_cast<double>(n);
  }
  return c;
}

std::vector<std::vector<double>> ComputeRastaPlp(const AudioClip &clip,
                                                 const FrameParams &params,
                                                 int order) {
  const std::size_t bands = BarkBandCount(clip.sample_rate());
  if (order < 1 || static_cast<std::size_t>(order) >= bands) {
    throw Error(ErrorCode::kInvalidArgument,
                "PLP order must be in [1, number of bands)");
  }
  const FrameSequence frames = FrameSignal(clip, params);
  const std::vector<double> window = HammingWindow(frames.frame_len);
  const std::size_t bins = frames.frame_len / 2 + 1;
  const auto weights = BarkWeights(bins, frames.frame_len, clip.sample_rate(), bands);

  // Log critical-band energies, frames x bands.
  std::vector<std::vector<double>> log_bands(frames.size(), std::vector<double>(bands));
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const std::vector<double> power = PowerSpectrum(Windowed(frames.frames[f], window));
    for (std::size_t b = 0; b < bands; ++b) {
      double e = 0.0;
      for (std::size_t k = 0; k < bins; ++k) e += weights[b][k] * power[k];
      log_bands[f][b] = std::log(std::max(e, kBandEnergyFloor));
    }
  }

  // RASTA filtering along time, per band, starting from rest.
  std::vector<std::vector<double>> filtered(frames.size(), std::vector<double>(bands));
  for (std::size_t b = 0; b < bands; ++b) {
    double y_prev = 0.0;
    for (std::size_t t = 0; t < frames.size(); ++t) {
      double y = kRastaPole * y_prev;
      for (std::size_t j = 0; j < kRastaNumerator.size() && j <= t; ++j) {
        y += kRastaNumerator[j] * log_bands[t - j][b];
      }
      filtered[t][b] = y;
      y_prev = y;
    }
  }

  std::vector<std::vector<double>> cepstra;
  cepstra.reserve(frames.size());
  std::vector<double> linear(bands);
  for (const auto &row : filtered) {
    for (std::size_t b = 0; b < bands; ++b) linear[b] = std::exp(row[b]);
    cepstra.push_back(PlpCepstrumFromBands(linear, clip.sample_rate(), order));
  }
  return cepstra;
}

std::vector<FeatureVector> GenderFeatures(const AudioClip &clip,
                                          const FrameParams &params,
                                          std::vector<std::size_t> *frame_indices) {
  if (frame_indices) frame_indices->clear();
  const PitchTrack track = ComputePitchTrack(clip, params);
  if (track.VoicedCount() == 0) return {};
  const std::vector<bool> silent = SilenceMask(clip, params);
  const auto cepstra = ComputeRastaPlp(clip, params, kPlpOrder);

  std::vector<FeatureVector> out;
  for (std::size_t f = 0; f < track.pitch.size(); ++f) {
    if (!track.pitch[f] || silent[f]) continue;
    FeatureVector v{};
    v[0] = *track.pitch[f];
    std::copy(cepstra[f].begin(), cepstra[f].end(), v.begin() + 1);
    bool finite = true;
    for (double x : v) finite = finite && std::isfinite(x);
    if (!finite) continue;
    out.push_back(v);
    if (frame_indices) frame_indices->push_back(f);
  }
  return out;
}

}  // namespace classroom
