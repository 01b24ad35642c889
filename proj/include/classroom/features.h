// include/classroom/features.h

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

#ifndef CLASSROOM_FEATURES_H_
#define CLASSROOM_FEATURES_H_

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "classroom/audio_io.h"
#include "classroom/dsp.h"

namespace classroom {

// Levels are dB relative to a full-scale sine plus this offset, so a
// full-scale 1 kHz sine reads 94 dBA by default.
constexpr double kDefaultCalibrationOffsetDb = 94.0;
// Zero-power frames are reported at this level (before the offset).
constexpr double kSilenceFloorDb = -120.0;
// Returned by AWeightGainDb(0), where the analytic curve is -inf.
constexpr double kAWeightFloorDb = -200.0;

constexpr double kDefaultPitchMinHz = 60.0;
constexpr double kDefaultPitchMaxHz = 400.0;
constexpr double kVoicingThreshold = 0.45;
constexpr std::size_t kPitchMedianWindow = 5;
constexpr double kDefaultSilenceThresholdDb = 30.0;

constexpr int kPlpOrder = 10;
constexpr std::size_t kFeatureDim = 12;

struct SplSeries {
  std::vector<double> levels;  // dBA, one per frame
  double calibration_offset = kDefaultCalibrationOffsetDb;
  std::size_t frame_len = 0;
  std::size_t hop = 0;
  int sample_rate = 0;
};

struct PitchTrack {
  std::vector<std::optional<double>> pitch;  // nullopt marks unvoiced frames
  double fmin = kDefaultPitchMinHz;
  double fmax = kDefaultPitchMaxHz;

  std::size_t VoicedCount() const;
};

using FeatureVector = std::array<double, kFeatureDim>;  // pitch, c0..c10

// IEC 61672 A-weighting in dB; 0 dB at 1 kHz. Throws for f < 0.
double AWeightGainDb(double freq_hz);

// Per-frame A-weighted level: Hamming window, power spectrum, A-weighted bin
// sum, normalized so that a full-scale sine at 1 kHz reads 0 dB before the
// offset.
SplSeries ComputeSplSeries(const AudioClip &clip, const FrameParams &params,
                           double calibration_offset = kDefaultCalibrationOffsetDb);

// Unweighted per-frame level (dB re full-scale sine), floored at
// kSilenceFloorDb. Used for silence gating.
std::vector<double> FrameLevelsDb(const AudioClip &clip, const FrameParams &params);

// A frame is silent if it is at the silence floor or more than threshold_db
// below the clip's 95th-percentile frame level.
std::vector<bool> SilenceMask(const AudioClip &clip, const FrameParams &params,
                              double threshold_db = kDefaultSilenceThresholdDb);

// Autocorrelation pitch estimate: the lag in [rate/fmax, rate/fmin] maximizing
// r(k)/r(0). Returns nullopt when that maximum is below kVoicingThreshold.
std::optional<double> EstimatePitch(std::span<const double> frame, int sample_rate,
                                    double fmin = kDefaultPitchMinHz,
                                    double fmax = kDefaultPitchMaxHz);

// Applies the median filter to each maximal run of voiced frames separately.
std::vector<std::optional<double>> SmoothPitch(
    std::span<const std::optional<double>> raw,
    std::size_t window = kPitchMedianWindow);

PitchTrack ComputePitchTrack(const AudioClip &clip, const FrameParams &params,
                             double fmin = kDefaultPitchMinHz,
                             double fmax = kDefaultPitchMaxHz);

// Number of Bark-spaced critical bands used for the given sample rate.
std::size_t BarkBandCount(int sample_rate);

// Per-frame RASTA-PLP cepstra c0..c<order>.
std::vector<std::vector<double>> ComputeRastaPlp(const AudioClip &clip,
                                                 const FrameParams &params,
                                                 int order = kPlpOrder);

// The post-RASTA half of the PLP chain for one frame: equal-loudness
// weighting, cube-root compression, autocorrelation, Levinson-Durbin and
// LP-to-cepstrum. `band_energies` are linear, one per Bark band.
std::vector<double> PlpCepstrumFromBands(std::span<const double> band_energies,
                                         int sample_rate, int order = kPlpOrder);

// [pitch, c0..c10] for every frame that is voiced and not silent. When
// `frame_indices` is given it receives the source frame of each vector.
std::vector<FeatureVector> GenderFeatures(const AudioClip &clip,
                                          const FrameParams &params,
                                          std::vector<std::size_t> *frame_indices = nullptr);

}  // namespace classroom

#endif  // CLASSROOM_FEATURES_H_
