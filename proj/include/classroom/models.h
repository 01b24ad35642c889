// include/classroom/models.h

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

#ifndef CLASSROOM_MODELS_H_
#define CLASSROOM_MODELS_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "classroom/features.h"
#include "classroom/labels.h"

namespace classroom {

using Matrix = std::vector<std::vector<double>>;

// Per-dimension z-score parameters captured from training data. A dimension
// with (near) zero spread gets scale 1.
struct Standardization {
  std::vector<double> means;
  std::vector<double> scales;

  static Standardization Fit(const Matrix &data);
  std::vector<double> Apply(std::span<const double> x) const;
  std::size_t dim() const { return means.size(); }
};

// Diagonal-covariance Gaussian mixture. Means and variances live in the
// standardized space given by `standardization`.
struct GmmModel {
  std::vector<double> weights;
  Matrix means;
  Matrix variances;
  Standardization standardization;

  std::size_t components() const { return weights.size(); }
  std::size_t dim() const { return standardization.dim(); }

  // Component means and variances mapped back to raw feature units.
  Matrix RawMeans() const;
  Matrix RawVariances() const;

  // Log density of one raw vector, including the standardization Jacobian so
  // that models with different standardizations are comparable.
  double LogDensity(std::span<const double> x) const;

  // Throws if shapes disagree, weights do not sum to 1, or a variance is
  // below the floor.
  void Validate(double variance_floor = 0.0) const;
};

struct GmmTrainOptions {
  int components = 4;
  std::uint64_t seed = 0;
  int max_iterations = 200;
  double tolerance = 1e-6;  // on the per-vector mean log-likelihood gain
  double variance_floor = 1e-4;
};

struct GmmTrainResult {
  GmmModel model;
  // Total training log-likelihood of the parameters at each iteration; the
  // last entry belongs to the returned model.
  std::vector<double> log_likelihood;
  bool converged = false;
};

// EM from seeded k-means++ means, uniform weights and unit variances, on the
// standardized data. Requires at least 10 vectors per component.
GmmTrainResult TrainGmm(const Matrix &data, const GmmTrainOptions &options);
GmmTrainResult TrainGmm(std::span<const FeatureVector> vectors,
                        const GmmTrainOptions &options);

// Mean per-vector log density (the normalized log-likelihood).
double GmmLogLikelihood(const GmmModel &model, const Matrix &data);
double GmmLogLikelihood(const GmmModel &model, std::span<const FeatureVector> vectors);

// Male iff LL_male > LL_female; equality goes to Female.
Gender ClassifyGender(const GmmModel &male, const GmmModel &female,
                      std::span<const FeatureVector> vectors);

// (SPL-fit mean, SPL-fit std) for one clip.
using KnnPoint = std::array<double, 2>;

struct KnnModel {
  int k = 5;
  std::vector<KnnPoint> points;  // raw, unstandardized
  std::vector<NoiseLabel> labels;
  Standardization standardization;

  void Validate() const;
};

// Stores the training set and its z-score parameters. k must be odd and no
// larger than the training set.
KnnModel TrainKnn(std::span<const KnnPoint> points, std::span<const NoiseLabel> labels,
                  int k);

// Majority label among the k nearest standardized training points. Distance
// ties go to the lower training index.
NoiseLabel KnnClassify(const KnnModel &model, const KnnPoint &point);

// Out-of-fold predictions from stratified, seeded k-fold cross-validation.
// Standardization is refit on every training split.
std::vector<NoiseLabel> CrossValidatedPredictions(std::span<const KnnPoint> points,
                                                  std::span<const NoiseLabel> labels,
                                                  int folds, int k, std::uint64_t seed);

// Fraction of points whose out-of-fold prediction is wrong.
double CrossValidate(std::span<const KnnPoint> points, std::span<const NoiseLabel> labels,
                     int folds, int k, std::uint64_t seed);

// JSON model files. Doubles are written in shortest round-trip form, so a
// save/load cycle reproduces every value exactly.
std::string GmmToJson(const GmmModel &model);
GmmModel GmmFromJson(const std::string &text);
std::string KnnToJson(const KnnModel &model);
KnnModel KnnFromJson(const std::string &text);

}  // namespace classroom

#endif  // CLASSROOM_MODELS_H_
