// src/gmm.cc

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

#include <algorithm>
#include <cmath>
#include <limits>

#include "classroom/error.h"
#include "classroom/models.h"
#include "classroom/random.h"

namespace classroom {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2 pi)
constexpr double kMinScale = 1e-12;

// Component weights this small are treated as dead and left untouched by
// the M-step.
constexpr double kDeadComponentMass = 1e-10;

double LogSumExp(std::span<const double> v) {
  const double peak = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(peak)) return peak;
  double sum = 0.0;
  for (double x : v) sum += std::exp(x - peak);
  return peak + std::log(sum);
}

double DiagonalLogGaussian(std::span<const double> z, std::span<const double> mean,
                           std::span<const double> var) {
  double acc = 0.0;
  for (std::size_t d = 0; d < z.size(); ++d) {
    const double diff = z[d] - mean[d];
    acc += kLog2Pi + std::log(var[d]) + diff * diff / var[d];
  }
  return -0.5 * acc;
}

void CheckData(const Matrix &data, std::size_t expected_dim) {
  for (const auto &row : data) {
    if (row.size() != expected_dim) {
      throw Error(ErrorCode::kInvalidArgument, "feature vectors have inconsistent dimension");
    }
    for (double x : row) {
      if (!std::isfinite(x)) throw Error(ErrorCode::kNonFinite, "non-finite feature value");
    }
  }
}

Matrix ToMatrix(std::span<const FeatureVector> vectors) {
  Matrix m;
  m.reserve(vectors.size());
  for (const auto &v : vectors) m.emplace_back(v.begin(), v.end());
  return m;
}

// k-means++ seeding: first center uniform, then proportional to squared
// distance from the nearest chosen center.
Matrix KMeansPlusPlus(const Matrix &z, std::size_t m, Rng *rng) {
  const std::size_t n = z.size();
  Matrix centers;
  centers.push_back(z[rng->Index(n)]);
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  while (centers.size() < m) {
    const auto &last = centers.back();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double d2 = 0.0;
      for (std::size_t d = 0; d < last.size(); ++d) {
        d2 += (z[i][d] - last[d]) * (z[i][d] - last[d]);
      }
      nearest[i] = std::min(nearest[i], d2);
      total += nearest[i];
    }
    std::size_t pick = n - 1;
    if (total > 0.0) {
      const double target = rng->Uniform() * total;
      double cumulative = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        cumulative += nearest[i];
        if (target < cumulative) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng->Index(n);
    }
    centers.push_back(z[pick]);
  }
  return centers;
}

}  // namespace

Standardization Standardization::Fit(const Matrix &data) {
  if (data.empty()) throw Error(ErrorCode::kInsufficientData, "standardization of no data");
  const std::size_t dim = data[0].size();
  Standardization s;
  s.means.assign(dim, 0.0);
  s.scales.assign(dim, 0.0);
  const double n = static_cast<double>(data.size());
  for (const auto &row : data) {
    for (std::size_t d = 0; d < dim; ++d) s.means[d] += row[d];
  }
  for (double &m : s.means) m /= n;
  for (const auto &row : data) {
    for (std::size_t d = 0; d < dim; ++d) {
      s.scales[d] += (row[d] - s.means[d]) * (row[d] - s.means[d]);
    }
  }
  for (double &sc : s.scales) {
    sc = std::sqrt(sc / n);
    if (!(sc > kMinScale)) sc = 1.0;
  }
  return s;
}

std::vector<double> Standardization::Apply(std::span<const double> x) const {
  std::vector<double> z(x.size());
  for (std::size_t d = 0; d < x.size(); ++d) z[d] = (x[d] - means[d]) / scales[d];
  return z;
}

Matrix GmmModel::RawMeans() const {
  Matrix raw = means;
  for (auto &row : raw) {
    for (std::size_t d = 0; d < row.size(); ++d) {
      row[d] = row[d] * standardization.scales[d] + standardization.means[d];
    }
  }
  return raw;
}

Matrix GmmModel::RawVariances() const {
  Matrix raw = variances;
  for (auto &row : raw) {
    for (std::size_t d = 0; d < row.size(); ++d) {
      row[d] *= standardization.scales[d] * standardization.scales[d];
    }
  }
  return raw;
}

double GmmModel::LogDensity(std::span<const double> x) const {
  const std::vector<double> z = standardization.Apply(x);
  std::vector<double> terms(components());
  for (std::size_t m = 0; m < components(); ++m) {
    terms[m] = std::log(weights[m]) + DiagonalLogGaussian(z, means[m], variances[m]);
  }
  double log_jacobian = 0.0;
  for (double s : standardization.scales) log_jacobian += std::log(s);
  return LogSumExp(terms) - log_jacobian;
}

void GmmModel::Validate(double variance_floor) const {
  const std::size_t m = components();
  const std::size_t dim = standardization.dim();
  if (m == 0 || dim == 0 || standardization.scales.size() != dim || means.size() != m ||
      variances.size() != m) {
    throw Error(ErrorCode::kInvalidArgument, "GMM shape mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(weights[i] >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "negative GMM weight");
    total += weights[i];
    if (means[i].size() != dim || variances[i].size() != dim) {
      throw Error(ErrorCode::kInvalidArgument, "GMM component dimension mismatch");
    }
    for (std::size_t d = 0; d < dim; ++d) {
      if (!std::isfinite(means[i][d]) || !(variances[i][d] > 0.0) ||
          variances[i][d] < variance_floor) {
        throw Error(ErrorCode::kInvalidArgument, "invalid GMM mean or variance");
      }
    }
  }
  if (std::fabs(total - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidArgument, "GMM weights do not sum to 1");
  }
  for (double s : standardization.scales) {
    if (!(s > 0.0)) throw Error(ErrorCode::kInvalidArgument, "non-positive standardization scale");
  }
}

GmmTrainResult TrainGmm(const Matrix &data, const GmmTrainOptions &options) {
  if (options.components < 1) {
    throw Error(ErrorCode::kInvalidArgument, "GMM needs at least one component");
  }
  const auto m = static_cast<std::size_t>(options.components);
  if (data.size() < 10 * m) {
    throw Error(ErrorCode::kInsufficientData,
                "GMM training needs at least " + std::to_string(10 * m) + " vectors, got " +
                    std::to_string(data.size()));
  }
  const std::size_t dim = data[0].size();
  if (dim == 0) throw Error(ErrorCode::kInvalidArgument, "zero-dimensional features");
  CheckData(data, dim);

  GmmTrainResult result;
  GmmModel &model = result.model;
  model.standardization = Standardization::Fit(data);
  Matrix z;
  z.reserve(data.size());
  for (const auto &row : data) z.push_back(model.standardization.Apply(row));

  Rng rng(options.seed);
  model.means = KMeansPlusPlus(z, m, &rng);
  model.weights.assign(m, 1.0 / static_cast<double>(m));
  model.variances.assign(m, std::vector<double>(dim, 1.0));

  const std::size_t n = z.size();
  Matrix resp(n, std::vector<double>(m));
  std::vector<double> terms(m);
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    // E-step; also yields the log-likelihood of the current parameters.
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < m; ++c) {
        terms[c] = std::log(model.weights[c]) +
                   DiagonalLogGaussian(z[i], model.means[c], model.variances[c]);
      }
      const double ll = LogSumExp(terms);
      total += ll;
      for (std::size_t c = 0; c < m; ++c) resp[i][c] = std::exp(terms[c] - ll);
    }
    const bool first = result.log_likelihood.empty();
    const double gain =
        first ? std::numeric_limits<double>::infinity() : total - result.log_likelihood.back();
    result.log_likelihood.push_back(total);
    if (!first && gain / static_cast<double>(n) < options.tolerance) {
      result.converged = true;
      break;
    }
    if (iter == options.max_iterations) break;

    // M-step.
    for (std::size_t c = 0; c < m; ++c) {
      double mass = 0.0;
      for (std::size_t i = 0; i < n; ++i) mass += resp[i][c];
      model.weights[c] = mass / static_cast<double>(n);
      if (mass < kDeadComponentMass * static_cast<double>(n)) continue;
      auto &mean = model.means[c];
      auto &var = model.variances[c];
      std::fill(mean.begin(), mean.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < dim; ++d) mean[d] += resp[i][c] * z[i][d];
      }
      for (double &v : mean) v /= mass;
      std::fill(var.begin(), var.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < dim; ++d) {
          const double diff = z[i][d] - mean[d];
          var[d] += resp[i][c] * diff * diff;
        }
      }
      for (double &v : var) v = std::max(v / mass, options.variance_floor);
    }
    double weight_sum = 0.0;
    for (double w : model.weights) weight_sum += w;
    for (double &w : model.weights) w /= weight_sum;
  }
  return result;
}

GmmTrainResult TrainGmm(std::span<const FeatureVector> vectors,
                        const GmmTrainOptions &options) {
  return TrainGmm(ToMatrix(vectors), options);
}

double GmmLogLikelihood(const GmmModel &model, const Matrix &data) {
  if (data.empty()) {
    throw Error(ErrorCode::kInsufficientData, "log-likelihood of an empty vector set");
  }
  CheckData(data, model.dim());
  double total = 0.0;
  for (const auto &row : data) total += model.LogDensity(row);
  return total / static_cast<double>(data.size());
}

double GmmLogLikelihood(const GmmModel &model, std::span<const FeatureVector> vectors) {
  return GmmLogLikelihood(model, ToMatrix(vectors));
}

Gender ClassifyGender(const GmmModel &male, const GmmModel &female,
                      std::span<const FeatureVector> vectors) {
  const double ll_male = GmmLogLikelihood(male, vectors);
  const double ll_female = GmmLogLikelihood(female, vectors);
  return ll_male > ll_female ? Gender::kMale : Gender::kFemale;
}

}  // namespace classroom
