// src/knn.cc

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
#include <numeric>

#include "classroom/error.h"
#include "classroom/models.h"
#include "classroom/random.h"

namespace classroom {

namespace {

bool Finite(const KnnPoint &p) { return std::isfinite(p[0]) && std::isfinite(p[1]); }

Matrix ToMatrix(std::span<const KnnPoint> points) {
  Matrix m;
  m.reserve(points.size());
  for (const auto &p : points) m.push_back({p[0], p[1]});
  return m;
}

}  // namespace

void KnnModel::Validate() const {
  if (points.size() != labels.size()) {
    throw Error(ErrorCode::kInvalidArgument, "k-NN points and labels differ in length");
  }
  if (k < 1 || k % 2 == 0) throw Error(ErrorCode::kInvalidArgument, "k must be odd and positive");
  if (static_cast<std::size_t>(k) > points.size()) {
    throw Error(ErrorCode::kInsufficientData,
                "k = " + std::to_string(k) + " exceeds training set size " +
                    std::to_string(points.size()));
  }
  for (const auto &p : points) {
    if (!Finite(p)) throw Error(ErrorCode::kNonFinite, "non-finite k-NN training point");
  }
  if (standardization.dim() != 2 || standardization.scales.size() != 2) {
    throw Error(ErrorCode::kInvalidArgument, "k-NN standardization must be 2-dimensional");
  }
}

KnnModel TrainKnn(std::span<const KnnPoint> points, std::span<const NoiseLabel> labels,
                  int k) {
  KnnModel model;
  model.k = k;
  model.points.assign(points.begin(), points.end());
  model.labels.assign(labels.begin(), labels.end());
  if (points.empty()) throw Error(ErrorCode::kInsufficientData, "k-NN needs training points");
  for (const auto &p : points) {
    if (!Finite(p)) throw Error(ErrorCode::kNonFinite, "non-finite k-NN training point");
  }
  model.standardization = Standardization::Fit(ToMatrix(points));
  model.Validate();
  return model;
}

NoiseLabel KnnClassify(const KnnModel &model, const KnnPoint &point) {
  if (!Finite(point)) throw Error(ErrorCode::kNonFinite, "non-finite k-NN query");
  // Standardized distance from raw differences: the means cancel, and points
  // at equal raw offsets stay exactly tied.
  const auto &scale = model.standardization.scales;
  const std::size_t n = model.points.size();
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = (model.points[i][0] - point[0]) / scale[0];
    const double dy = (model.points[i][1] - point[1]) / scale[1];
    dist[i] = dx * dx + dy * dy;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const auto k = static_cast<std::size_t>(model.k);
  std::partial_sort(order.begin(), order.begin() + static_cast<long>(k), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
                    });
  std::size_t noisy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (model.labels[order[i]] == NoiseLabel::kNoisy) ++noisy;
  }
  return 2 * noisy > k ? NoiseLabel::kNoisy : NoiseLabel::kQuiet;
}

std::vector<NoiseLabel> CrossValidatedPredictions(std::span<const KnnPoint> points,
                                                  std::span<const NoiseLabel> labels,
                                                  int folds, int k, std::uint64_t seed) {
  if (points.size() != labels.size()) {
    throw Error(ErrorCode::kInvalidArgument, "points and labels differ in length");
  }
  if (folds < 2) throw Error(ErrorCode::kInvalidArgument, "cross-validation needs >= 2 folds");
  if (static_cast<std::size_t>(folds) > points.size()) {
    throw Error(ErrorCode::kInsufficientData, "more folds than points");
  }

  // Stratify: shuffle each class, then deal indices round-robin across folds
  // with one counter so fold sizes differ by at most one.
  Rng rng(seed);
  std::vector<int> fold_of(points.size());
  std::size_t dealt = 0;
  for (NoiseLabel cls : {NoiseLabel::kNoisy, NoiseLabel::kQuiet}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) members.push_back(i);
    }
    rng.Shuffle(&members);
    for (std::size_t i : members) fold_of[i] = static_cast<int>(dealt++ % folds);
  }

  std::vector<NoiseLabel> predicted(points.size());
  for (int f = 0; f < folds; ++f) {
    std::vector<KnnPoint> train_points;
    std::vector<NoiseLabel> train_labels;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (fold_of[i] != f) {
        train_points.push_back(points[i]);
        train_labels.push_back(labels[i]);
      }
    }
    const KnnModel model = TrainKnn(train_points, train_labels, k);
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (fold_of[i] == f) predicted[i] = KnnClassify(model, points[i]);
    }
  }
  return predicted;
}

double CrossValidate(std::span<const KnnPoint> points, std::span<const NoiseLabel> labels,
                     int folds, int k, std::uint64_t seed) {
  const auto predicted = CrossValidatedPredictions(points, labels, folds, k, seed);
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) wrong += predicted[i] != labels[i];
  return static_cast<double>(wrong) / static_cast<double>(predicted.size());
}

}  // namespace classroom
