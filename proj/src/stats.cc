// src/stats.cc

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

#include "classroom/stats.h"

#include <cmath>
#include <limits>

#include "classroom/error.h"

namespace classroom {

namespace {

constexpr double kGammaEpsilon = 1e-15;
constexpr int kGammaMaxIterations = 10000;

// Series for P(a, x); converges quickly for x < a + 1.
double GammaPSeries(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kGammaMaxIterations; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kGammaEpsilon) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Lentz continued fraction for Q(a, x); used for x >= a + 1.
double GammaQContinuedFraction(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kGammaMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kGammaEpsilon) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

NormalFit FitNormal(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kInsufficientData, "normal fit of no values");
  double sum = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFinite, "normal fit of non-finite value");
    sum += v;
  }
  const double n = static_cast<double>(values.size());
  NormalFit fit;
  fit.mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - fit.mean) * (v - fit.mean);
  fit.std = std::sqrt(ss / n);
  return fit;
}

std::int64_t ContingencyTable::Total() const {
  std::int64_t total = 0;
  for (const auto &row : counts) {
    for (std::int64_t c : row) total += c;
  }
  return total;
}

void ContingencyTable::Validate() const {
  if (rows() < 2 || cols() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "contingency table must be at least 2x2");
  }
  for (const auto &row : counts) {
    if (row.size() != cols()) {
      throw Error(ErrorCode::kInvalidArgument, "contingency table is not rectangular");
    }
    for (std::int64_t c : row) {
      if (c < 0) throw Error(ErrorCode::kInvalidArgument, "negative cell count");
    }
  }
  if ((!row_labels.empty() && row_labels.size() != rows()) ||
      (!col_labels.empty() && col_labels.size() != cols())) {
    throw Error(ErrorCode::kInvalidArgument, "contingency labels do not match shape");
  }
  if (Total() <= 0) throw Error(ErrorCode::kDegenerateTable, "contingency table is empty");
}

ContingencyTable ContingencyTable::FromCounts(std::vector<std::vector<std::int64_t>> counts) {
  ContingencyTable t;
  t.counts = std::move(counts);
  return t;
}

double RegularizedGammaQ(double a, double x) {
  if (!(a > 0.0) || x < 0.0 || std::isnan(x)) {
    throw Error(ErrorCode::kInvalidArgument, "incomplete gamma needs a > 0, x >= 0");
  }
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - GammaPSeries(a, x);
  return GammaQContinuedFraction(a, x);
}

ChiSquareResult ChiSquareIndependence(const ContingencyTable &table) {
  table.Validate();
  const std::size_t r = table.rows(), c = table.cols();
  std::vector<double> row_total(r, 0.0), col_total(c, 0.0);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      row_total[i] += static_cast<double>(table.counts[i][j]);
      col_total[j] += static_cast<double>(table.counts[i][j]);
    }
  }
  for (double t : row_total) {
    if (t == 0.0) throw Error(ErrorCode::kDegenerateTable, "zero row total");
  }
  for (double t : col_total) {
    if (t == 0.0) throw Error(ErrorCode::kDegenerateTable, "zero column total");
  }
  const double grand = static_cast<double>(table.Total());

  ChiSquareResult result;
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      const double expected = row_total[i] * col_total[j] / grand;
      const double diff = static_cast<double>(table.counts[i][j]) - expected;
      result.statistic += diff * diff / expected;
    }
  }
  result.dof = static_cast<int>((r - 1) * (c - 1));
  result.p_value = RegularizedGammaQ(result.dof / 2.0, result.statistic / 2.0);
  return result;
}

double DifferenceOfProportions(const ContingencyTable &table) {
  if (table.rows() != 2 || table.cols() != 2) {
    throw Error(ErrorCode::kInvalidArgument, "difference of proportions needs a 2x2 table");
  }
  table.Validate();
  double p[2];
  for (std::size_t i = 0; i < 2; ++i) {
    const auto total = table.counts[i][0] + table.counts[i][1];
    if (total == 0) throw Error(ErrorCode::kDegenerateTable, "zero row total");
    p[i] = static_cast<double>(table.counts[i][0]) / static_cast<double>(total);
  }
  return p[0] - p[1];
}

std::map<std::int64_t, std::size_t> Histogram(std::span<const double> values,
                                              double bin_width, double origin) {
  if (!(bin_width > 0.0)) throw Error(ErrorCode::kInvalidArgument, "bin width must be positive");
  std::map<std::int64_t, std::size_t> bins;
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFinite, "histogram of non-finite value");
    ++bins[static_cast<std::int64_t>(std::floor((v - origin) / bin_width))];
  }
  return bins;
}

}  // namespace classroom
