// include/classroom/stats.h

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

#ifndef CLASSROOM_STATS_H_
#define CLASSROOM_STATS_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace classroom {

struct NormalFit {
  double mean = 0.0;
  double std = 0.0;  // population convention (divisor N)
};

// Mean and population standard deviation. Throws on empty or non-finite input.
NormalFit FitNormal(std::span<const double> values);

struct ContingencyTable {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<std::vector<std::int64_t>> counts;

  std::size_t rows() const { return counts.size(); }
  std::size_t cols() const { return counts.empty() ? 0 : counts[0].size(); }
  std::int64_t Total() const;

  // Checks shape (r, c >= 2, rectangular, labels sized to match when given),
  // non-negative counts and a positive total.
  void Validate() const;

  static ContingencyTable FromCounts(std::vector<std::vector<std::int64_t>> counts);
};

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
double RegularizedGammaQ(double a, double x);

// Pearson's test without continuity correction. Throws kDegenerateTable when a
// row or column total is zero.
ChiSquareResult ChiSquareIndependence(const ContingencyTable &table);

// p1 - p2 with p_i = counts[i][0] / row_total_i, for 2x2 tables.
double DifferenceOfProportions(const ContingencyTable &table);

// Bin i covers [origin + i*width, origin + (i+1)*width). Keys are bin indices.
std::map<std::int64_t, std::size_t> Histogram(std::span<const double> values,
                                              double bin_width, double origin = 0.0);

}  // namespace classroom

#endif  // CLASSROOM_STATS_H_
