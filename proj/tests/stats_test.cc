// tests/stats_test.cc

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

#include <cmath>
#include <vector>

#include "classroom/stats.h"
#include "test_support.h"

namespace classroom {
namespace {

using testing::ThrowsCode;
using Counts = std::vector<std::vector<std::int64_t>>;

struct ChiOracle {
  Counts table;
  double statistic;
  int dof;
  double p;
};

// Computed offline with scipy.stats.chi2_contingency(correction=False).
const std::vector<ChiOracle> kChiOracles = {
    {{{10, 10}, {10, 10}}, 0.0, 1, 1.0},
    {{{20, 0}, {0, 20}}, 40.0, 1, 2.5396285894708634e-10},
    {{{10, 20}, {30, 40}}, 0.7936507936507936, 1, 0.37299848361348686},
    {{{5, 15}, {25, 8}}, 13.060880544576193, 1, 0.000301527646351042},
    {{{12, 7, 3}, {4, 9, 14}}, 10.971683749257277, 2, 0.004145044002584627},
    {{{1, 2}, {3, 4}}, 0.07936507936507939, 1, 0.7781596861761658},
    {{{30, 10}, {10, 30}}, 20.0, 1, 7.744216431044088e-06},
    {{{8, 2, 5}, {3, 9, 4}, {6, 6, 1}}, 8.698793363499245, 4, 0.06908532825859834},
    {{{100, 50}, {60, 90}}, 21.42857142857143, 1, 3.672575114265626e-06},
    {{{7, 0, 3, 2}, {1, 6, 2, 8}}, 13.849632352941176, 3, 0.003117140568644128},
};

bool Near(double got, double want, double tol) {
  return std::fabs(got - want) <= tol * std::max(1.0, std::fabs(want));
}

TEST_CASE("normal fit") {
  const NormalFit flat = FitNormal(std::vector<double>{5, 5, 5});
  CHECK(flat.mean == 5.0);
  CHECK(flat.std == 0.0);
  const NormalFit pair = FitNormal(std::vector<double>{0, 10});
  CHECK(pair.mean == 5.0);
  CHECK(pair.std == 5.0);
  const NormalFit shifted = FitNormal(std::vector<double>{100, 110});
  CHECK(shifted.mean == 105.0);
  CHECK(shifted.std == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(ThrowsCode([] { FitNormal(std::vector<double>{}); }, ErrorCode::kInsufficientData));
  CHECK(ThrowsCode([] { FitNormal(std::vector<double>{1.0, INFINITY}); }, ErrorCode::kNonFinite));
}

TEST_CASE("regularized gamma") {
  CHECK(RegularizedGammaQ(1.0, 0.0) == 1.0);
  // Q(1, x) = exp(-x); Q(1/2, x) = erfc(sqrt x).
  for (double x : {0.1, 0.5, 1.0, 2.0, 7.5, 30.0}) {
    CHECK(Near(RegularizedGammaQ(1.0, x), std::exp(-x), 1e-12));
    CHECK(std::fabs(RegularizedGammaQ(0.5, x) - std::erfc(std::sqrt(x))) <=
          1e-12 * std::erfc(std::sqrt(x)) + 1e-300);
  }
}

TEST_CASE("chi-square oracle tables") {
  for (const ChiOracle &o : kChiOracles) {
    const ChiSquareResult r = ChiSquareIndependence(ContingencyTable::FromCounts(o.table));
    CHECK(Near(r.statistic, o.statistic, 1e-8));
    CHECK(r.dof == o.dof);
    CHECK(std::fabs(r.p_value - o.p) <= 1e-8 * std::max(o.p, 1e-300) + 1e-15);
  }
}

TEST_CASE("chi-square properties") {
  const Counts base{{12, 7, 3}, {4, 9, 14}};
  const double stat = ChiSquareIndependence(ContingencyTable::FromCounts(base)).statistic;

  const Counts permuted{{9, 14, 4}, {7, 3, 12}};
  CHECK(Near(ChiSquareIndependence(ContingencyTable::FromCounts(permuted)).statistic, stat, 1e-12));

  Counts tripled = base;
  for (auto &row : tripled) {
    for (auto &v : row) v *= 3;
  }
  CHECK(Near(ChiSquareIndependence(ContingencyTable::FromCounts(tripled)).statistic, 3 * stat,
             1e-12));

  double last = 2.0;
  for (double x = 0.0; x < 30.0; x += 0.5) {
    const double p = RegularizedGammaQ(1.5, x / 2.0);
    CHECK(p <= last);
    last = p;
  }

  CHECK(ThrowsCode([] { ChiSquareIndependence(ContingencyTable::FromCounts({{0, 0}, {3, 4}})); },
                   ErrorCode::kDegenerateTable));
  CHECK(ThrowsCode([] { ChiSquareIndependence(ContingencyTable::FromCounts({{1, 0}, {3, 0}})); },
                   ErrorCode::kDegenerateTable));
  CHECK(ThrowsCode([] { ChiSquareIndependence(ContingencyTable::FromCounts({{1, 2}})); },
                   ErrorCode::kInvalidArgument));
  CHECK(ThrowsCode([] { ChiSquareIndependence(ContingencyTable::FromCounts({{1, -2}, {3, 4}})); },
                   ErrorCode::kInvalidArgument));
}

TEST_CASE("difference of proportions") {
  CHECK(DifferenceOfProportions(ContingencyTable::FromCounts({{20, 0}, {0, 20}})) == 1.0);
  CHECK(DifferenceOfProportions(ContingencyTable::FromCounts({{10, 10}, {10, 10}})) == 0.0);
  CHECK(DifferenceOfProportions(ContingencyTable::FromCounts({{30, 10}, {10, 30}})) == 0.5);
  CHECK(DifferenceOfProportions(ContingencyTable::FromCounts({{10, 30}, {30, 10}})) == -0.5);
  CHECK(ThrowsCode(
      [] { DifferenceOfProportions(ContingencyTable::FromCounts({{1, 2, 3}, {4, 5, 6}})); },
      ErrorCode::kInvalidArgument));
}

TEST_CASE("histogram") {
  const auto two = Histogram(std::vector<double>{0.5, 1.5}, 1.0);
  CHECK(two.size() == 2);
  CHECK(two.at(0) == 1);
  CHECK(two.at(1) == 1);

  const auto same = Histogram(std::vector<double>{3.3, 3.3, 3.3}, 2.0);
  CHECK(same.size() == 1);
  CHECK(same.at(1) == 3);

  const std::vector<double> values{-3.0, -0.1, 0.0, 59.9, 60.1, 61.99, 62.0};
  const auto bins = Histogram(values, 2.0);
  std::size_t total = 0;
  for (const auto &[bin, count] : bins) total += count;
  CHECK(total == values.size());
  CHECK(bins.at(-2) == 1);
  CHECK(bins.at(-1) == 1);
  CHECK(bins.at(29) == 1);
  CHECK(bins.at(30) == 2);
  CHECK(bins.at(31) == 1);

  const auto offset = Histogram(std::vector<double>{1.0}, 2.0, 0.5);
  CHECK(offset.at(0) == 1);
  CHECK(ThrowsCode([] { Histogram(std::vector<double>{1.0}, 0.0); }, ErrorCode::kInvalidArgument));
}

}  // namespace
}  // namespace classroom
