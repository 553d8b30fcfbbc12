// Copyright 2026 The rsmkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rsm/bootstrap.hpp"
#include "rsm/canonical.hpp"
#include "rsm/errors.hpp"
#include "rsm/random.hpp"

namespace {

const std::vector<rsm::Factor> kFactors{{"overhang", 3.1, 4.1, "m"}, {"wwr_west", -4.0, 16.0, "%"}, {"wwr_south", 18.0, 38.0, "%"}};

rsm::Design ccd() { return rsm::central_composite(kFactors, 3).design; }

// Surrogate D on a CCD near the optimum plus sigma-scaled fixed deviates.
rsm::FittedModel noisy_model(double sigma, std::uint64_t seed) {
  const auto d = ccd();
  rsm::SplitMix64 rng(seed);
  std::vector<double> y;
  for (const auto& r : d.runs) y.push_back(oracle::housing_d(r.natural[0], r.natural[1], r.natural[2]) + sigma * rng.normal());
  return rsm::fit(d, y, rsm::ModelOrder::second);
}

double width(const rsm::BootstrapResult& r, std::size_t i) { return r.ci[i].high - r.ci[i].low; }

}  // namespace

TEST(PercentileCi, Examples) {
  std::vector<double> v(100);
  std::iota(v.begin(), v.end(), 1.0);
  const auto ci = rsm::percentile_ci(v, 0.95);
  EXPECT_NEAR(ci.low, 3.475, 1e-12);
  EXPECT_NEAR(ci.high, 97.525, 1e-12);
  const std::vector<double> c(10, 4.2);
  EXPECT_EQ(rsm::percentile_ci(c, 0.95).low, 4.2);
  EXPECT_EQ(rsm::percentile_ci(c, 0.95).high, 4.2);
  const auto med = rsm::percentile_ci(v, 0.0);
  EXPECT_DOUBLE_EQ(med.low, 50.5);
  EXPECT_DOUBLE_EQ(med.high, 50.5);
}

TEST(PercentileCi, MatchesOrderStatisticOracle) {
  rsm::SplitMix64 rng(4);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> v(1 + rng.index(200));
    for (auto& x : v) x = rng.normal();
    for (double q : {0.0, 0.025, 0.1, 0.5, 0.9, 0.975, 1.0}) EXPECT_NEAR(rsm::quantile(v, q), oracle::quantile7(v, q), 1e-12);
  }
}

TEST(Bootstrap, ZeroResidualsGiveZeroWidth) {
  const auto d = ccd();
  std::vector<double> y;
  for (const auto& r : d.runs) {
    const auto& x = r.coded;
    y.push_back(1.0 + 0.2 * x[0] - 0.1 * x[2] - x[0] * x[0] - 0.5 * x[1] * x[1] - 0.7 * x[2] * x[2] + 0.1 * x[0] * x[1]);
  }
  const auto m = rsm::fit(d, y, rsm::ModelOrder::second);
  const auto r = rsm::bootstrap_stationary(m, 200, 123);
  EXPECT_EQ(r.n_failed, 0);
  EXPECT_EQ(r.stationary_samples.rows(), 200);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(width(r, i), 0.0);
    EXPECT_NEAR(r.ci[i].low, r.point_estimate[i], 1e-9);
  }
}

TEST(Bootstrap, DeterministicForSeed) {
  const auto m = noisy_model(0.005, 1);
  const auto a = rsm::bootstrap_stationary(m, 300, 123);
  const auto b = rsm::bootstrap_stationary(m, 300, 123);
  EXPECT_EQ(a.stationary_samples, b.stationary_samples);
  EXPECT_EQ(a.replication_index, b.replication_index);
  EXPECT_EQ(a.n_failed, b.n_failed);
  const auto c = rsm::bootstrap_stationary(m, 300, 124);
  EXPECT_NE(a.stationary_samples, c.stationary_samples);
}

TEST(Bootstrap, ParallelEqualsSequential) {
  const auto m = noisy_model(0.01, 2);
  rsm::BootstrapOptions seq, par;
  par.threads = 7;
  const auto a = rsm::bootstrap_stationary(m, 1000, 9, seq);
  const auto b = rsm::bootstrap_stationary(m, 1000, 9, par);
  EXPECT_EQ(a.stationary_samples, b.stationary_samples);
  EXPECT_EQ(a.replication_index, b.replication_index);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(a.ci[i].low, b.ci[i].low);
    EXPECT_EQ(a.ci[i].high, b.ci[i].high);
  }
}

TEST(Bootstrap, DfCorrectionWidensIntervals) {
  const auto m = noisy_model(0.005, 4);
  rsm::BootstrapOptions raw, corrected;
  raw.scaling = rsm::ResidualScaling::none;
  corrected.scaling = rsm::ResidualScaling::df_corrected;
  const auto a = rsm::bootstrap_stationary(m, 1000, 11, raw);
  const auto b = rsm::bootstrap_stationary(m, 1000, 11, corrected);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_GT(width(b, i), width(a, i));
  EXPECT_EQ(rsm::BootstrapOptions{}.scaling, rsm::ResidualScaling::df_corrected);
}

TEST(Bootstrap, CountsAndOrdering) {
  const auto m = noisy_model(0.02, 3);
  const auto r = rsm::bootstrap_stationary(m, 500, 5);
  EXPECT_EQ(r.replications, 500);
  EXPECT_EQ(r.stationary_samples.rows() + r.n_failed, 500);
  EXPECT_EQ(static_cast<int>(r.replication_index.size()), r.stationary_samples.rows());
  for (std::size_t i = 1; i < r.replication_index.size(); ++i) EXPECT_LT(r.replication_index[i - 1], r.replication_index[i]);
  for (const auto& ci : r.ci) EXPECT_LE(ci.low, ci.high);
  const auto a = rsm::stationary_point(m);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(r.point_estimate[i], a.stationary_natural[i], 1e-12);
}

TEST(Bootstrap, WidthGrowsWithNoise) {
  std::vector<double> prev(3, -1.0);
  for (double sigma : {0.0, 0.002, 0.01}) {
    const auto r = rsm::bootstrap_stationary(noisy_model(sigma, 11), 1000, 123);
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_GE(width(r, i), prev[i]) << "sigma " << sigma << " factor " << i;
      prev[i] = width(r, i);
    }
  }
}

TEST(Bootstrap, PointEstimateInsideOwnInterval) {
  int inside = 0, total = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    const auto m = noisy_model(0.005, 1000 + t);
    const auto r = rsm::bootstrap_stationary(m, 400, t);
    bool all = true;
    for (std::size_t i = 0; i < 3; ++i) all = all && r.ci[i].low <= r.point_estimate[i] && r.point_estimate[i] <= r.ci[i].high;
    inside += all ? 1 : 0;
    ++total;
  }
  EXPECT_GE(inside, 99) << inside << " of " << total;
}

TEST(Bootstrap, AllReplicationsFailingIsDegenerate) {
  // Exact data with the stationary point far outside the design.
  const auto d = ccd();
  std::vector<double> y;
  for (const auto& r : d.runs) {
    const auto& x = r.coded;
    y.push_back(x[0] - 0.001 * x[0] * x[0] - x[1] * x[1] - x[2] * x[2]);
  }
  const auto m = rsm::fit(d, y, rsm::ModelOrder::second);
  EXPECT_THROW(rsm::bootstrap_stationary(m, 50, 1), rsm::DegenerateBootstrapError);
}

TEST(Bootstrap, InvalidArguments) {
  const auto m = noisy_model(0.01, 1);
  EXPECT_THROW(rsm::bootstrap_stationary(m, 0, 1), rsm::InvalidArgument);
  const auto fo = rsm::fit(rsm::first_order_design(kFactors, 3), std::vector<double>(11, 1.0), rsm::ModelOrder::first);
  EXPECT_THROW(rsm::bootstrap_stationary(fo, 10, 1), rsm::InvalidArgument);
}
