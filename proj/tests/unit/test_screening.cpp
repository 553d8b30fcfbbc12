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

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rsm/designs.hpp"
#include "rsm/errors.hpp"
#include "rsm/random.hpp"
#include "rsm/screening.hpp"

namespace {

std::vector<rsm::Factor> unit_factors(int k) {
  std::vector<rsm::Factor> f;
  for (int i = 0; i < k; ++i) f.push_back({"x" + std::to_string(i + 1), -1.0, 1.0, ""});
  return f;
}

std::set<std::string> names_of(const rsm::ScreeningResult& r) {
  const auto v = r.selected_names();
  return {v.begin(), v.end()};
}

oracle::Matrix columns(const rsm::Design& d) {
  oracle::Matrix m;
  for (const auto& r : d.runs) m.push_back(r.coded);
  return m;
}

std::set<std::string> mask_names(unsigned mask, int k) {
  std::set<std::string> s;
  for (int j = 0; j < k; ++j) {
    if (mask & (1u << j)) s.insert("x" + std::to_string(j + 1));
  }
  return s;
}

}  // namespace

TEST(Stepwise, ExactSingleFactor) {
  const auto d = rsm::full_factorial(unit_factors(4));
  std::vector<double> y;
  for (const auto& r : d.runs) y.push_back(3.0 * r.coded[0]);
  const auto res = rsm::stepwise_bic(d, y);
  EXPECT_EQ(names_of(res), (std::set<std::string>{"x1"}));
  ASSERT_EQ(res.selected.size(), 1u);
  EXPECT_NEAR(res.selected[0].estimate, 3.0, 1e-12);
}

TEST(Stepwise, ConstantResponseSelectsNothing) {
  const auto d = rsm::full_factorial(unit_factors(4));
  const std::vector<double> y(d.size(), 2.5);
  EXPECT_TRUE(rsm::stepwise_bic(d, y).selected.empty());
}

TEST(Stepwise, TwoFactorsOnHalfFractionKeepSigns) {
  const auto f = unit_factors(4);
  const std::vector<std::string> gens{"D=ABC"};
  const auto d = rsm::fractional_factorial(f, 1, gens).design;
  rsm::SplitMix64 rng(4);
  std::vector<double> y;
  for (const auto& r : d.runs) y.push_back(2.0 * r.coded[0] - r.coded[1] + 1e-3 * rng.normal());
  const auto res = rsm::stepwise_bic(d, y);
  EXPECT_EQ(names_of(res), (std::set<std::string>{"x1", "x2"}));
  for (const auto& e : res.selected) {
    if (e.term == "x1") { EXPECT_GT(e.estimate, 0.0); }
    if (e.term == "x2") { EXPECT_LT(e.estimate, 0.0); }
  }
  EXPECT_EQ(names_of(res), mask_names(oracle::best_subset_bic(columns(d), y), 4));
}

TEST(Stepwise, AgreesWithExhaustiveBestSubset) {
  rsm::SplitMix64 rng(2024);
  int trials = 0;
  for (int k = 2; k <= 4; ++k) {
    const auto designs = {rsm::full_factorial(unit_factors(k)), rsm::first_order_design(unit_factors(k), 3),
                          rsm::central_composite(unit_factors(k), 3).design};
    for (const auto& d : designs) {
      for (int t = 0; t < 30; ++t) {
        std::vector<double> beta(static_cast<std::size_t>(k));
        for (auto& b : beta) b = rng.uniform() < 0.5 ? 0.0 : rng.normal();
        std::vector<double> y;
        for (const auto& r : d.runs) {
          double v = rng.normal() * 0.5;
          for (int j = 0; j < k; ++j) v += beta[static_cast<std::size_t>(j)] * r.coded[static_cast<std::size_t>(j)];
          y.push_back(v);
        }
        const auto res = rsm::stepwise_bic(d, y);
        EXPECT_EQ(names_of(res), mask_names(oracle::best_subset_bic(columns(d), y), k)) << "k=" << k << " trial " << t;
        ++trials;
      }
    }
  }
  EXPECT_EQ(trials, 270);
}

TEST(Stepwise, TraceStrictlyImproves) {
  const auto d = rsm::fractional_factorial(unit_factors(8), 2, std::vector<std::string>{"G=ABCD", "H=ABEF"}).design;
  rsm::SplitMix64 rng(12);
  std::vector<double> y;
  for (const auto& r : d.runs) y.push_back(0.5 * r.coded[1] - 0.3 * r.coded[5] + 0.1 * r.coded[6] + 0.2 * rng.normal());
  const auto res = rsm::stepwise_bic(d, y);
  ASSERT_GE(res.steps.size(), 2u);
  EXPECT_EQ(res.steps.front().move, "<start>");
  for (std::size_t i = 1; i < res.steps.size(); ++i) EXPECT_LT(res.steps[i].bic, res.steps[i - 1].bic);
  // The final model is no worse than the intercept-only or the full main-effects model.
  oracle::Matrix full;
  for (const auto& r : d.runs) {
    std::vector<double> row{1.0};
    row.insert(row.end(), r.coded.begin(), r.coded.end());
    full.push_back(row);
  }
  const double full_bic = oracle::bic(oracle::rss(full, y, oracle::normal_equations(full, y)), y.size(), 9);
  EXPECT_LE(res.steps.back().bic, full_bic + 1e-9);
  EXPECT_LE(res.steps.back().bic, res.steps.front().bic);
}

TEST(Lasso, LambdaMaxZeroesEverything) {
  const auto d = rsm::full_factorial(unit_factors(3));
  rsm::SplitMix64 rng(1);
  Eigen::VectorXd y(static_cast<Eigen::Index>(d.size()));
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = rng.normal() + 2.0 * d.runs[static_cast<std::size_t>(i)].coded[0];
  const Eigen::MatrixXd x = d.coded_matrix();
  // Independent lambda_max on standardized columns: max |x_j' (y - ybar)| / (n * sd_j).
  const double n = static_cast<double>(x.rows());
  double expect = 0.0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const Eigen::VectorXd c = x.col(j).array() - x.col(j).mean();
    const double sd = std::sqrt(c.squaredNorm() / n);
    expect = std::max(expect, std::abs(c.dot(y.array().matrix() - Eigen::VectorXd::Constant(y.size(), y.mean()))) / (n * sd));
  }
  const double lmax = rsm::lasso_lambda_max(x, y);
  EXPECT_NEAR(lmax, expect, 1e-12);
  const std::vector<double> lambdas{lmax, 2 * lmax};
  for (const auto& fit : rsm::lasso_path(x, y, lambdas)) EXPECT_EQ(fit.coefficients.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Lasso, ZeroLambdaLimitMatchesOls) {
  const auto d = rsm::central_composite(unit_factors(3), 3).design;
  rsm::SplitMix64 rng(9);
  Eigen::VectorXd y(static_cast<Eigen::Index>(d.size()));
  std::vector<double> yv;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const auto& c = d.runs[static_cast<std::size_t>(i)].coded;
    y(i) = 1.0 + c[0] - 0.5 * c[2] + rng.normal();
    yv.push_back(y(i));
  }
  const Eigen::MatrixXd x = d.coded_matrix();
  const double lmax = rsm::lasso_lambda_max(x, y);
  std::vector<double> lambdas;
  for (int i = 0; i < 30; ++i) lambdas.push_back(lmax * std::pow(0.5, i));
  lambdas.push_back(0.0);
  const auto path = rsm::lasso_path(x, y, lambdas);
  oracle::Matrix rows;
  for (const auto& r : d.runs) {
    std::vector<double> row{1.0};
    row.insert(row.end(), r.coded.begin(), r.coded.end());
    rows.push_back(row);
  }
  const auto ols = oracle::normal_equations(rows, yv);
  EXPECT_NEAR(path.back().intercept, ols[0], 1e-6);
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(path.back().coefficients(j), ols[static_cast<std::size_t>(j + 1)], 1e-6);
}

TEST(Lasso, PathHasNoSignJumps) {
  rsm::SplitMix64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = rsm::fractional_factorial(unit_factors(8), 2, std::vector<std::string>{"G=ABCD", "H=ABEF"}).design;
    std::vector<double> y;
    for (const auto& r : d.runs) y.push_back(rng.normal() + r.coded[0] * rng.normal());
    const auto res = rsm::lasso_cv(d, y, 3);
    const auto& p = res.coefficient_path;
    for (Eigen::Index l = 1; l < p.rows(); ++l) {
      for (Eigen::Index j = 0; j < p.cols(); ++j) EXPECT_GE(p(l, j) * p(l - 1, j), 0.0);
    }
    for (std::size_t l = 1; l < res.lambda_path.size(); ++l) EXPECT_LT(res.lambda_path[l].lambda, res.lambda_path[l - 1].lambda);
  }
}

TEST(Lasso, SparseTruthRecovered) {
  const auto d = rsm::full_factorial(unit_factors(4));
  rsm::SplitMix64 rng(501);
  int hits = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> y;
    for (const auto& r : d.runs) y.push_back(4.0 * r.coded[0] + 0.1 * rng.normal());
    rsm::LassoOptions opts;
    opts.fold_seed = rsm::substream_seed(77, static_cast<std::uint64_t>(trial));
    const auto res = rsm::lasso_cv(d, y, 3, opts);
    hits += names_of(res) == std::set<std::string>{"x1"} ? 1 : 0;
    EXPECT_LE(res.lambda_min, res.lambda_1se);
  }
  EXPECT_GE(hits, 95);
}

TEST(Lasso, FoldsDeterministicAndBalanced) {
  const auto a = rsm::cv_folds(64, 3, 5);
  EXPECT_EQ(a, rsm::cv_folds(64, 3, 5));
  EXPECT_NE(a, rsm::cv_folds(64, 3, 6));
  std::vector<int> count(3, 0);
  for (int f : a) ++count[static_cast<std::size_t>(f)];
  for (int c : count) EXPECT_GE(c, 21);
}

TEST(Lasso, ConstantResponseSelectsNothing) {
  const auto d = rsm::full_factorial(unit_factors(3));
  const std::vector<double> y(d.size(), 1.0);
  const auto res = rsm::lasso_cv(d, y, 3);
  EXPECT_TRUE(res.selected.empty());
  EXPECT_FALSE(res.warnings.empty());
}

TEST(Lasso, InvalidFoldCountRejected) {
  const auto d = rsm::full_factorial(unit_factors(2));
  const std::vector<double> y{1, 2, 3, 4};
  EXPECT_THROW(rsm::lasso_cv(d, y, 1), rsm::InvalidArgument);
  EXPECT_THROW(rsm::lasso_cv(d, y, 5), rsm::InvalidArgument);
}

TEST(AssignInactive, ZeroSdAndClampingAndDeterminism) {
  rsm::InactiveFactorPolicy p;
  p.entries.push_back({{"fixed", 0.5, 2.5, "m"}, 1.2, 0.0});
  p.entries.push_back({{"overhang", 0.5, 2.5, "m"}, 0.5, 2.0});
  p.entries.push_back({{"wwr", 5.0, 40.0, "%"}, 15.0, 2.0});
  for (std::uint64_t s = 0; s < 500; ++s) {
    const auto v = rsm::assign_inactive(p, s);
    EXPECT_EQ(v.at("fixed"), 1.2);
    EXPECT_GE(v.at("overhang"), 0.5);
    EXPECT_LE(v.at("overhang"), 2.5);
    EXPECT_GE(v.at("wwr"), 5.0);
    EXPECT_LE(v.at("wwr"), 40.0);
    EXPECT_EQ(v, rsm::assign_inactive(p, s));
  }
  p.entries[0].sd = -1.0;
  EXPECT_THROW(rsm::assign_inactive(p, 1), rsm::InvalidArgument);
}

TEST(AgreedFactors, IntersectionInDesignOrder) {
  const auto d = rsm::full_factorial(unit_factors(4));
  rsm::ScreeningResult a, b;
  a.selected = {{"x3", 1.0, {}}, {"x1", 1.0, {}}, {"x2", 1.0, {}}};
  b.selected = {{"x2", 1.0, {}}, {"x3", 1.0, {}}, {"x4", 1.0, {}}};
  EXPECT_EQ(rsm::agreed_factors(d, a, b), (std::vector<std::string>{"x2", "x3"}));
}
