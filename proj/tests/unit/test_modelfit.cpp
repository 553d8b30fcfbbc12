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
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rsm/designs.hpp"
#include "rsm/errors.hpp"
#include "rsm/modelfit.hpp"
#include "rsm/random.hpp"
#include "rsm/special.hpp"

namespace {

std::vector<rsm::Factor> unit_factors(int k) {
  std::vector<rsm::Factor> f;
  for (int i = 0; i < k; ++i) f.push_back({"x" + std::to_string(i + 1), -1.0, 1.0, ""});
  return f;
}

std::vector<double> gaussian(std::size_t n, std::uint64_t seed) {
  rsm::SplitMix64 rng(seed);
  std::vector<double> y(n);
  for (auto& v : y) v = rng.normal();
  return y;
}

oracle::Matrix rows_of(const rsm::FittedModel& m) {
  const auto x = rsm::model_matrix(m.design.coded_matrix(), m.terms);
  oracle::Matrix out(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) out[static_cast<std::size_t>(r)].push_back(x(r, c));
  }
  return out;
}

}  // namespace

TEST(Fit, ExactLinearData) {
  const auto d = rsm::first_order_design(unit_factors(1), 2);
  ASSERT_EQ(d.size(), 4u);
  std::vector<double> y;
  for (const auto& r : d.runs) y.push_back(1.0 + 2.0 * r.coded[0]);
  const auto m = rsm::fit(d, y, rsm::ModelOrder::first);
  EXPECT_NEAR(m.coefficients(0), 1.0, 1e-14);
  EXPECT_NEAR(m.coefficients(1), 2.0, 1e-14);
  EXPECT_NEAR(m.r_squared, 1.0, 1e-14);
  EXPECT_LT(m.residuals.cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Fit, ExactQuadraticOnOneFactorComposite) {
  const auto c = rsm::central_composite(unit_factors(1), 3);
  std::vector<double> y;
  for (const auto& r : c.design.runs) y.push_back(r.coded[0] * r.coded[0]);
  const auto m = rsm::fit(c.design, y, rsm::ModelOrder::second);
  ASSERT_EQ(m.terms.size(), 3u);
  EXPECT_NEAR(m.quadratic_matrix()(0, 0), 1.0, 1e-13);
  EXPECT_NEAR(m.linear_coefficients()(0), 0.0, 1e-13);
}

TEST(Fit, SecondOrderTermCount) {
  for (int k = 1; k <= 6; ++k) {
    const auto f = unit_factors(k);
    std::vector<std::string> names;
    for (const auto& x : f) names.push_back(x.name);
    EXPECT_EQ(rsm::model_terms(names, rsm::ModelOrder::second).size(),
              static_cast<std::size_t>(1 + k + k * (k - 1) / 2 + k));
  }
}

TEST(Fit, MatchesNormalEquationsOracle) {
  for (int k = 2; k <= 4; ++k) {
    for (auto order : {rsm::ModelOrder::first, rsm::ModelOrder::second}) {
      const auto d = order == rsm::ModelOrder::first ? rsm::first_order_design(unit_factors(k), 3)
                                                     : rsm::central_composite(unit_factors(k), 3).design;
      const auto y = gaussian(d.size(), 40 + static_cast<std::uint64_t>(k));
      const auto m = rsm::fit(d, y, order);
      const auto x = rows_of(m);
      const auto b = oracle::normal_equations(x, y);
      for (std::size_t i = 0; i < b.size(); ++i) EXPECT_NEAR(m.coefficients(static_cast<Eigen::Index>(i)), b[i], 1e-8);
      double mean = 0.0;
      for (double v : y) mean += v;
      mean /= static_cast<double>(y.size());
      double tss = 0.0;
      for (double v : y) tss += (v - mean) * (v - mean);
      EXPECT_NEAR(m.r_squared, 1.0 - oracle::rss(x, y, b) / tss, 1e-8);
      EXPECT_GE(m.r_squared, 0.0);
      EXPECT_LE(m.r_squared, 1.0);
      EXPECT_NEAR(m.residuals.sum(), 0.0, 1e-8);
    }
  }
}

TEST(Fit, RankDeficientNamesTerms) {
  // Pure quadratic columns coincide on a two-level design with centers.
  const auto d = rsm::first_order_design(unit_factors(2), 3);
  const auto y = gaussian(d.size(), 3);
  try {
    rsm::fit(d, y, rsm::ModelOrder::second);
    FAIL() << "expected rank deficiency";
  } catch (const rsm::RankDeficientError& e) {
    ASSERT_FALSE(e.collinear_terms().empty());
    const auto& t = e.collinear_terms();
    EXPECT_TRUE(std::find(t.begin(), t.end(), "x1^2") != t.end() || std::find(t.begin(), t.end(), "x2^2") != t.end());
  }
}

TEST(Fit, OrthogonalDesignCoefficientsAreHalfEffects) {
  const auto d = rsm::first_order_design(unit_factors(3), 3);
  const auto y = gaussian(d.size(), 7);
  const auto m = rsm::fit(d, y, rsm::ModelOrder::first);
  for (int j = 0; j < 3; ++j) {
    double hi = 0.0, lo = 0.0;
    int nh = 0, nl = 0;
    for (std::size_t r = 0; r < d.size(); ++r) {
      const double x = d.runs[r].coded[static_cast<std::size_t>(j)];
      if (x > 0) { hi += y[r]; ++nh; }
      if (x < 0) { lo += y[r]; ++nl; }
    }
    EXPECT_NEAR(m.coefficients(j + 1), 0.5 * (hi / nh - lo / nl), 1e-12);
    // Dropping another factor leaves this estimate unchanged.
    std::vector<std::string> names{"x1", "x2", "x3"};
    std::vector<int> keep{j};
    auto reduced = rsm::fit_terms(d, y, [&] {
      auto t = rsm::linear_terms(names, keep);
      return t;
    }());
    EXPECT_NEAR(reduced.coefficients(1), m.coefficients(j + 1), 1e-12);
  }
  EXPECT_NEAR(m.predict(std::vector<double>{0, 0, 0}), m.intercept(), 1e-14);
}

TEST(Fit, InvariantToNaturalUnitRescaling) {
  const std::vector<rsm::Factor> a{{"p", 0.0, 1.0, ""}, {"q", 10.0, 30.0, ""}};
  const std::vector<rsm::Factor> b{{"p", -500.0, 2000.0, ""}, {"q", 0.001, 0.002, ""}};
  const auto da = rsm::central_composite(a, 3).design;
  const auto db = rsm::central_composite(b, 3).design;
  const auto y = gaussian(da.size(), 11);
  const auto ma = rsm::fit(da, y, rsm::ModelOrder::second);
  const auto mb = rsm::fit(db, y, rsm::ModelOrder::second);
  for (Eigen::Index i = 0; i < ma.coefficients.size(); ++i) EXPECT_EQ(ma.coefficients(i), mb.coefficients(i));
}

TEST(Anova, ReconstitutesTotal) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto d = rsm::central_composite(unit_factors(3), 3).design;
    const auto y = gaussian(d.size(), seed);
    const auto m = rsm::fit(d, y, rsm::ModelOrder::second);
    const auto t = rsm::anova(m);
    ASSERT_TRUE(t.lack_of_fit.has_value());
    const double recon = t.regression.ss + t.lack_of_fit->ss + t.pure_error->ss;
    EXPECT_NEAR(recon, t.total.ss, 1e-8 * t.total.ss);
    EXPECT_EQ(t.regression.df + t.lack_of_fit->df + t.pure_error->df, t.total.df);
    EXPECT_EQ(t.total.df, static_cast<int>(d.size()) - 1);
    double groups = 0.0;
    for (const auto& g : t.groups) {
      EXPECT_GE(g.df, 0);
      groups += g.ss;
    }
    EXPECT_NEAR(groups, t.regression.ss, 1e-8 * t.total.ss);
  }
}

TEST(Anova, ExactFitHasZeroLackOfFit) {
  const auto d = rsm::first_order_design(unit_factors(2), 3);
  std::vector<double> y;
  for (const auto& r : d.runs) y.push_back(3.0 + r.coded[0] - 2.0 * r.coded[1]);
  const auto t = rsm::anova(rsm::fit(d, y, rsm::ModelOrder::first));
  ASSERT_TRUE(t.lack_of_fit.has_value());
  EXPECT_EQ(t.lack_of_fit->ss, 0.0);
  ASSERT_TRUE(t.lack_of_fit->p.has_value());
  EXPECT_EQ(*t.lack_of_fit->p, 1.0);
}

TEST(Anova, PerturbedReplicatePairGivesHalfSquaredDelta) {
  const auto d = rsm::first_order_design(unit_factors(2), 2);
  const double delta = 0.37;
  std::vector<double> y;
  for (const auto& r : d.runs) y.push_back(1.0 + 0.5 * r.coded[0] + 0.25 * r.coded[1] + 0.8 * r.coded[0] * r.coded[1]);
  y.back() += delta;
  const auto t = rsm::anova(rsm::fit(d, y, rsm::ModelOrder::first));
  ASSERT_TRUE(t.pure_error.has_value());
  EXPECT_EQ(t.pure_error->df, 1);
  EXPECT_NEAR(t.pure_error->ss, delta * delta / 2.0, 1e-12);
}

TEST(Anova, NoReplicatesFlagsMissingLackOfFit) {
  const auto d = rsm::full_factorial(unit_factors(3));
  const auto t = rsm::anova(rsm::fit(d, gaussian(d.size(), 2), rsm::ModelOrder::first));
  EXPECT_FALSE(t.lof_available());
  EXPECT_FALSE(t.lof_note.empty());
}

TEST(Anova, PValuesMatchIncompleteBetaOracle) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const auto d = rsm::central_composite(unit_factors(3), 4).design;
    auto y = gaussian(d.size(), 100 + seed);
    for (std::size_t r = 0; r < y.size(); ++r) y[r] += 0.6 * d.runs[r].coded[0] - 0.4 * d.runs[r].coded[1] * d.runs[r].coded[1];
    const auto m = rsm::fit(d, y, rsm::ModelOrder::second);
    const auto t = rsm::anova(m);
    for (const auto& g : t.groups) {
      ASSERT_TRUE(g.f && g.p);
      EXPECT_NEAR(*g.p, oracle::f_upper_tail(*g.f, g.df, m.df_residual), 1e-6);
    }
    EXPECT_NEAR(m.f_pvalue, oracle::f_upper_tail(m.f_statistic, m.df_model, m.df_residual), 1e-6);
    ASSERT_TRUE(t.lack_of_fit && t.lack_of_fit->p);
    EXPECT_NEAR(*t.lack_of_fit->p, oracle::f_upper_tail(*t.lack_of_fit->f, t.lack_of_fit->df, t.pure_error->df), 1e-6);
    for (Eigen::Index i = 0; i < m.t_values.size(); ++i) {
      EXPECT_NEAR(m.coef_pvalues(i), oracle::t_two_sided(m.t_values(i), m.df_residual), 1e-6);
    }
  }
}

TEST(Special, IncompleteBetaAgainstBoost) {
  rsm::SplitMix64 rng(77);
  for (int i = 0; i < 2000; ++i) {
    const double a = 0.05 + 40 * rng.uniform();
    const double b = 0.05 + 40 * rng.uniform();
    const double x = rng.uniform();
    EXPECT_NEAR(rsm::special::regularized_beta(x, a, b), boost::math::ibeta(a, b, x), 1e-10)
        << "a=" << a << " b=" << b << " x=" << x;
  }
}

TEST(InformationCriteria, Identities) {
  const int n = 17;
  const auto base = rsm::information_criteria(2.5, n, 10);
  const auto doubled = rsm::information_criteria(5.0, n, 10);
  EXPECT_NEAR(doubled.aic - base.aic, n * std::numbers::ln2, 1e-12);
  EXPECT_NEAR(doubled.bic - base.bic, n * std::numbers::ln2, 1e-12);
  const auto extra = rsm::information_criteria(2.5, n, 11);
  EXPECT_NEAR(extra.bic - base.bic, std::log(static_cast<double>(n)), 1e-12);
  EXPECT_NEAR(extra.aic - base.aic, 2.0, 1e-12);
  const double expect_aic = n * std::log(2 * std::numbers::pi * 2.5 / n) + n + 2 * 11;
  EXPECT_NEAR(base.aic, expect_aic, 1e-12);
}

TEST(InformationCriteria, ExactFitSentinel) {
  const auto ic = rsm::information_criteria(0.0, 10, 3);
  EXPECT_TRUE(ic.exact_fit);
  EXPECT_TRUE(std::isinf(ic.aic) && ic.aic < 0);
  EXPECT_TRUE(std::isinf(ic.bic) && ic.bic < 0);
}

TEST(Spearman, Examples) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  // Rank differences (-1, 1, -1, 1, 0): rho = 1 - 6 * 4 / (5 * 24).
  EXPECT_NEAR(rsm::spearman(x, std::vector<double>{2, 1, 4, 3, 5}).rho, 0.8, 1e-14);
  EXPECT_NEAR(rsm::spearman(x, std::vector<double>{-1, -2, -3, -4, -5}).rho, -1.0, 1e-14);
  EXPECT_THROW(rsm::spearman(x, std::vector<double>{3, 3, 3, 3, 3}), rsm::UndefinedCorrelationError);
}

TEST(Spearman, InvariantUnderIncreasingTransforms) {
  rsm::SplitMix64 rng(6);
  std::vector<double> x;
  for (int i = 0; i < 40; ++i) x.push_back(rng.uniform() * 6 - 3);
  for (auto g : {+[](double v) { return std::exp(v); }, +[](double v) { return v * v * v; },
                 +[](double v) { return std::atan(v) + 4; }, +[](double v) { return 2 * v - 1; }}) {
    std::vector<double> y;
    for (double v : x) y.push_back(g(v));
    EXPECT_NEAR(rsm::spearman(x, y).rho, 1.0, 1e-14);
  }
}

TEST(Spearman, TiesUseAverageRanksAndTDistribution) {
  const std::vector<double> x{1, 2, 2, 3, 4, 5, 5, 6};
  const std::vector<double> y{2, 1, 3, 3, 6, 4, 5, 8};
  const auto rx = rsm::average_ranks(x);
  EXPECT_EQ(rx[1], 2.5);
  EXPECT_EQ(rx[2], 2.5);
  const auto c = rsm::spearman(x, y);
  const auto ry = rsm::average_ranks(y);
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) { mx += rx[i]; my += ry[i]; }
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  const double rho = sxy / std::sqrt(sxx * syy);
  EXPECT_NEAR(c.rho, rho, 1e-14);
  const double t = rho * std::sqrt((x.size() - 2) / (1 - rho * rho));
  EXPECT_NEAR(c.p_value, oracle::t_two_sided(t, static_cast<double>(x.size() - 2)), 1e-10);
}
