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

#ifndef RSM_SCREENING_HPP_
#define RSM_SCREENING_HPP_

// Factor screening on two-level designs: bidirectional stepwise selection
// under BIC, and Gaussian Lasso with K-fold cross-validation and the
// one-standard-error rule.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rsm/designs.hpp"
#include "rsm/modelfit.hpp"

namespace rsm {

enum class ScreeningMethod { stepwise, lasso };

std::string to_string(ScreeningMethod method);

struct ScreeningEstimate {
  std::string term;
  double estimate = 0.0;  // coded units
  std::optional<double> p_value;
};

struct StepwiseStep {
  std::string move;  // "+term", "-term" or "<start>"
  double bic = 0.0;
  std::vector<std::string> terms;
};

struct LassoPathPoint {
  double lambda = 0.0;
  double cv_mean = 0.0;
  double cv_sd = 0.0;
  int nonzero = 0;
};

struct ScreeningResult {
  ScreeningMethod method = ScreeningMethod::stepwise;
  double intercept = 0.0;
  std::vector<ScreeningEstimate> selected;  // in design factor order
  std::vector<StepwiseStep> steps;          // stepwise trace, first entry is the start
  std::vector<LassoPathPoint> lambda_path;  // Lasso CV curve, decreasing lambda
  Eigen::MatrixXd coefficient_path;         // lambda x candidate, coded units
  double lambda_min = 0.0;
  double lambda_1se = 0.0;
  std::vector<std::string> warnings;

  std::vector<std::string> selected_names() const;
};

// Starts from the intercept-only model and repeatedly applies the single add
// or drop that most lowers BIC (ties broken by lexicographic move label)
// until no move lowers it. `scope` defaults to all main effects.
ScreeningResult stepwise_bic(const Design& design, std::span<const double> y,
                             std::optional<std::vector<Term>> scope = std::nullopt);

struct LassoFit {
  double intercept = 0.0;
  Eigen::VectorXd coefficients;  // original (unstandardized) column units
};

struct LassoOptions {
  int n_lambda = 100;
  double lambda_min_ratio = 1e-4;
  double tolerance = 1e-12;
  int max_sweeps = 100000;
  std::uint64_t fold_seed = 1;
};

// Lasso on standardized columns of `x` (no intercept column), evaluated at
// each lambda in decreasing order with warm starts. Coefficients are mapped
// back to the units of `x`.
std::vector<LassoFit> lasso_path(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                 std::span<const double> lambdas, const LassoOptions& opts = {});

// max_j |x_j' (y - ybar)| / n on standardized columns.
double lasso_lambda_max(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

// Fold label (0..nfolds-1) per observation; deterministic in (seed, n, nfolds).
std::vector<int> cv_folds(std::size_t n, int nfolds, std::uint64_t seed);

ScreeningResult lasso_cv(const Design& design, std::span<const double> y, int nfolds = 3,
                         const LassoOptions& opts = {});

// Factors present in both results, in design factor order.
std::vector<std::string> agreed_factors(const Design& design, const ScreeningResult& a,
                                        const ScreeningResult& b);

struct InactiveFactorPolicy {
  struct Entry {
    Factor factor;  // bounds used for clamping
    double mean = 0.0;
    double sd = 0.0;
  };
  std::vector<Entry> entries;
};

// Normal(mean, sd) draws clamped to each factor's [low, high], in entry order.
std::map<std::string, double> assign_inactive(const InactiveFactorPolicy& policy,
                                              std::uint64_t seed);

}  // namespace rsm

#endif  // RSM_SCREENING_HPP_
