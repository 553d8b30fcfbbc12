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

#ifndef RSM_MODELFIT_HPP_
#define RSM_MODELFIT_HPP_

// Least-squares response-surface models in coded units.
//
//   FO: y = b0 + sum_i b_i x_i
//   SO: FO + sum_{i<j} b_ij x_i x_j + sum_i b_ii x_i^2
//
// Terms are ordered intercept, linear, two-way interactions, pure quadratics.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rsm/designs.hpp"

namespace rsm {

enum class ModelOrder { first, second };

std::string to_string(ModelOrder order);
ModelOrder model_order_from_string(const std::string& s);

struct Term {
  enum class Kind { intercept, linear, interaction, quadratic };
  Kind kind = Kind::intercept;
  int i = -1;
  int j = -1;
  std::string name;

  double evaluate(std::span<const double> coded) const;
};

std::vector<Term> model_terms(std::span<const std::string> factor_names, ModelOrder order);
// Intercept plus one linear term per listed factor index.
std::vector<Term> linear_terms(std::span<const std::string> factor_names,
                               std::span<const int> indices);
Eigen::MatrixXd model_matrix(const Eigen::MatrixXd& coded, std::span<const Term> terms);

struct LeastSquares {
  Eigen::VectorXd coefficients;
  Eigen::VectorXd fitted;
  Eigen::VectorXd residuals;
  double rss = 0.0;
  Eigen::MatrixXd xtx_inverse;  // empty unless requested
};

// Column-pivoted Householder QR. Throws RankDeficientError naming the terms
// whose columns are linear combinations of earlier ones.
LeastSquares least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           std::span<const std::string> term_names = {},
                           bool with_covariance = false);

struct InformationCriteria {
  double aic = 0.0;
  double bic = 0.0;
  bool exact_fit = false;  // RSS == 0: both criteria are -infinity
};

// Gaussian log-likelihood form counting the error variance as a parameter:
// AIC = n ln(2 pi RSS / n) + n + 2 (p + 1), BIC uses ln(n) (p + 1).
InformationCriteria information_criteria(double rss, int n, int n_coefficients);

// RSS below this fraction of sum(y^2) is treated as an exact fit.
inline constexpr double kExactFitRelTol = 1e-20;

struct FittedModel {
  ModelOrder order = ModelOrder::first;
  Design design;
  std::vector<Term> terms;
  Eigen::VectorXd y;

  Eigen::VectorXd coefficients;
  Eigen::VectorXd fitted;
  Eigen::VectorXd residuals;
  Eigen::VectorXd std_errors;
  Eigen::VectorXd t_values;
  Eigen::VectorXd coef_pvalues;
  Eigen::MatrixXd xtx_inverse;

  double rss = 0.0;
  double tss = 0.0;
  double sigma2 = 0.0;
  double r_squared = 0.0;
  double adj_r_squared = 0.0;
  double f_statistic = 0.0;
  double f_pvalue = 1.0;
  int df_model = 0;
  int df_residual = 0;
  double aic = 0.0;
  double bic = 0.0;
  bool exact_fit = false;
  std::optional<double> lof_pvalue;

  int n() const { return static_cast<int>(y.size()); }
  int k() const { return static_cast<int>(design.dimension()); }
  double intercept() const { return coefficients(0); }
  // Linear coefficients b (zeros for factors without a linear term).
  Eigen::VectorXd linear_coefficients() const;
  // Symmetric B with B_ii = b_ii and B_ij = b_ij / 2, so y = b0 + b'x + x'Bx.
  Eigen::MatrixXd quadratic_matrix() const;
  double predict(std::span<const double> coded) const;
  Eigen::VectorXd gradient(std::span<const double> coded) const;
  // x'(X'X)^-1 x of the model row at `coded` (unit error variance).
  double prediction_variance(std::span<const double> coded) const;
};

FittedModel fit(const Design& design, std::span<const double> y, ModelOrder order);
FittedModel fit_terms(const Design& design, std::span<const double> y, std::vector<Term> terms);

struct AnovaRow {
  std::string source;
  int df = 0;
  double ss = 0.0;
  double ms = 0.0;
  std::optional<double> f;
  std::optional<double> p;
};

struct AnovaTable {
  std::vector<AnovaRow> groups;  // FO, TWI, PQ (sequential sums of squares)
  AnovaRow regression;
  AnovaRow residual;
  std::optional<AnovaRow> lack_of_fit;
  std::optional<AnovaRow> pure_error;
  AnovaRow total;
  std::string lof_note;  // why the lack-of-fit test is absent, if it is

  bool lof_available() const { return lack_of_fit && lack_of_fit->p.has_value(); }
};

// Sequential ANOVA with lack-of-fit / pure-error split. Pure error comes from
// runs whose coded rows agree within 1e-9.
AnovaTable anova(const FittedModel& model);

// Groups of row indices with identical coded coordinates (within `tol`).
std::vector<std::vector<int>> replicate_groups(const Eigen::MatrixXd& coded, double tol = 1e-9);

struct Correlation {
  double rho = 0.0;
  double p_value = 1.0;
  int n = 0;
};

// Average ranks (1-based), ties share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> v);
// Spearman's rho with a two-sided t-approximation p-value.
Correlation spearman(std::span<const double> x, std::span<const double> y);

}  // namespace rsm

#endif  // RSM_MODELFIT_HPP_
