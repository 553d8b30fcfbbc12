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

#include "rsm/screening.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "rsm/errors.hpp"
#include "rsm/random.hpp"

namespace rsm {
namespace {

Eigen::VectorXd to_vector(std::span<const double> v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

struct Standardized {
  Eigen::MatrixXd x;
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;  // population sd; 0 marks a constant column
  Eigen::VectorXd y;      // centered
  double y_mean = 0.0;
};

Standardized standardize(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  Standardized s;
  const double n = static_cast<double>(x.rows());
  s.mean = x.colwise().mean().transpose();
  s.scale.resize(x.cols());
  s.x = x;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    s.x.col(j).array() -= s.mean(j);
    const double sd = std::sqrt(s.x.col(j).squaredNorm() / n);
    s.scale(j) = sd > 1e-12 ? sd : 0.0;
    if (s.scale(j) > 0.0) {
      s.x.col(j) /= sd;
    } else {
      s.x.col(j).setZero();
    }
  }
  s.y_mean = y.mean();
  s.y = y.array() - s.y_mean;
  return s;
}

double soft_threshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

// Coordinate descent on standardized data; updates `beta` and `resid` in place.
void coordinate_descent(const Standardized& s, double lambda, Eigen::VectorXd& beta,
                        Eigen::VectorXd& resid, const LassoOptions& opts) {
  const double n = static_cast<double>(s.x.rows());
  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < s.x.cols(); ++j) {
      if (s.scale(j) == 0.0) continue;
      const double old = beta(j);
      const double z = s.x.col(j).dot(resid) / n + old;
      const double updated = soft_threshold(z, lambda);
      if (updated != old) {
        resid -= (updated - old) * s.x.col(j);
        beta(j) = updated;
        max_change = std::max(max_change, std::abs(updated - old));
      }
    }
    if (max_change < opts.tolerance) break;
  }
}

LassoFit unstandardize(const Standardized& s, const Eigen::VectorXd& beta) {
  LassoFit f;
  f.coefficients = Eigen::VectorXd::Zero(beta.size());
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    if (s.scale(j) > 0.0) f.coefficients(j) = beta(j) / s.scale(j);
  }
  f.intercept = s.y_mean - f.coefficients.dot(s.mean);
  return f;
}

std::vector<double> lambda_grid(double lambda_max, const LassoOptions& opts) {
  std::vector<double> grid(static_cast<std::size_t>(opts.n_lambda));
  if (opts.n_lambda == 1) {
    grid[0] = lambda_max;
    return grid;
  }
  const double log_ratio = std::log(opts.lambda_min_ratio);
  for (int i = 0; i < opts.n_lambda; ++i) {
    grid[static_cast<std::size_t>(i)] =
        lambda_max * std::exp(log_ratio * i / static_cast<double>(opts.n_lambda - 1));
  }
  return grid;
}

double bic_for(const Eigen::MatrixXd& coded, const Eigen::VectorXd& y, std::span<const Term> terms,
               double y_sq) {
  const auto x = model_matrix(coded, terms);
  std::vector<std::string> names;
  for (const auto& t : terms) names.push_back(t.name);
  double rss = least_squares(x, y, names).rss;
  if (rss <= kExactFitRelTol * y_sq) rss = 0.0;
  return information_criteria(rss, static_cast<int>(y.size()), static_cast<int>(terms.size())).bic;
}

}  // namespace

std::string to_string(ScreeningMethod method) {
  return method == ScreeningMethod::stepwise ? "stepwise" : "lasso";
}

std::vector<std::string> ScreeningResult::selected_names() const {
  std::vector<std::string> names;
  for (const auto& e : selected) names.push_back(e.term);
  return names;
}

ScreeningResult stepwise_bic(const Design& design, std::span<const double> y_in,
                             std::optional<std::vector<Term>> scope) {
  if (y_in.size() != design.size()) throw InvalidArgument("response length != number of runs");
  if (design.size() <= 2) throw InvalidArgument("stepwise selection needs n > 2");
  const auto names = design.factor_names();
  std::vector<Term> candidates;
  if (scope) {
    for (const auto& t : *scope) {
      if (t.kind != Term::Kind::intercept) candidates.push_back(t);
    }
  } else {
    for (int i = 0; i < static_cast<int>(names.size()); ++i) {
      candidates.push_back(Term{Term::Kind::linear, i, -1, names[static_cast<std::size_t>(i)]});
    }
  }
  const auto coded = design.coded_matrix();
  const Eigen::VectorXd y = to_vector(y_in);
  const double y_sq = y.squaredNorm();
  const int n = static_cast<int>(y.size());
  const Term intercept{Term::Kind::intercept, -1, -1, "(Intercept)"};

  auto terms_for = [&](const std::vector<bool>& in) {
    std::vector<Term> t{intercept};
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (in[c]) t.push_back(candidates[c]);
    }
    return t;
  };
  auto labels_for = [&](const std::vector<bool>& in) {
    std::vector<std::string> l;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (in[c]) l.push_back(candidates[c].name);
    }
    return l;
  };

  ScreeningResult result;
  result.method = ScreeningMethod::stepwise;
  std::vector<bool> in(candidates.size(), false);
  double current = bic_for(coded, y, terms_for(in), y_sq);
  result.steps.push_back(StepwiseStep{"<start>", current, {}});

  auto score = [&](const std::vector<bool>& trial) -> std::optional<double> {
    const auto terms = terms_for(trial);
    if (static_cast<int>(terms.size()) >= n) return std::nullopt;
    try {
      return bic_for(coded, y, terms, y_sq);
    } catch (const RankDeficientError&) {
      return std::nullopt;
    }
  };

  for (std::size_t iter = 0; iter < 4 * candidates.size() + 4; ++iter) {
    double best = current;
    std::string best_label;
    std::vector<bool> best_in;
    auto consider = [&](const std::vector<bool>& trial, const std::string& label) {
      const auto bic = score(trial);
      if (!bic) return;
      const bool better = *bic < best;
      const bool tie = !best_in.empty() && *bic == best && label < best_label;
      if (better || tie) {
        best = *bic;
        best_label = label;
        best_in = trial;
      }
    };
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      auto trial = in;
      trial[c] = !trial[c];
      consider(trial, (in[c] ? "-" : "+") + candidates[c].name);
    }
    // Stalled: a pair of terms can lower BIC when neither does alone, which
    // happens as the model approaches saturation.
    if (best_in.empty()) {
      for (std::size_t a = 0; a < candidates.size(); ++a) {
        for (std::size_t b = a + 1; b < candidates.size(); ++b) {
          if (in[a] || in[b]) continue;
          auto trial = in;
          trial[a] = trial[b] = true;
          consider(trial, "+" + candidates[a].name + "+" + candidates[b].name);
        }
      }
    }
    if (best_in.empty() || !(best < current)) break;
    in = best_in;
    current = best;
    result.steps.push_back(StepwiseStep{best_label, current, labels_for(in)});
  }

  const auto final_model = fit_terms(design, y_in, terms_for(in));
  result.intercept = final_model.coefficients(0);
  for (std::size_t c = 1; c < final_model.terms.size(); ++c) {
    const auto idx = static_cast<Eigen::Index>(c);
    std::optional<double> p;
    if (std::isfinite(final_model.coef_pvalues(idx))) p = final_model.coef_pvalues(idx);
    result.selected.push_back(
        ScreeningEstimate{final_model.terms[c].name, final_model.coefficients(idx), p});
  }
  return result;
}

double lasso_lambda_max(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  const auto s = standardize(x, y);
  const double n = static_cast<double>(x.rows());
  return (s.x.transpose() * s.y).cwiseAbs().maxCoeff() / n;
}

std::vector<LassoFit> lasso_path(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                 std::span<const double> lambdas, const LassoOptions& opts) {
  if (x.rows() != y.size()) throw InvalidArgument("lasso: x and y differ in length");
  const auto s = standardize(x, y);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(x.cols());
  Eigen::VectorXd resid = s.y;
  std::vector<LassoFit> out;
  out.reserve(lambdas.size());
  for (double lambda : lambdas) {
    if (lambda < 0.0) throw InvalidArgument("lasso: negative lambda");
    coordinate_descent(s, lambda, beta, resid, opts);
    out.push_back(unstandardize(s, beta));
  }
  return out;
}

std::vector<int> cv_folds(std::size_t n, int nfolds, std::uint64_t seed) {
  if (nfolds < 2 || static_cast<std::size_t>(nfolds) > n) {
    throw InvalidArgument("cross-validation needs 2 <= nfolds <= n");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  SplitMix64 rng(substream_seed(seed, n * 1000u + static_cast<std::size_t>(nfolds)));
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
  std::vector<int> folds(n);
  for (std::size_t i = 0; i < n; ++i) folds[perm[i]] = static_cast<int>(i % static_cast<std::size_t>(nfolds));
  return folds;
}

ScreeningResult lasso_cv(const Design& design, std::span<const double> y_in, int nfolds,
                         const LassoOptions& opts) {
  const std::size_t n = design.size();
  if (y_in.size() != n) throw InvalidArgument("response length != number of runs");
  if (nfolds < 2 || static_cast<std::size_t>(nfolds) > n) {
    throw InvalidArgument("lasso_cv needs n >= nfolds >= 2");
  }
  const Eigen::MatrixXd x = design.coded_matrix();
  const Eigen::VectorXd y = to_vector(y_in);
  const auto names = design.factor_names();

  ScreeningResult result;
  result.method = ScreeningMethod::lasso;
  const double lmax = lasso_lambda_max(x, y);
  if (!(lmax > 0.0)) {
    result.intercept = y.mean();
    result.warnings.push_back("response is constant or uncorrelated with every factor");
    result.coefficient_path = Eigen::MatrixXd::Zero(0, x.cols());
    return result;
  }
  const auto grid = lambda_grid(lmax, opts);
  const auto full = lasso_path(x, y, grid, opts);
  result.coefficient_path.resize(static_cast<Eigen::Index>(grid.size()), x.cols());
  for (std::size_t l = 0; l < grid.size(); ++l) {
    result.coefficient_path.row(static_cast<Eigen::Index>(l)) = full[l].coefficients.transpose();
  }

  const auto folds = cv_folds(n, nfolds, opts.fold_seed);
  std::vector<std::vector<double>> fold_mse;  // fold x lambda
  std::vector<double> fold_weight;
  for (int f = 0; f < nfolds; ++f) {
    std::vector<Eigen::Index> train, test;
    for (std::size_t i = 0; i < n; ++i) {
      (folds[i] == f ? test : train).push_back(static_cast<Eigen::Index>(i));
    }
    const Eigen::MatrixXd x_train = x(train, Eigen::all);
    const Eigen::VectorXd y_train = y(train);
    if ((y_train.array() - y_train.mean()).abs().maxCoeff() <= 1e-12 * (1.0 + y_train.cwiseAbs().maxCoeff())) {
      result.warnings.push_back("fold " + std::to_string(f + 1) +
                                " has a constant training response; excluded from CV error");
      continue;
    }
    const auto fits = lasso_path(x_train, y_train, grid, opts);
    std::vector<double> mse(grid.size());
    for (std::size_t l = 0; l < grid.size(); ++l) {
      double sse = 0.0;
      for (auto i : test) {
        const double pred = fits[l].intercept + x.row(i).dot(fits[l].coefficients);
        sse += (y(i) - pred) * (y(i) - pred);
      }
      mse[l] = sse / static_cast<double>(test.size());
    }
    fold_mse.push_back(std::move(mse));
    fold_weight.push_back(static_cast<double>(test.size()));
  }
  if (fold_mse.empty()) throw InvalidInput("lasso_cv: every fold was excluded");

  const double wsum = std::accumulate(fold_weight.begin(), fold_weight.end(), 0.0);
  const double used = static_cast<double>(fold_mse.size());
  std::size_t best = 0;
  for (std::size_t l = 0; l < grid.size(); ++l) {
    LassoPathPoint pt;
    pt.lambda = grid[l];
    for (std::size_t f = 0; f < fold_mse.size(); ++f) pt.cv_mean += fold_weight[f] * fold_mse[f][l];
    pt.cv_mean /= wsum;
    double var = 0.0;
    for (std::size_t f = 0; f < fold_mse.size(); ++f) {
      var += fold_weight[f] * (fold_mse[f][l] - pt.cv_mean) * (fold_mse[f][l] - pt.cv_mean);
    }
    pt.cv_sd = used > 1.0 ? std::sqrt(var / wsum / (used - 1.0)) : 0.0;
    pt.nonzero = static_cast<int>((full[l].coefficients.array() != 0.0).count());
    result.lambda_path.push_back(pt);
    if (pt.cv_mean < result.lambda_path[best].cv_mean) best = l;
  }
  result.lambda_min = grid[best];
  const double threshold = result.lambda_path[best].cv_mean + result.lambda_path[best].cv_sd;
  std::size_t chosen = best;
  for (std::size_t l = 0; l < grid.size(); ++l) {
    if (result.lambda_path[l].cv_mean <= threshold) {
      chosen = l;  // grid is decreasing, so the first hit is the largest lambda
      break;
    }
  }
  result.lambda_1se = grid[chosen];
  const auto& chosen_fit = full[chosen];
  result.intercept = chosen_fit.intercept;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    if (chosen_fit.coefficients(j) != 0.0) {
      result.selected.push_back(
          ScreeningEstimate{names[static_cast<std::size_t>(j)], chosen_fit.coefficients(j), std::nullopt});
    }
  }
  return result;
}

std::vector<std::string> agreed_factors(const Design& design, const ScreeningResult& a,
                                        const ScreeningResult& b) {
  const auto na = a.selected_names();
  const auto nb = b.selected_names();
  const std::set<std::string> sa(na.begin(), na.end()), sb(nb.begin(), nb.end());
  std::vector<std::string> out;
  for (const auto& f : design.factors) {
    if (sa.contains(f.name) && sb.contains(f.name)) out.push_back(f.name);
  }
  return out;
}

std::map<std::string, double> assign_inactive(const InactiveFactorPolicy& policy,
                                              std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::map<std::string, double> out;
  for (const auto& e : policy.entries) {
    if (!(e.sd >= 0.0)) throw InvalidArgument("inactive factor sd must be >= 0");
    double v = e.mean;
    if (e.sd > 0.0) v += e.sd * rng.normal();
    out[e.factor.name] = std::clamp(v, e.factor.low, e.factor.high);
  }
  return out;
}

}  // namespace rsm
