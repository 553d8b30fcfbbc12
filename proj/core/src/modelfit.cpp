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

#include "rsm/modelfit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <Eigen/QR>

#include "rsm/errors.hpp"
#include "rsm/special.hpp"

namespace rsm {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Eigen::VectorXd to_vector(std::span<const double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

std::vector<std::string> names_of(std::span<const Term> terms) {
  std::vector<std::string> names;
  for (const auto& t : terms) names.push_back(t.name);
  return names;
}

bool is_second_order(std::span<const Term> terms) {
  return std::any_of(terms.begin(), terms.end(), [](const Term& t) {
    return t.kind == Term::Kind::interaction || t.kind == Term::Kind::quadratic;
  });
}

std::vector<Term> terms_of_kind(std::span<const Term> terms,
                                std::initializer_list<Term::Kind> kinds) {
  std::vector<Term> out;
  for (const auto& t : terms) {
    if (std::find(kinds.begin(), kinds.end(), t.kind) != kinds.end()) out.push_back(t);
  }
  return out;
}

double fit_rss(const Eigen::MatrixXd& coded, const Eigen::VectorXd& y, std::span<const Term> terms) {
  const auto x = model_matrix(coded, terms);
  return least_squares(x, y, names_of(terms)).rss;
}

bool negligible(double ss, double scale) { return ss <= kExactFitRelTol * scale; }

}  // namespace

std::string to_string(ModelOrder order) { return order == ModelOrder::first ? "FO" : "SO"; }

ModelOrder model_order_from_string(const std::string& s) {
  if (s == "fo" || s == "FO" || s == "first") return ModelOrder::first;
  if (s == "so" || s == "SO" || s == "second") return ModelOrder::second;
  throw InvalidArgument("unknown model order '" + s + "' (expected fo or so)");
}

double Term::evaluate(std::span<const double> coded) const {
  switch (kind) {
    case Kind::intercept: return 1.0;
    case Kind::linear: return coded[static_cast<std::size_t>(i)];
    case Kind::interaction:
      return coded[static_cast<std::size_t>(i)] * coded[static_cast<std::size_t>(j)];
    case Kind::quadratic: {
      const double v = coded[static_cast<std::size_t>(i)];
      return v * v;
    }
  }
  return 0.0;
}

std::vector<Term> model_terms(std::span<const std::string> names, ModelOrder order) {
  const int k = static_cast<int>(names.size());
  std::vector<Term> terms;
  terms.push_back(Term{Term::Kind::intercept, -1, -1, "(Intercept)"});
  for (int i = 0; i < k; ++i) terms.push_back(Term{Term::Kind::linear, i, -1, names[i]});
  if (order == ModelOrder::second) {
    for (int i = 0; i < k; ++i) {
      for (int j = i + 1; j < k; ++j) {
        terms.push_back(Term{Term::Kind::interaction, i, j, names[i] + ":" + names[j]});
      }
    }
    for (int i = 0; i < k; ++i) {
      terms.push_back(Term{Term::Kind::quadratic, i, i, names[i] + "^2"});
    }
  }
  return terms;
}

std::vector<Term> linear_terms(std::span<const std::string> names, std::span<const int> indices) {
  std::vector<Term> terms;
  terms.push_back(Term{Term::Kind::intercept, -1, -1, "(Intercept)"});
  for (int i : indices) {
    terms.push_back(Term{Term::Kind::linear, i, -1, names[static_cast<std::size_t>(i)]});
  }
  return terms;
}

Eigen::MatrixXd model_matrix(const Eigen::MatrixXd& coded, std::span<const Term> terms) {
  Eigen::MatrixXd x(coded.rows(), static_cast<Eigen::Index>(terms.size()));
  for (Eigen::Index r = 0; r < coded.rows(); ++r) {
    for (std::size_t c = 0; c < terms.size(); ++c) {
      const auto& t = terms[c];
      double v = 1.0;
      switch (t.kind) {
        case Term::Kind::intercept: v = 1.0; break;
        case Term::Kind::linear: v = coded(r, t.i); break;
        case Term::Kind::interaction: v = coded(r, t.i) * coded(r, t.j); break;
        case Term::Kind::quadratic: v = coded(r, t.i) * coded(r, t.i); break;
      }
      x(r, static_cast<Eigen::Index>(c)) = v;
    }
  }
  return x;
}

LeastSquares least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           std::span<const std::string> term_names, bool with_covariance) {
  if (x.rows() != y.size()) throw InvalidArgument("model matrix and response differ in length");
  const Eigen::Index p = x.cols();
  if (x.rows() < p) {
    throw InvalidArgument("fewer runs (" + std::to_string(x.rows()) + ") than model terms (" +
                          std::to_string(p) + ")");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < p) {
    std::vector<std::string> collinear;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index c = qr.rank(); c < p; ++c) {
      const auto col = perm(c);
      collinear.push_back(static_cast<std::size_t>(col) < term_names.size()
                              ? term_names[static_cast<std::size_t>(col)]
                              : "column " + std::to_string(col));
    }
    std::sort(collinear.begin(), collinear.end());
    std::string msg = "rank-deficient model matrix (rank " + std::to_string(qr.rank()) + " of " +
                      std::to_string(p) + "); collinear terms:";
    for (const auto& c : collinear) msg += " " + c;
    throw RankDeficientError(msg, std::move(collinear));
  }
  LeastSquares out;
  out.coefficients = qr.solve(y);
  out.fitted = x * out.coefficients;
  out.residuals = y - out.fitted;
  out.rss = out.residuals.squaredNorm();
  if (with_covariance) {
    const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv =
        r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
    const Eigen::MatrixXd inner = r_inv * r_inv.transpose();
    const auto& perm = qr.colsPermutation();
    out.xtx_inverse = perm * inner * perm.transpose();
  }
  return out;
}

InformationCriteria information_criteria(double rss, int n, int n_coefficients) {
  if (n <= n_coefficients) {
    throw InvalidArgument("information criteria need n > number of coefficients");
  }
  InformationCriteria ic;
  if (rss <= 0.0) {
    ic.aic = -std::numeric_limits<double>::infinity();
    ic.bic = ic.aic;
    ic.exact_fit = true;
    return ic;
  }
  const double dn = n;
  const double loglik_term = dn * std::log(2.0 * std::numbers::pi * rss / dn) + dn;
  ic.aic = loglik_term + 2.0 * (n_coefficients + 1);
  ic.bic = loglik_term + std::log(dn) * (n_coefficients + 1);
  return ic;
}

Eigen::VectorXd FittedModel::linear_coefficients() const {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(k());
  for (std::size_t c = 0; c < terms.size(); ++c) {
    if (terms[c].kind == Term::Kind::linear) b(terms[c].i) = coefficients(static_cast<Eigen::Index>(c));
  }
  return b;
}

Eigen::MatrixXd FittedModel::quadratic_matrix() const {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(k(), k());
  for (std::size_t c = 0; c < terms.size(); ++c) {
    const double v = coefficients(static_cast<Eigen::Index>(c));
    const auto& t = terms[c];
    if (t.kind == Term::Kind::quadratic) {
      b(t.i, t.i) = v;
    } else if (t.kind == Term::Kind::interaction) {
      b(t.i, t.j) = 0.5 * v;
      b(t.j, t.i) = 0.5 * v;
    }
  }
  return b;
}

double FittedModel::predict(std::span<const double> coded) const {
  if (static_cast<int>(coded.size()) != k()) throw InvalidArgument("predict: wrong dimension");
  double y_hat = 0.0;
  for (std::size_t c = 0; c < terms.size(); ++c) {
    y_hat += coefficients(static_cast<Eigen::Index>(c)) * terms[c].evaluate(coded);
  }
  return y_hat;
}

Eigen::VectorXd FittedModel::gradient(std::span<const double> coded) const {
  Eigen::Map<const Eigen::VectorXd> x(coded.data(), static_cast<Eigen::Index>(coded.size()));
  return linear_coefficients() + 2.0 * quadratic_matrix() * x;
}

double FittedModel::prediction_variance(std::span<const double> coded) const {
  Eigen::VectorXd row(static_cast<Eigen::Index>(terms.size()));
  for (std::size_t c = 0; c < terms.size(); ++c) row(static_cast<Eigen::Index>(c)) = terms[c].evaluate(coded);
  return row.dot(xtx_inverse * row);
}

FittedModel fit(const Design& design, std::span<const double> y, ModelOrder order) {
  const auto names = design.factor_names();
  return fit_terms(design, y, model_terms(names, order));
}

FittedModel fit_terms(const Design& design, std::span<const double> y_in, std::vector<Term> terms) {
  if (y_in.size() != design.size()) {
    throw InvalidArgument("response length " + std::to_string(y_in.size()) +
                          " != number of runs " + std::to_string(design.size()));
  }
  for (double v : y_in) {
    if (!std::isfinite(v)) throw InvalidInput("non-finite response value");
  }
  FittedModel m;
  m.order = is_second_order(terms) ? ModelOrder::second : ModelOrder::first;
  m.design = design;
  m.terms = std::move(terms);
  m.y = to_vector(y_in);

  const auto coded = design.coded_matrix();
  const auto x = model_matrix(coded, m.terms);
  auto ls = least_squares(x, m.y, names_of(m.terms), /*with_covariance=*/true);
  m.coefficients = std::move(ls.coefficients);
  m.fitted = std::move(ls.fitted);
  m.residuals = std::move(ls.residuals);
  m.xtx_inverse = std::move(ls.xtx_inverse);

  const int n = m.n();
  const int p = static_cast<int>(m.terms.size());
  const double y_sq = m.y.squaredNorm();
  m.exact_fit = negligible(ls.rss, y_sq);
  m.rss = m.exact_fit ? 0.0 : ls.rss;
  m.tss = (m.y.array() - m.y.mean()).square().sum();
  if (negligible(m.tss, y_sq)) m.tss = 0.0;
  m.df_model = p - 1;
  m.df_residual = n - p;
  m.sigma2 = m.df_residual > 0 ? m.rss / m.df_residual : kNaN;

  if (m.tss > 0.0) {
    m.r_squared = std::clamp(1.0 - m.rss / m.tss, 0.0, 1.0);
    m.adj_r_squared = m.df_residual > 0
                          ? 1.0 - (1.0 - m.r_squared) * (n - 1) / static_cast<double>(m.df_residual)
                          : kNaN;
  } else {
    m.r_squared = 0.0;
    m.adj_r_squared = 0.0;
  }

  const double ss_reg = std::max(0.0, m.tss - m.rss);
  if (m.df_model == 0 || m.df_residual == 0) {
    m.f_statistic = kNaN;
    m.f_pvalue = kNaN;
  } else if (m.rss == 0.0) {
    m.f_statistic = ss_reg > 0.0 ? std::numeric_limits<double>::infinity() : kNaN;
    m.f_pvalue = ss_reg > 0.0 ? 0.0 : 1.0;
  } else {
    m.f_statistic = (ss_reg / m.df_model) / m.sigma2;
    m.f_pvalue = special::f_upper_tail(m.f_statistic, m.df_model, m.df_residual);
  }

  m.std_errors.resize(p);
  m.t_values.resize(p);
  m.coef_pvalues.resize(p);
  for (int c = 0; c < p; ++c) {
    if (m.df_residual == 0) {
      m.std_errors(c) = m.t_values(c) = m.coef_pvalues(c) = kNaN;
      continue;
    }
    const double se = std::sqrt(std::max(0.0, m.sigma2 * m.xtx_inverse(c, c)));
    m.std_errors(c) = se;
    if (se > 0.0) {
      m.t_values(c) = m.coefficients(c) / se;
      m.coef_pvalues(c) = special::t_two_sided(m.t_values(c), m.df_residual);
    } else {
      const bool nonzero = std::abs(m.coefficients(c)) > 0.0;
      m.t_values(c) = nonzero ? std::copysign(std::numeric_limits<double>::infinity(), m.coefficients(c)) : kNaN;
      m.coef_pvalues(c) = nonzero ? 0.0 : 1.0;
    }
  }

  if (n > p) {
    const auto ic = information_criteria(m.rss, n, p);
    m.aic = ic.aic;
    m.bic = ic.bic;
  } else {
    m.aic = m.bic = kNaN;
  }

  const auto table = anova(m);
  if (table.lack_of_fit) m.lof_pvalue = table.lack_of_fit->p;
  return m;
}

std::vector<std::vector<int>> replicate_groups(const Eigen::MatrixXd& coded, double tol) {
  std::vector<std::vector<int>> groups;
  std::vector<bool> used(static_cast<std::size_t>(coded.rows()), false);
  for (Eigen::Index r = 0; r < coded.rows(); ++r) {
    if (used[static_cast<std::size_t>(r)]) continue;
    std::vector<int> g{static_cast<int>(r)};
    for (Eigen::Index s = r + 1; s < coded.rows(); ++s) {
      if (!used[static_cast<std::size_t>(s)] &&
          (coded.row(r) - coded.row(s)).cwiseAbs().maxCoeff() <= tol) {
        g.push_back(static_cast<int>(s));
        used[static_cast<std::size_t>(s)] = true;
      }
    }
    groups.push_back(std::move(g));
  }
  return groups;
}

AnovaTable anova(const FittedModel& model) {
  AnovaTable table;
  const auto coded = model.design.coded_matrix();
  const double y_sq = model.y.squaredNorm();
  const int n = model.n();

  // Sequential sums of squares: FO, then TWI, then PQ.
  std::vector<std::pair<std::string, std::vector<Term>>> blocks;
  const auto intercept = terms_of_kind(model.terms, {Term::Kind::intercept});
  const auto linear = terms_of_kind(model.terms, {Term::Kind::linear});
  const auto twi = terms_of_kind(model.terms, {Term::Kind::interaction});
  const auto pq = terms_of_kind(model.terms, {Term::Kind::quadratic});
  std::vector<Term> current = intercept;
  double prev_rss = model.tss;
  auto add_block = [&](const std::string& name, const std::vector<Term>& block) {
    if (block.empty()) return;
    current.insert(current.end(), block.begin(), block.end());
    double rss = fit_rss(coded, model.y, current);
    if (negligible(rss, y_sq)) rss = 0.0;
    AnovaRow row;
    row.source = name;
    row.df = static_cast<int>(block.size());
    row.ss = std::max(0.0, prev_rss - rss);
    row.ms = row.ss / row.df;
    table.groups.push_back(row);
    prev_rss = rss;
  };
  add_block("FO", linear);
  add_block("TWI", twi);
  add_block("PQ", pq);

  table.residual = AnovaRow{"Residuals", model.df_residual, model.rss,
                            model.df_residual > 0 ? model.rss / model.df_residual : kNaN, {}, {}};
  table.regression = AnovaRow{"Regression", model.df_model, std::max(0.0, model.tss - model.rss),
                              0.0, {}, {}};
  if (model.df_model > 0) table.regression.ms = table.regression.ss / model.df_model;
  table.total = AnovaRow{"Total", n - 1, model.tss, n > 1 ? model.tss / (n - 1) : kNaN, {}, {}};

  auto f_test = [&](AnovaRow& row) {
    if (model.df_residual <= 0 || row.df <= 0) return;
    if (model.rss == 0.0) {
      row.f = row.ss > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
      row.p = row.ss > 0.0 ? 0.0 : 1.0;
      return;
    }
    row.f = row.ms / table.residual.ms;
    row.p = special::f_upper_tail(*row.f, row.df, model.df_residual);
  };
  for (auto& g : table.groups) f_test(g);
  f_test(table.regression);

  // Lack of fit vs. pure error.
  int df_pe = 0;
  double ss_pe = 0.0;
  for (const auto& g : replicate_groups(coded)) {
    if (g.size() < 2) continue;
    double mean = 0.0;
    for (int r : g) mean += model.y(r);
    mean /= static_cast<double>(g.size());
    for (int r : g) ss_pe += (model.y(r) - mean) * (model.y(r) - mean);
    df_pe += static_cast<int>(g.size()) - 1;
  }
  const int df_lof = model.df_residual - df_pe;
  if (df_pe == 0) {
    table.lof_note = "no replicated runs; lack-of-fit test unavailable";
    return table;
  }
  if (df_lof <= 0) {
    table.lof_note = "no lack-of-fit degrees of freedom";
    return table;
  }
  if (negligible(ss_pe, y_sq)) ss_pe = 0.0;
  double ss_lof = std::max(0.0, model.rss - ss_pe);
  if (negligible(ss_lof, y_sq)) ss_lof = 0.0;
  AnovaRow pe{"Pure error", df_pe, ss_pe, ss_pe / df_pe, {}, {}};
  AnovaRow lof{"Lack of fit", df_lof, ss_lof, ss_lof / df_lof, {}, {}};
  if (ss_lof == 0.0) {
    lof.f = 0.0;
    lof.p = 1.0;
  } else if (ss_pe == 0.0) {
    table.lof_note = "pure error is zero (deterministic replicates); lack-of-fit F undefined";
  } else {
    lof.f = lof.ms / pe.ms;
    lof.p = special::f_upper_tail(*lof.f, df_lof, df_pe);
  }
  table.lack_of_fit = lof;
  table.pure_error = pe;
  return table;
}

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

Correlation spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("spearman: vectors differ in length");
  if (x.size() < 4) throw InvalidArgument("spearman needs n >= 4");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw InvalidArgument("spearman: non-finite value");
  }
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelationError("spearman: constant vector");
  Correlation c;
  c.n = static_cast<int>(x.size());
  c.rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  if (std::abs(c.rho) >= 1.0) {
    c.p_value = 0.0;
  } else {
    const double t = c.rho * std::sqrt((n - 2.0) / (1.0 - c.rho * c.rho));
    c.p_value = special::t_two_sided(t, n - 2.0);
  }
  return c;
}

}  // namespace rsm
