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

#include "rsm/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "rsm/errors.hpp"

namespace rsm {
namespace {

Json vector_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number_json(v(i)));
  return a;
}

Json vector_json(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number_json(x));
  return a;
}

Json matrix_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vector_json(Eigen::VectorXd(m.row(i).transpose())));
  return rows;
}

Json row_json(const AnovaRow& r) {
  Json j{{"source", r.source}, {"df", r.df}, {"ss", number_json(r.ss)}, {"ms", number_json(r.ms)}};
  j["f"] = r.f ? number_json(*r.f) : Json(nullptr);
  j["p"] = r.p ? number_json(*r.p) : Json(nullptr);
  return j;
}

Term term_from_name(const std::vector<std::string>& names, const std::string& name) {
  auto index = [&](const std::string& f) {
    auto it = std::find(names.begin(), names.end(), f);
    if (it == names.end()) throw SchemaError("model term '" + name + "' uses unknown factor '" + f + "'");
    return static_cast<int>(it - names.begin());
  };
  Term t;
  t.name = name;
  if (name == "(Intercept)") {
    t.kind = Term::Kind::intercept;
  } else if (auto c = name.find(':'); c != std::string::npos) {
    t.kind = Term::Kind::interaction;
    t.i = index(name.substr(0, c));
    t.j = index(name.substr(c + 1));
  } else if (name.size() > 2 && name.ends_with("^2")) {
    t.kind = Term::Kind::quadratic;
    t.i = t.j = index(name.substr(0, name.size() - 2));
  } else {
    t.kind = Term::Kind::linear;
    t.i = index(name);
  }
  return t;
}

std::string fmt(double v, int precision = 6) {
  if (!std::isfinite(v)) return std::isnan(v) ? "NA" : (v > 0 ? "Inf" : "-Inf");
  std::ostringstream o;
  o << std::setprecision(precision) << v;
  return o.str();
}

std::string fmt_p(const std::optional<double>& p) {
  if (!p) return "";
  if (*p < 1e-4) return "<1e-04";
  std::ostringstream o;
  o << std::fixed << std::setprecision(4) << *p;
  return o.str();
}

}  // namespace

Json number_json(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double json_number(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!j.is_number()) throw SchemaError("expected a number, got " + j.dump());
  return j.get<double>();
}

Json factors_to_json(const std::vector<Factor>& factors) {
  Json a = Json::array();
  for (const auto& f : factors) {
    a.push_back({{"name", f.name}, {"low", f.low}, {"high", f.high}, {"units", f.units}});
  }
  return a;
}

std::vector<Factor> factors_from_json(const Json& j) {
  if (!j.is_array()) throw SchemaError("'factors' must be an array");
  std::vector<Factor> out;
  for (const auto& f : j) {
    if (!f.contains("name") || !f.contains("low") || !f.contains("high")) {
      throw SchemaError("factor entries need 'name', 'low' and 'high'");
    }
    out.push_back(Factor{f.at("name").get<std::string>(), f.at("low").get<double>(), f.at("high").get<double>(),
                         f.value("units", std::string())});
  }
  validate_factors(out);
  return out;
}

Json design_to_json(const Design& design) {
  Json runs = Json::array();
  for (const auto& r : design.runs) {
    runs.push_back({{"run_id", r.run_id}, {"pt_type", to_string(r.type)}, {"coded", vector_json(r.coded)},
                    {"natural", vector_json(r.natural)}});
  }
  return {{"factors", factors_to_json(design.factors)}, {"runs", runs}};
}

Design design_from_json(const Json& j) {
  Design d;
  d.factors = factors_from_json(j.at("factors"));
  for (const auto& r : j.at("runs")) {
    DesignPoint p;
    p.run_id = r.at("run_id").get<int>();
    p.type = point_type_from_string(r.at("pt_type").get<std::string>());
    for (const auto& c : r.at("coded")) p.coded.push_back(json_number(c));
    for (const auto& c : r.at("natural")) p.natural.push_back(json_number(c));
    if (p.coded.size() != d.dimension() || p.natural.size() != d.dimension()) {
      throw SchemaError("design run " + std::to_string(p.run_id) + " has the wrong number of coordinates");
    }
    d.runs.push_back(std::move(p));
  }
  return d;
}

Json desirability_to_json(const DesirabilitySpec& s) {
  Json j{{"goal", to_string(s.goal)}, {"target", s.target}};
  switch (s.goal) {
    case Goal::minimize: j["upper"] = s.upper; j["weight"] = s.weight; break;
    case Goal::maximize: j["lower"] = s.lower; j["weight"] = s.weight; break;
    case Goal::target:
      j["lower"] = s.lower;
      j["upper"] = s.upper;
      j["weight_low"] = s.weight_low;
      j["weight_high"] = s.weight_high;
      break;
  }
  return j;
}

DesirabilitySpec desirability_from_json(const Json& j) {
  DesirabilitySpec s;
  s.goal = goal_from_string(j.at("goal").get<std::string>());
  s.target = j.at("target").get<double>();
  s.upper = j.value("upper", 0.0);
  s.lower = j.value("lower", 0.0);
  s.weight = j.value("weight", 1.0);
  s.weight_low = j.value("weight_low", 1.0);
  s.weight_high = j.value("weight_high", 1.0);
  s.validate();
  return s;
}

Json anova_to_json(const AnovaTable& t) {
  Json groups = Json::array();
  for (const auto& g : t.groups) groups.push_back(row_json(g));
  Json j{{"terms", groups}, {"regression", row_json(t.regression)}, {"residual", row_json(t.residual)},
         {"total", row_json(t.total)}};
  j["lack_of_fit"] = t.lack_of_fit ? row_json(*t.lack_of_fit) : Json(nullptr);
  j["pure_error"] = t.pure_error ? row_json(*t.pure_error) : Json(nullptr);
  if (!t.lof_note.empty()) j["lack_of_fit_note"] = t.lof_note;
  return j;
}

Json model_to_json(const FittedModel& m) {
  Json coefs = Json::array();
  for (std::size_t i = 0; i < m.terms.size(); ++i) {
    const auto e = static_cast<Eigen::Index>(i);
    coefs.push_back({{"term", m.terms[i].name},
                     {"estimate", number_json(m.coefficients(e))},
                     {"std_error", number_json(m.std_errors(e))},
                     {"t", number_json(m.t_values(e))},
                     {"p", number_json(m.coef_pvalues(e))}});
  }
  Json terms = Json::array();
  for (const auto& t : m.terms) terms.push_back(t.name);
  return {{"order", m.order == ModelOrder::first ? "fo" : "so"},
          {"factors", factors_to_json(m.design.factors)},
          {"design", design_to_json(m.design)},
          {"y", vector_json(m.y)},
          {"terms", terms},
          {"coefficients", coefs},
          {"fitted", vector_json(m.fitted)},
          {"residuals", vector_json(m.residuals)},
          {"n", m.n()},
          {"rss", number_json(m.rss)},
          {"sigma2", number_json(m.sigma2)},
          {"r_squared", number_json(m.r_squared)},
          {"adj_r_squared", number_json(m.adj_r_squared)},
          {"f_statistic", number_json(m.f_statistic)},
          {"f_pvalue", number_json(m.f_pvalue)},
          {"df_model", m.df_model},
          {"df_residual", m.df_residual},
          {"aic", number_json(m.aic)},
          {"bic", number_json(m.bic)},
          {"exact_fit", m.exact_fit},
          {"lack_of_fit_p", m.lof_pvalue ? number_json(*m.lof_pvalue) : Json(nullptr)},
          {"anova", anova_to_json(anova(m))}};
}

FittedModel model_from_json(const Json& j) {
  const Design design = design_from_json(j.at("design"));
  std::vector<double> y;
  for (const auto& v : j.at("y")) y.push_back(json_number(v));
  const auto names = design.factor_names();
  std::vector<Term> terms;
  for (const auto& t : j.at("terms")) terms.push_back(term_from_name(names, t.get<std::string>()));
  FittedModel m = fit_terms(design, y, terms);
  m.order = model_order_from_string(j.value("order", std::string("fo")));
  return m;
}

Json screening_to_json(const ScreeningResult& r) {
  Json sel = Json::array();
  for (const auto& e : r.selected) {
    sel.push_back({{"term", e.term}, {"estimate", number_json(e.estimate)},
                   {"p", e.p_value ? number_json(*e.p_value) : Json(nullptr)}});
  }
  Json j{{"method", to_string(r.method)}, {"intercept", number_json(r.intercept)}, {"selected", sel},
         {"warnings", r.warnings}};
  if (!r.steps.empty()) {
    Json steps = Json::array();
    for (const auto& s : r.steps) steps.push_back({{"move", s.move}, {"bic", number_json(s.bic)}, {"terms", s.terms}});
    j["steps"] = steps;
  }
  if (!r.lambda_path.empty()) {
    Json path = Json::array();
    for (const auto& p : r.lambda_path) {
      path.push_back({{"lambda", number_json(p.lambda)}, {"cv_mean", number_json(p.cv_mean)},
                      {"cv_sd", number_json(p.cv_sd)}, {"nonzero", p.nonzero}});
    }
    j["lambda_path"] = path;
    j["lambda_min"] = number_json(r.lambda_min);
    j["lambda_1se"] = number_json(r.lambda_1se);
  }
  return j;
}

Json canonical_to_json(const CanonicalAnalysis& a, const std::vector<std::string>& names) {
  return {{"factors", names},
          {"stationary_coded", vector_json(a.stationary_coded)},
          {"stationary_natural", vector_json(a.stationary_natural)},
          {"y_hat", number_json(a.y_hat_s)},
          {"eigenvalues", vector_json(a.eigenvalues)},
          {"eigenvectors", matrix_json(a.eigenvectors)},
          {"classification", to_string(a.classification)},
          {"in_region", a.in_region},
          {"region_radius", number_json(a.region_radius)},
          {"ridge_threshold", number_json(a.ridge_threshold)}};
}

Json path_to_json(const AscentPath& p) {
  Json pts = Json::array();
  for (std::size_t i = 0; i < p.points.size(); ++i) {
    pts.push_back({{"distance", p.distances[i]}, {"coded", vector_json(p.points[i].coded)},
                   {"natural", vector_json(p.points[i].natural)}});
  }
  return {{"factors", factors_to_json(p.factors)}, {"direction", vector_json(p.direction)}, {"points", pts}};
}

Json bootstrap_to_json(const BootstrapResult& r, const std::vector<std::string>& names) {
  Json ci = Json::array();
  for (std::size_t j = 0; j < r.ci.size(); ++j) {
    ci.push_back({{"factor", j < names.size() ? names[j] : std::string()},
                  {"low", number_json(r.ci[j].low)},
                  {"high", number_json(r.ci[j].high)}});
  }
  return {{"replications", r.replications}, {"failed", r.n_failed}, {"level", r.level},
          {"point_estimate", vector_json(r.point_estimate)}, {"ci", ci}};
}

std::string model_text(const FittedModel& m) {
  std::ostringstream o;
  o << to_string(m.order) << " model, n = " << m.n() << "\n\n";
  o << std::left << std::setw(16) << "term" << std::right << std::setw(14) << "estimate" << std::setw(14)
    << "std.error" << std::setw(10) << "t" << std::setw(10) << "p" << "\n";
  for (std::size_t i = 0; i < m.terms.size(); ++i) {
    const auto e = static_cast<Eigen::Index>(i);
    o << std::left << std::setw(16) << m.terms[i].name << std::right << std::setw(14) << fmt(m.coefficients(e))
      << std::setw(14) << fmt(m.std_errors(e)) << std::setw(10) << fmt(m.t_values(e), 4) << std::setw(10)
      << fmt_p(m.coef_pvalues(e)) << "\n";
  }
  const auto t = anova(m);
  o << "\n" << std::left << std::setw(16) << "source" << std::right << std::setw(5) << "df" << std::setw(14) << "SS"
    << std::setw(14) << "MS" << std::setw(10) << "F" << std::setw(10) << "p" << "\n";
  auto row = [&](const AnovaRow& r) {
    o << std::left << std::setw(16) << r.source << std::right << std::setw(5) << r.df << std::setw(14) << fmt(r.ss)
      << std::setw(14) << fmt(r.ms) << std::setw(10) << (r.f ? fmt(*r.f, 4) : "") << std::setw(10) << fmt_p(r.p)
      << "\n";
  };
  for (const auto& g : t.groups) row(g);
  row(t.residual);
  if (t.lack_of_fit) row(*t.lack_of_fit);
  if (t.pure_error) row(*t.pure_error);
  row(t.total);
  if (!t.lof_note.empty()) o << "note: " << t.lof_note << "\n";
  o << "\nR^2 = " << fmt(m.r_squared, 4) << ", adj R^2 = " << fmt(m.adj_r_squared, 4) << ", F = "
    << fmt(m.f_statistic, 4) << " on " << m.df_model << " and " << m.df_residual << " df, p = "
    << fmt_p(m.f_pvalue) << "\n";
  o << "AIC = " << fmt(m.aic) << ", BIC = " << fmt(m.bic) << "\n";
  return o.str();
}

std::string screening_text(const ScreeningResult& r) {
  std::ostringstream o;
  o << to_string(r.method) << " screening\n";
  for (const auto& e : r.selected) {
    o << "  " << std::left << std::setw(16) << e.term << std::right << std::setw(14) << fmt(e.estimate);
    if (e.p_value) o << std::setw(10) << fmt_p(e.p_value);
    o << "\n";
  }
  if (r.selected.empty()) o << "  (no factor selected)\n";
  if (!r.lambda_path.empty()) {
    o << "lambda.min = " << fmt(r.lambda_min) << ", lambda.1se = " << fmt(r.lambda_1se) << "\n";
  }
  for (const auto& w : r.warnings) o << "warning: " << w << "\n";
  return o.str();
}

std::string canonical_text(const CanonicalAnalysis& a, const std::vector<std::string>& names) {
  std::ostringstream o;
  o << "stationary point (" << to_string(a.classification) << (a.in_region ? "" : ", outside design region")
    << "), predicted response " << fmt(a.y_hat_s) << "\n";
  for (std::size_t i = 0; i < a.stationary_coded.size(); ++i) {
    o << "  " << std::left << std::setw(16) << (i < names.size() ? names[i] : "") << std::right << std::setw(14)
      << fmt(a.stationary_natural[i]) << "  (coded " << fmt(a.stationary_coded[i]) << ")\n";
  }
  o << "eigenvalues:";
  for (Eigen::Index i = 0; i < a.eigenvalues.size(); ++i) o << " " << fmt(a.eigenvalues(i));
  o << "\n";
  return o.str();
}

std::string bootstrap_text(const BootstrapResult& r, const std::vector<std::string>& names) {
  std::ostringstream o;
  o << "bootstrap: " << r.replications << " replications, " << r.n_failed << " failed\n";
  for (std::size_t j = 0; j < r.ci.size(); ++j) {
    o << "  " << std::left << std::setw(16) << (j < names.size() ? names[j] : "") << std::right
      << std::setw(14) << (j < r.point_estimate.size() ? fmt(r.point_estimate[j]) : "") << "  "
      << fmt(100 * r.level, 3) << "% CI [" << fmt(r.ci[j].low) << ", " << fmt(r.ci[j].high) << "]\n";
  }
  return o.str();
}

}  // namespace rsm
