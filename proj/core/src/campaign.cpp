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

#include "rsm/campaign.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "rsm/ascent.hpp"
#include "rsm/canonical.hpp"
#include "rsm/csv.hpp"
#include "rsm/modelfit.hpp"
#include "rsm/random.hpp"
#include "rsm/screening.hpp"

namespace rsm {
namespace fs = std::filesystem;

namespace {

constexpr const char* kStateFormat = "rsm-campaign/1";

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string rule_name(ScreeningRule r) {
  switch (r) {
    case ScreeningRule::both: return "both";
    case ScreeningRule::either: return "either";
    case ScreeningRule::stepwise: return "stepwise";
    case ScreeningRule::lasso: return "lasso";
  }
  return "both";
}

ScreeningRule rule_from(const std::string& s) {
  if (s == "both") return ScreeningRule::both;
  if (s == "either") return ScreeningRule::either;
  if (s == "stepwise") return ScreeningRule::stepwise;
  if (s == "lasso") return ScreeningRule::lasso;
  throw InvalidArgument("unknown screening rule '" + s + "' (both|either|stepwise|lasso)");
}

std::string scaling_name(ResidualScaling s) { return s == ResidualScaling::none ? "none" : "df_corrected"; }

ResidualScaling scaling_from(const std::string& s) {
  if (s == "none") return ResidualScaling::none;
  if (s == "df_corrected") return ResidualScaling::df_corrected;
  throw InvalidArgument("unknown residual scaling '" + s + "' (none|df_corrected)");
}

Json number_map(const std::map<std::string, double>& m) {
  Json j = Json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

std::map<std::string, double> read_number_map(const Json& j, const std::string& what) {
  std::map<std::string, double> out;
  if (j.is_null()) return out;
  if (!j.is_object()) throw SchemaError("'" + what + "' must be an object of numbers");
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number()) throw SchemaError("'" + what + "." + k + "' must be a number");
    out[k] = v.get<double>();
  }
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << text;
}

void write_json_atomic(const fs::path& path, const Json& j) {
  const auto tmp = fs::path(path.string() + ".tmp");
  write_text(tmp, j.dump(2) + "\n");
  fs::rename(tmp, path);
}

SurrogateSpec surrogate_from_json(const Json& j) {
  SurrogateSpec s;
  const std::string preset = j.value("preset", std::string(j.contains("variables") ? "" : "housing_screening"));
  if (preset == "housing") {
    s = SurrogateSpec::housing();
  } else if (preset == "housing_screening") {
    s = SurrogateSpec::housing_screening();
  } else if (preset.empty()) {
    for (const auto& v : j.at("variables")) {
      SurrogateVariable var;
      var.name = v.at("name").get<std::string>();
      var.factors = v.at("factors").get<std::vector<std::string>>();
      var.center = v.value("center", 0.0);
      var.scale = v.value("scale", 1.0);
      s.variables.push_back(var);
    }
    const auto k = static_cast<Eigen::Index>(s.variables.size());
    for (const auto& r : j.at("responses")) {
      SurrogateResponse resp;
      resp.name = r.at("name").get<std::string>();
      resp.constant = r.value("constant", 0.0);
      resp.linear = Eigen::VectorXd::Zero(k);
      if (r.contains("linear")) {
        const auto lin = r.at("linear").get<std::vector<double>>();
        if (static_cast<Eigen::Index>(lin.size()) != k) throw SchemaError("surrogate linear term has the wrong size");
        for (Eigen::Index i = 0; i < k; ++i) resp.linear(i) = lin[static_cast<std::size_t>(i)];
      }
      resp.quadratic = Eigen::MatrixXd::Zero(k, k);
      if (r.contains("quadratic")) {
        const auto q = r.at("quadratic").get<std::vector<std::vector<double>>>();
        if (static_cast<Eigen::Index>(q.size()) != k) throw SchemaError("surrogate quadratic form has the wrong size");
        for (Eigen::Index a = 0; a < k; ++a) {
          if (static_cast<Eigen::Index>(q[static_cast<std::size_t>(a)].size()) != k) {
            throw SchemaError("surrogate quadratic form has the wrong size");
          }
          for (Eigen::Index b = 0; b < k; ++b) resp.quadratic(a, b) = q[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
        }
        resp.quadratic = (0.5 * (resp.quadratic + resp.quadratic.transpose())).eval();
      }
      s.responses.push_back(resp);
    }
  } else {
    throw InvalidArgument("unknown surrogate preset '" + preset + "' (housing|housing_screening)");
  }
  for (const auto& [name, sd] : read_number_map(j.value("noise_sd", Json()), "noise_sd")) {
    auto it = std::find_if(s.responses.begin(), s.responses.end(), [&](const auto& r) { return r.name == name; });
    if (it == s.responses.end()) throw InvalidArgument("noise_sd names unknown response '" + name + "'");
    it->noise_sd = sd;
  }
  s.noise_seed = j.value("noise_seed", std::uint64_t{0});
  if (j.contains("domain")) {
    for (const auto& [name, range] : j.at("domain").items()) {
      auto it = std::find_if(s.variables.begin(), s.variables.end(), [&](const auto& v) { return v.name == name; });
      if (it == s.variables.end()) throw InvalidArgument("domain names unknown surrogate variable '" + name + "'");
      if (!range.is_array() || range.size() != 2) throw SchemaError("domain entries are [min, max]");
      if (!range[0].is_null()) it->min = range[0].get<double>();
      if (!range[1].is_null()) it->max = range[1].get<double>();
    }
  }
  s.validate();
  return s;
}

// ---------------------------------------------------------------------------

struct StageData {
  Design design;               // over the stage factors
  Eigen::MatrixXd responses;   // runs x responses
  std::vector<std::optional<std::string>> rejected;
  std::vector<double> D;
};

class Runner {
 public:
  Runner(const CampaignConfig& config, Evaluator& evaluator, const CampaignOptions& options)
      : cfg_(config), eval_(evaluator), opt_(options) {
    for (const auto& r : cfg_.responses) response_names_.push_back(r.name);
    for (const auto& r : cfg_.responses) specs_.push_back(r.spec);
  }

  CampaignState run();

 private:
  struct Stop {};

  // Stage bookkeeping.
  Json& begin_stage(const std::string& id, const std::string& kind);
  void finish_stage(Json& stage);
  void save();

  StageData evaluate(const std::string& stage_id, const Design& design, bool allow_rejects, Json& stage);
  Design to_evaluation_design(const std::string& stage_id, const Design& design) const;
  std::vector<double> desirability_of(const StageData& data) const;
  void record_data(Json& stage, const StageData& data) const;
  void write_results_csv(const std::string& stem, const StageData& data) const;
  void write_model(const std::string& stem, const FittedModel& model) const;

  void screening_stage();
  void set_rsm_factors_without_screening();
  std::vector<Factor> rsm_factors_at(const std::vector<double>& center) const;

  const CampaignConfig& cfg_;
  Evaluator& eval_;
  const CampaignOptions& opt_;
  std::vector<std::string> response_names_;
  std::vector<DesirabilitySpec> specs_;

  Json doc_;
  std::map<std::string, Json> cache_;  // stage id -> recorded stage, from a resumed state
  int completed_ = 0;
  int next_doe_ = 0;

  // RSM factor layout.
  std::vector<std::string> rsm_names_;
  std::vector<std::vector<std::size_t>> members_;  // RSM factor -> indices into cfg_.factors
  std::vector<double> half_ranges_;
  InactiveFactorPolicy inactive_;
  bool mapped_ = false;  // evaluation design differs from the stage design
};

Json& Runner::begin_stage(const std::string& id, const std::string& kind) {
  Json stage{{"stage_id", id}, {"kind", kind}, {"status", "running"}, {"evaluations", 0}};
  doc_["stages"].push_back(stage);
  doc_["timestamps"][id] = {{"started", utc_now()}};
  return doc_["stages"].back();
}

void Runner::finish_stage(Json& stage) {
  stage["status"] = "completed";
  doc_["timestamps"][stage["stage_id"].get<std::string>()]["finished"] = utc_now();
  int total = 0;
  for (const auto& s : doc_["stages"]) total += s.value("evaluations", 0);
  doc_["evaluations"] = total;
  save();
  ++completed_;
  if (opt_.stop_after_stages && completed_ >= *opt_.stop_after_stages) throw Stop{};
}

void Runner::save() {
  if (opt_.workdir.empty()) return;
  write_json_atomic(opt_.workdir / "state.json", doc_);
}

Design Runner::to_evaluation_design(const std::string& stage_id, const Design& design) const {
  if (!mapped_) return design;
  Design full;
  full.factors = cfg_.factors;
  const std::uint64_t stage_seed = substream_seed(substream_seed(cfg_.seed, 0x1a5c71e5ULL), fnv1a(stage_id));
  for (const auto& run : design.runs) {
    std::vector<double> natural(cfg_.factors.size(), 0.0);
    std::vector<bool> set(cfg_.factors.size(), false);
    for (std::size_t a = 0; a < members_.size(); ++a) {
      for (auto m : members_[a]) {
        natural[m] = run.natural[a];
        set[m] = true;
      }
    }
    const auto drawn = assign_inactive(inactive_, substream_seed(stage_seed, static_cast<std::uint64_t>(run.run_id)));
    for (std::size_t f = 0; f < cfg_.factors.size(); ++f) {
      if (!set[f]) natural[f] = drawn.at(cfg_.factors[f].name);
    }
    DesignPoint p;
    p.run_id = run.run_id;
    p.type = run.type;
    p.coded = natural_to_code(cfg_.factors, natural);
    p.natural = std::move(natural);
    full.runs.push_back(std::move(p));
  }
  return full;
}

StageData Runner::evaluate(const std::string& stage_id, const Design& design, bool allow_rejects, Json& stage) {
  StageData data;
  data.design = design;
  const auto n = static_cast<Eigen::Index>(design.size());
  const auto r = static_cast<Eigen::Index>(response_names_.size());
  data.responses.resize(n, r);
  data.rejected.assign(design.size(), std::nullopt);

  const Design full = to_evaluation_design(stage_id, design);
  if (mapped_) stage["evaluated"] = design_to_json(full);

  bool cached = false;
  if (auto it = cache_.find(stage_id); it != cache_.end() && it->second.value("status", "") == "completed") {
    const auto& resp = it->second.at("responses");
    bool ok = true;
    for (const auto& name : response_names_) ok = ok && resp.contains(name) && resp.at(name).size() == design.size();
    if (ok) {
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < r; ++j) {
          data.responses(i, j) = json_number(resp.at(response_names_[static_cast<std::size_t>(j)]).at(static_cast<std::size_t>(i)));
        }
      }
      const auto rejected = it->second.value("rejected", Json::object());
      for (std::size_t i = 0; i < design.size(); ++i) {
        const auto key = std::to_string(design.runs[i].run_id);
        if (rejected.contains(key)) data.rejected[i] = rejected.at(key).get<std::string>();
      }
      cached = true;
    }
  }
  if (!cached) {
    EvaluationResult result;
    try {
      result = eval_.evaluate(EvaluationRequest{full, response_names_, stage_id});
    } catch (const Error& e) {
      stage["status"] = "failed";
      stage["error"] = e.what();
      doc_["status"] = "failed";
      save();
      throw CampaignEvaluationError("stage " + stage_id + ": " + e.what());
    }
    for (std::size_t i = 0; i < design.size(); ++i) {
      const auto& rr = result.at(design.runs[i].run_id);
      for (Eigen::Index j = 0; j < r; ++j) data.responses(static_cast<Eigen::Index>(i), j) = rr.values[static_cast<std::size_t>(j)];
      data.rejected[i] = rr.rejected;
    }
  }
  if (!allow_rejects) {
    std::vector<int> ids;
    std::string why;
    for (std::size_t i = 0; i < design.size(); ++i) {
      if (data.rejected[i]) {
        ids.push_back(design.runs[i].run_id);
        if (why.empty()) why = *data.rejected[i];
      }
    }
    if (!ids.empty()) {
      stage["status"] = "failed";
      stage["error"] = "evaluator rejected " + std::to_string(ids.size()) + " run(s): " + why;
      doc_["status"] = "failed";
      save();
      throw CampaignEvaluationError("stage " + stage_id + ": " + stage["error"].get<std::string>());
    }
  }
  stage["evaluations"] = static_cast<int>(design.size());
  return data;
}

std::vector<double> Runner::desirability_of(const StageData& data) const {
  std::vector<double> D(data.design.size(), 0.0);
  for (std::size_t i = 0; i < D.size(); ++i) {
    if (data.rejected[i]) continue;  // infeasible runs get D = 0
    std::vector<double> y(response_names_.size());
    for (std::size_t j = 0; j < y.size(); ++j) y[j] = data.responses(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    D[i] = evaluate_desirability(y, specs_).D;
  }
  return D;
}

void Runner::record_data(Json& stage, const StageData& data) const {
  stage["design"] = design_to_json(data.design);
  Json resp = Json::object();
  for (std::size_t j = 0; j < response_names_.size(); ++j) {
    Json col = Json::array();
    for (Eigen::Index i = 0; i < data.responses.rows(); ++i) col.push_back(number_json(data.responses(i, static_cast<Eigen::Index>(j))));
    resp[response_names_[j]] = col;
  }
  stage["responses"] = resp;
  Json rejected = Json::object();
  for (std::size_t i = 0; i < data.rejected.size(); ++i) {
    if (data.rejected[i]) rejected[std::to_string(data.design.runs[i].run_id)] = *data.rejected[i];
  }
  if (!rejected.empty()) stage["rejected"] = rejected;
  Json d = Json::object();
  for (std::size_t j = 0; j < response_names_.size(); ++j) {
    Json col = Json::array();
    for (std::size_t i = 0; i < data.D.size(); ++i) {
      col.push_back(data.rejected[i] ? Json(0.0)
                                     : Json(desirability(data.responses(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), specs_[j])));
    }
    d[response_names_[j]] = col;
  }
  stage["desirabilities"] = {{"d", d}, {"D", data.D}};
}

void Runner::write_results_csv(const std::string& stem, const StageData& data) const {
  if (!opt_.write_artifacts || opt_.workdir.empty()) return;
  write_design_files(opt_.workdir / (stem + ".design.csv"), data.design);
  {
    // Fit-ready table: design columns plus overall desirability.
    std::ofstream out(opt_.workdir / (stem + ".csv"), std::ios::binary);
    std::vector<std::string> header{"run_id", "pt_type"};
    for (const auto& f : data.design.factors) header.push_back(f.name);
    header.push_back("D");
    csv::write_row(out, header);
    for (std::size_t i = 0; i < data.design.size(); ++i) {
      const auto& run = data.design.runs[i];
      std::vector<std::string> row{std::to_string(run.run_id), to_string(run.type)};
      for (double v : run.natural) row.push_back(csv::format(v));
      row.push_back(csv::format(data.D[i]));
      csv::write_row(out, row);
    }
  }
  std::ofstream out(opt_.workdir / (stem + ".results.csv"), std::ios::binary);
  std::vector<std::string> header{"run_id", "pt_type"};
  for (const auto& f : data.design.factors) header.push_back(f.name);
  for (const auto& r : response_names_) header.push_back(r);
  header.push_back("D");
  csv::write_row(out, header);
  for (std::size_t i = 0; i < data.design.size(); ++i) {
    const auto& run = data.design.runs[i];
    std::vector<std::string> row{std::to_string(run.run_id), to_string(run.type)};
    for (double v : run.natural) row.push_back(csv::format(v));
    for (Eigen::Index j = 0; j < data.responses.cols(); ++j) row.push_back(csv::format(data.responses(static_cast<Eigen::Index>(i), j)));
    row.push_back(csv::format(data.D[i]));
    csv::write_row(out, row);
  }
}

void Runner::write_model(const std::string& stem, const FittedModel& model) const {
  if (!opt_.write_artifacts || opt_.workdir.empty()) return;
  write_text(opt_.workdir / (stem + ".model.json"), model_to_json(model).dump(2) + "\n");
  write_text(opt_.workdir / (stem + ".model.txt"), model_text(model));
}

std::vector<Factor> Runner::rsm_factors_at(const std::vector<double>& center) const {
  std::vector<Factor> out;
  for (std::size_t a = 0; a < rsm_names_.size(); ++a) {
    std::string units;
    if (!members_.empty() && !members_[a].empty()) units = cfg_.factors[members_[a].front()].units;
    out.push_back(Factor::around(rsm_names_[a], center[a], half_ranges_[a], units));
  }
  return out;
}

void Runner::set_rsm_factors_without_screening() {
  mapped_ = false;
  for (const auto& f : cfg_.factors) {
    rsm_names_.push_back(f.name);
    auto hr = cfg_.half_range.find(f.name);
    half_ranges_.push_back(hr == cfg_.half_range.end() ? f.half_range() : hr->second);
  }
}

void Runner::screening_stage() {
  const std::string id = "doe" + std::to_string(next_doe_++);
  Json& stage = begin_stage(id, "screening");
  const int k = static_cast<int>(cfg_.factors.size());
  const auto generators = cfg_.generators.empty() ? default_generators(k, cfg_.fraction) : cfg_.generators;
  const auto fd = fractional_factorial(cfg_.factors, cfg_.fraction, generators);

  StageData data = evaluate(id, fd.design, false, stage);

  // Freeze desirability limits from the screening responses.
  Json limits = Json::object();
  for (std::size_t j = 0; j < cfg_.responses.size(); ++j) {
    const Eigen::VectorXd col = data.responses.col(static_cast<Eigen::Index>(j));
    auto& spec = specs_[j];
    if (cfg_.responses[j].auto_upper) spec.upper = col.maxCoeff();
    if (cfg_.responses[j].auto_lower) spec.lower = col.minCoeff();
    spec.validate();
    limits[response_names_[j]] = desirability_to_json(spec);
  }
  doc_["desirability"] = limits;
  data.D = desirability_of(data);
  record_data(stage, data);

  const auto sw = stepwise_bic(fd.design, data.D);
  LassoOptions lo;
  lo.fold_seed = substream_seed(cfg_.seed, 0x5c4ee9ULL);
  const auto la = lasso_cv(fd.design, data.D, cfg_.lasso_folds, lo);
  const auto sw_names = sw.selected_names();
  const auto la_names = la.selected_names();
  const std::set<std::string> s_sw(sw_names.begin(), sw_names.end()), s_la(la_names.begin(), la_names.end());
  auto selected = [&](const std::string& f) {
    switch (cfg_.rule) {
      case ScreeningRule::both: return s_sw.contains(f) && s_la.contains(f);
      case ScreeningRule::either: return s_sw.contains(f) || s_la.contains(f);
      case ScreeningRule::stepwise: return s_sw.contains(f);
      case ScreeningRule::lasso: return s_la.contains(f);
    }
    return false;
  };

  // Active RSM factors in factor order; a tie is active if any member is.
  std::vector<std::string> candidates;
  std::vector<std::vector<std::size_t>> candidate_members;
  std::set<std::string> seen_ties;
  for (std::size_t f = 0; f < cfg_.factors.size(); ++f) {
    const auto& name = cfg_.factors[f].name;
    auto tie = std::find_if(cfg_.ties.begin(), cfg_.ties.end(), [&](const TieGroup& t) {
      return std::find(t.members.begin(), t.members.end(), name) != t.members.end();
    });
    if (tie == cfg_.ties.end()) {
      candidates.push_back(name);
      candidate_members.push_back({f});
    } else if (seen_ties.insert(tie->name).second) {
      candidates.push_back(tie->name);
      std::vector<std::size_t> idx;
      for (const auto& m : tie->members) {
        for (std::size_t g = 0; g < cfg_.factors.size(); ++g) {
          if (cfg_.factors[g].name == m) idx.push_back(g);
        }
      }
      candidate_members.push_back(idx);
    }
  }
  const std::set<std::string> forced(cfg_.forced_active.begin(), cfg_.forced_active.end());
  for (const auto& f : forced) {
    if (std::find(candidates.begin(), candidates.end(), f) == candidates.end()) {
      throw InvalidArgument("forced active factor '" + f + "' is neither a factor nor a tie");
    }
  }
  std::set<std::size_t> active_members;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    bool on = false;
    if (!forced.empty()) {
      on = forced.contains(candidates[c]);
    } else {
      for (auto m : candidate_members[c]) on = on || selected(cfg_.factors[m].name);
    }
    if (!on) continue;
    rsm_names_.push_back(candidates[c]);
    members_.push_back(candidate_members[c]);
    for (auto m : candidate_members[c]) active_members.insert(m);
  }
  if (rsm_names_.empty()) {
    stage["status"] = "failed";
    stage["error"] = "screening selected no factor";
    doc_["status"] = "failed";
    save();
    throw InvalidInput("screening selected no factor; set screening.active to continue");
  }
  mapped_ = true;

  Json inactive = Json::array();
  for (std::size_t f = 0; f < cfg_.factors.size(); ++f) {
    if (active_members.contains(f)) continue;
    const auto& factor = cfg_.factors[f];
    InactiveSetting s{factor.center(), factor.half_range()};
    if (auto it = cfg_.inactive.find(factor.name); it != cfg_.inactive.end()) s = it->second;
    inactive_.entries.push_back({factor, s.mean, s.sd});
    inactive.push_back({{"factor", factor.name}, {"mean", s.mean}, {"sd", s.sd}});
  }
  for (std::size_t a = 0; a < rsm_names_.size(); ++a) {
    double hr = 0.0;
    for (auto m : members_[a]) hr += cfg_.factors[m].half_range();
    hr /= static_cast<double>(members_[a].size());
    if (auto it = cfg_.half_range.find(rsm_names_[a]); it != cfg_.half_range.end()) hr = it->second;
    half_ranges_.push_back(hr);
  }

  Json active = Json::array();
  for (std::size_t a = 0; a < rsm_names_.size(); ++a) {
    Json mem = Json::array();
    for (auto m : members_[a]) mem.push_back(cfg_.factors[m].name);
    active.push_back({{"name", rsm_names_[a]}, {"members", mem}});
  }
  Json defining = Json::array();
  for (auto w : fd.spec.defining_relation) defining.push_back(word_to_string(w));
  stage["model"] = {{"stepwise", screening_to_json(sw)}, {"lasso", screening_to_json(la)}};
  stage["decision"] = {{"generators", generators},
                       {"defining_relation", defining},
                       {"resolution", fd.spec.resolution ? Json(*fd.spec.resolution) : Json(nullptr)},
                       {"rule", rule_name(cfg_.rule)},
                       {"stepwise", sw_names},
                       {"lasso", la_names},
                       {"forced", cfg_.forced_active},
                       {"active", active},
                       {"inactive", inactive}};
  doc_["active_factors"] = active;
  doc_["inactive_factors"] = inactive;
  write_results_csv(id, data);
  if (opt_.write_artifacts && !opt_.workdir.empty()) {
    write_text(opt_.workdir / "screening.txt", screening_text(sw) + "\n" + screening_text(la));
    write_text(opt_.workdir / "screening.json", stage["model"].dump(2) + "\n");
  }
  finish_stage(stage);
}

CampaignState Runner::run() {
  const Json config_json = cfg_.to_json();
  if (opt_.resume) {
    const auto path = opt_.workdir / "state.json";
    if (!fs::exists(path)) throw InvalidInput("nothing to resume: " + path.string() + " does not exist");
    const auto prior = CampaignState::load(path);
    if (prior.doc.value("config", Json()) != config_json) {
      throw InvalidInput("cannot resume: the configuration differs from the one recorded in state.json");
    }
    for (const auto& s : prior.doc.value("stages", Json::array())) cache_[s.at("stage_id").get<std::string>()] = s;
  }
  if (!opt_.workdir.empty()) fs::create_directories(opt_.workdir);
  doc_ = Json::object();
  doc_["format"] = kStateFormat;
  doc_["config"] = config_json;
  doc_["seeds"] = {{"campaign", cfg_.seed}, {"bootstrap", cfg_.bootstrap_seed}};
  doc_["status"] = "running";
  doc_["stages"] = Json::array();
  doc_["evaluations"] = 0;
  doc_["timestamps"] = Json::object();
  doc_["result"] = Json::object();
  Json limits = Json::object();
  for (std::size_t j = 0; j < specs_.size(); ++j) limits[response_names_[j]] = desirability_to_json(specs_[j]);
  doc_["desirability"] = limits;

  try {
    if (cfg_.screening) {
      screening_stage();
    } else {
      set_rsm_factors_without_screening();
    }

    std::vector<double> center;
    for (std::size_t a = 0; a < rsm_names_.size(); ++a) {
      auto it = cfg_.center.find(rsm_names_[a]);
      if (it != cfg_.center.end()) {
        center.push_back(it->second);
      } else if (!members_.empty()) {
        double c = 0.0;
        for (auto m : members_[a]) c += cfg_.factors[m].center();
        center.push_back(c / static_cast<double>(members_[a].size()));
      } else {
        center.push_back(cfg_.factors[a].center());
      }
    }

    int cycles = 0;
    FittedModel last_fo;
    std::string last_fo_id;
    while (true) {
      const std::string id = "doe" + std::to_string(next_doe_++);
      Json& stage = begin_stage(id, "fo");
      const Design design = first_order_design(rsm_factors_at(center), cfg_.n_center);
      StageData data = evaluate(id, design, false, stage);
      data.D = desirability_of(data);
      record_data(stage, data);
      last_fo = fit(design, data.D, ModelOrder::first);
      last_fo_id = id;
      const auto table = anova(last_fo);
      const bool f_ok = last_fo.f_pvalue <= cfg_.adequacy_f_p;
      const bool lof_ok = !table.lof_available() || *table.lack_of_fit->p > cfg_.adequacy_lof_p;
      const bool adequate = f_ok && lof_ok;
      const bool more = adequate && cycles < cfg_.max_ascent_cycles;
      std::string reason;
      if (!f_ok) reason = "overall F test not significant; curvature suspected";
      else if (!lof_ok) reason = "significant lack of fit; curvature suspected";
      else if (!more) reason = "ascent cycle limit reached";
      else reason = "first-order model adequate; following steepest ascent";
      stage["model"] = model_to_json(last_fo);
      stage["decision"] = {{"adequate", adequate},
                           {"f_pvalue", number_json(last_fo.f_pvalue)},
                           {"lack_of_fit_p", table.lof_available() ? number_json(*table.lack_of_fit->p) : Json(nullptr)},
                           {"lack_of_fit_note", table.lof_note},
                           {"next", more ? "ascent" : "ccd"},
                           {"reason", reason}};
      write_results_csv(id, data);
      write_model(id, last_fo);
      finish_stage(stage);
      if (!more) break;

      // Steepest ascent from the FO center.
      const std::string aid = "doe" + std::to_string(next_doe_++);
      Json& astage = begin_stage(aid, "ascent");
      const auto grid = default_distance_grid();
      AscentPath path;
      try {
        path = steepest_path(last_fo, grid);
      } catch (const NoDirectionError& e) {
        astage["status"] = "failed";
        astage["error"] = e.what();
        doc_["status"] = "failed";
        save();
        throw;
      }
      StageData pdata = evaluate(aid, path.as_design(), true, astage);
      pdata.D = desirability_of(pdata);
      auto pick = select_recenter(path, pdata.D);
      bool extended = false;
      if (pick.index + 1 == path.points.size()) {
        // Maximum at the end of the grid: extend the path once.
        auto all = grid;
        const auto ext = extended_distance_grid();
        all.insert(all.end(), ext.begin(), ext.end());
        path = steepest_path(last_fo, all);
        pdata = evaluate(aid, path.as_design(), true, astage);
        pdata.D = desirability_of(pdata);
        pick = select_recenter(path, pdata.D);
        extended = true;
      }
      record_data(astage, pdata);
      std::vector<double> new_center = pick.natural_center;
      double distance = pick.distance;
      bool manual = false;
      if (static_cast<std::size_t>(cycles) < cfg_.recenter_distance.size() && cfg_.recenter_distance[static_cast<std::size_t>(cycles)]) {
        distance = *cfg_.recenter_distance[static_cast<std::size_t>(cycles)];
        std::vector<double> coded(path.direction.size());
        for (Eigen::Index i = 0; i < path.direction.size(); ++i) coded[static_cast<std::size_t>(i)] = distance * path.direction(i);
        new_center = code_to_natural(path.factors, coded);
        manual = true;
      }
      Json nc = Json::object();
      for (std::size_t a = 0; a < rsm_names_.size(); ++a) nc[rsm_names_[a]] = new_center[a];
      astage["model"] = path_to_json(path);
      astage["decision"] = {{"best_index", pick.index},
                            {"best_distance", pick.distance},
                            {"best_D", pdata.D[pick.index]},
                            {"extended", extended},
                            {"manual_override", manual},
                            {"recenter_distance", distance},
                            {"new_center", nc}};
      if (opt_.write_artifacts && !opt_.workdir.empty()) {
        write_results_csv(aid, pdata);
        std::ofstream out(opt_.workdir / (aid + ".path.csv"), std::ios::binary);
        std::vector<std::string> header{"distance"};
        for (const auto& n : rsm_names_) header.push_back(n);
        for (const auto& r : response_names_) header.push_back(r);
        header.push_back("D");
        csv::write_row(out, header);
        for (std::size_t i = 0; i < path.points.size(); ++i) {
          std::vector<std::string> row{csv::format(path.distances[i])};
          for (double v : path.points[i].natural) row.push_back(csv::format(v));
          for (Eigen::Index j = 0; j < pdata.responses.cols(); ++j) row.push_back(csv::format(pdata.responses(static_cast<Eigen::Index>(i), j)));
          row.push_back(csv::format(pdata.D[i]));
          csv::write_row(out, row);
        }
      }
      finish_stage(astage);
      center = new_center;
      ++cycles;
    }

    // Second-order design at the last center.
    const std::string cid = "doe" + std::to_string(next_doe_++);
    Json& cstage = begin_stage(cid, "ccd");
    const auto ccd = central_composite(rsm_factors_at(center), cfg_.n_center, cfg_.alpha_mode, cfg_.custom_alpha);
    StageData cdata = evaluate(cid, ccd.design, false, cstage);
    cdata.D = desirability_of(cdata);
    record_data(cstage, cdata);
    const FittedModel so = fit(ccd.design, cdata.D, ModelOrder::second);
    const bool so_better = so.aic < last_fo.aic && so.bic < last_fo.bic;
    cstage["model"] = model_to_json(so);
    cstage["decision"] = {{"alpha", ccd.spec.alpha},
                          {"alpha_mode", to_string(ccd.spec.alpha_mode)},
                          {"compared_with", last_fo_id},
                          {"aic_so", number_json(so.aic)},
                          {"bic_so", number_json(so.bic)},
                          {"aic_fo", number_json(last_fo.aic)},
                          {"bic_fo", number_json(last_fo.bic)},
                          {"second_order_preferred", so_better}};
    write_results_csv(cid, cdata);
    write_model(cid, so);
    finish_stage(cstage);

    // Canonical analysis and one confirmation run at the stationary point.
    Json& kstage = begin_stage("canonical", "canonical");
    CanonicalAnalysis ca;
    try {
      ca = stationary_point(so);
    } catch (const RidgeSuspectedError& e) {
      kstage["status"] = "failed";
      kstage["error"] = e.what();
      doc_["status"] = "failed";
      save();
      throw;
    }
    Design confirm;
    confirm.factors = ccd.design.factors;
    confirm.add_coded(ca.stationary_coded, PointType::path);
    StageData kdata = evaluate("canonical", confirm, false, kstage);
    kdata.D = desirability_of(kdata);
    record_data(kstage, kdata);
    kstage["model"] = canonical_to_json(ca, rsm_names_);
    Json conf_resp = Json::object();
    for (std::size_t j = 0; j < response_names_.size(); ++j) conf_resp[response_names_[j]] = kdata.responses(0, static_cast<Eigen::Index>(j));
    kstage["decision"] = {{"classification", to_string(ca.classification)},
                          {"in_region", ca.in_region},
                          {"predicted_D", ca.y_hat_s},
                          {"confirmation_D", kdata.D[0]},
                          {"confirmation_responses", conf_resp}};
    if (opt_.write_artifacts && !opt_.workdir.empty()) {
      write_text(opt_.workdir / "canonical.json", kstage["model"].dump(2) + "\n");
      write_text(opt_.workdir / "canonical.txt", canonical_text(ca, rsm_names_));
      // Fitted surface over every pair of factors through the stationary point.
      const int g = std::max(2, cfg_.contour_grid);
      const double reach = ca.region_radius;
      for (std::size_t a = 0; a < rsm_names_.size(); ++a) {
        for (std::size_t b = a + 1; b < rsm_names_.size(); ++b) {
          std::ofstream out(opt_.workdir / ("contour_" + rsm_names_[a] + "_" + rsm_names_[b] + ".csv"), std::ios::binary);
          csv::write_row(out, {rsm_names_[a], rsm_names_[b], "yhat"});
          std::vector<double> x = ca.in_region ? ca.stationary_coded : std::vector<double>(rsm_names_.size(), 0.0);
          for (int i = 0; i < g; ++i) {
            for (int jj = 0; jj < g; ++jj) {
              x[a] = -reach + 2.0 * reach * i / (g - 1);
              x[b] = -reach + 2.0 * reach * jj / (g - 1);
              csv::write_row(out, {csv::format(ccd.design.factors[a].to_natural(x[a])),
                                   csv::format(ccd.design.factors[b].to_natural(x[b])), csv::format(so.predict(x))});
            }
          }
        }
      }
    }
    const Json eigenvalues = kstage["model"]["eigenvalues"];
    finish_stage(kstage);

    // Bootstrap of the stationary point.
    Json& bstage = begin_stage("bootstrap", "bootstrap");
    BootstrapOptions bo;
    bo.threads = cfg_.bootstrap_threads;
    bo.scaling = cfg_.residual_scaling;
    BootstrapResult br;
    try {
      br = bootstrap_stationary(so, cfg_.bootstrap_replications, cfg_.bootstrap_seed, bo);
    } catch (const Error& e) {
      bstage["status"] = "failed";
      bstage["error"] = e.what();
      doc_["status"] = "failed";
      save();
      throw;
    }
    bstage["model"] = bootstrap_to_json(br, rsm_names_);
    bstage["decision"] = {{"replications", br.replications}, {"failed", br.n_failed},
                          {"residual_scaling", scaling_name(cfg_.residual_scaling)}};
    if (opt_.write_artifacts && !opt_.workdir.empty()) {
      write_text(opt_.workdir / "bootstrap.json", bstage["model"].dump(2) + "\n");
      write_text(opt_.workdir / "bootstrap.txt", bootstrap_text(br, rsm_names_));
      std::ofstream out(opt_.workdir / "bootstrap_samples.csv", std::ios::binary);
      std::vector<std::string> header{"replication"};
      for (const auto& n : rsm_names_) header.push_back(n);
      csv::write_row(out, header);
      for (Eigen::Index i = 0; i < br.stationary_samples.rows(); ++i) {
        std::vector<std::string> row{std::to_string(br.replication_index[static_cast<std::size_t>(i)])};
        for (Eigen::Index j = 0; j < br.stationary_samples.cols(); ++j) row.push_back(csv::format(br.stationary_samples(i, j)));
        csv::write_row(out, row);
      }
    }

    Json stationary = Json::object();
    Json ci = Json::object();
    for (std::size_t a = 0; a < rsm_names_.size(); ++a) {
      stationary[rsm_names_[a]] = ca.stationary_natural[a];
      ci[rsm_names_[a]] = {br.ci[a].low, br.ci[a].high};
    }
    doc_["result"] = {{"classification", to_string(ca.classification)},
                      {"stationary_natural", stationary},
                      {"stationary_coded", ca.stationary_coded},
                      {"eigenvalues", eigenvalues},
                      {"predicted_D", ca.y_hat_s},
                      {"confirmation_D", kdata.D[0]},
                      {"confirmation_responses", conf_resp},
                      {"second_order_preferred", so_better},
                      {"bootstrap_ci", ci},
                      {"bootstrap_failed", br.n_failed}};
    doc_["status"] = "completed";
    finish_stage(bstage);
  } catch (const Stop&) {
    if (doc_["status"] != "completed") {
      doc_["status"] = "interrupted";
      save();
    }
  }

  std::vector<std::string> kinds;
  for (const auto& s : doc_["stages"]) kinds.push_back(s.at("kind").get<std::string>());
  check_stage_grammar(kinds);
  if (opt_.write_artifacts && !opt_.workdir.empty() && doc_["status"] == "completed") {
    std::ostringstream o;
    o << "campaign " << doc_["status"].get<std::string>() << ", " << doc_["evaluations"].get<int>() << " evaluations\n";
    for (const auto& s : doc_["stages"]) {
      o << "  " << s["stage_id"].get<std::string>() << "  " << s["kind"].get<std::string>() << "  "
        << s.value("evaluations", 0) << " runs\n";
    }
    o << "\n" << doc_["result"].dump(2) << "\n";
    write_text(opt_.workdir / "report.txt", o.str());
  }
  return CampaignState{doc_};
}

}  // namespace

// ---------------------------------------------------------------------------

void check_stage_grammar(const std::vector<std::string>& kinds) {
  // screening? (fo ascent)* fo ccd canonical bootstrap; every prefix is valid.
  enum State { start, screened, fo, ascent, ccd, canonical, done };
  State s = start;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    const auto& k = kinds[i];
    State next = done;
    bool ok = false;
    switch (s) {
      case start:
        if (k == "screening") { next = screened; ok = true; }
        else if (k == "fo") { next = fo; ok = true; }
        break;
      case screened:
      case ascent:
        if (k == "fo") { next = fo; ok = true; }
        break;
      case fo:
        if (k == "ascent") { next = ascent; ok = true; }
        else if (k == "ccd") { next = ccd; ok = true; }
        break;
      case ccd:
        if (k == "canonical") { next = canonical; ok = true; }
        break;
      case canonical:
        if (k == "bootstrap") { next = done; ok = true; }
        break;
      case done:
        break;
    }
    if (!ok) throw Error("internal error: stage '" + k + "' at position " + std::to_string(i) + " breaks the campaign grammar");
    s = next;
  }
}

int CampaignState::total_evaluations() const {
  int total = 0;
  for (const auto& s : stages()) total += s.value("evaluations", 0);
  return total;
}

std::vector<int> CampaignState::stage_run_counts() const {
  std::vector<int> out;
  for (const auto& s : stages()) {
    const int n = s.value("evaluations", 0);
    if (n > 0) out.push_back(n);
  }
  return out;
}

Json CampaignState::without_timestamps() const {
  Json j = doc;
  j.erase("timestamps");
  return j;
}

CampaignState CampaignState::load(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + path.string());
  CampaignState s;
  try {
    s.doc = Json::parse(in);
  } catch (const Json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
  if (s.doc.value("format", std::string()) != kStateFormat) throw SchemaError(path.string() + " is not a campaign state file");
  return s;
}

CampaignConfig CampaignConfig::from_json(const Json& j) {
  if (!j.is_object()) throw SchemaError("configuration must be a JSON object");
  try {
    CampaignConfig c;
    c.seed = j.value("seed", std::uint64_t{1});
    c.factors = factors_from_json(j.at("factors"));
    for (const auto& r : j.at("responses")) {
      ResponseGoal g;
      g.name = r.at("name").get<std::string>();
      g.spec.goal = goal_from_string(r.at("goal").get<std::string>());
      g.spec.target = r.at("target").get<double>();
      auto limit = [&](const char* key, bool& is_auto) {
        if (!r.contains(key)) return 0.0;
        const auto& v = r.at(key);
        if (v.is_string() && v.get<std::string>() == "auto") {
          is_auto = true;
          return 0.0;
        }
        return v.get<double>();
      };
      g.spec.upper = limit("upper", g.auto_upper);
      g.spec.lower = limit("lower", g.auto_lower);
      g.spec.weight = r.value("weight", 1.0);
      g.spec.weight_low = r.value("weight_low", 1.0);
      g.spec.weight_high = r.value("weight_high", 1.0);
      c.responses.push_back(g);
    }
    if (c.responses.empty()) throw InvalidArgument("configuration needs at least one response");

    const Json sc = j.value("screening", Json::object());
    c.screening = sc.value("enabled", true);
    c.fraction = sc.value("fraction", 2);
    c.generators = sc.value("generators", std::vector<std::string>{});
    c.rule = rule_from(sc.value("rule", std::string("both")));
    c.lasso_folds = sc.value("lasso_folds", 3);
    for (const auto& t : sc.value("ties", Json::array())) {
      c.ties.push_back(TieGroup{t.at("name").get<std::string>(), t.at("members").get<std::vector<std::string>>()});
    }
    c.forced_active = sc.value("active", std::vector<std::string>{});
    const Json inactive_j = sc.value("inactive", Json::object());
    for (const auto& [name, v] : inactive_j.items()) {
      c.inactive[name] = InactiveSetting{v.at("mean").get<double>(), v.at("sd").get<double>()};
    }

    const Json rs = j.value("rsm", Json::object());
    c.center = read_number_map(rs.value("center", Json()), "rsm.center");
    c.half_range = read_number_map(rs.value("half_range", Json()), "rsm.half_range");
    c.n_center = rs.value("n_center", 3);
    c.max_ascent_cycles = rs.value("max_ascent_cycles", 5);
    c.adequacy_f_p = rs.value("adequacy_f_p", 0.05);
    c.adequacy_lof_p = rs.value("adequacy_lof_p", 0.05);
    for (const auto& d : rs.value("recenter_distance", Json::array())) {
      c.recenter_distance.push_back(d.is_null() ? std::nullopt : std::optional<double>(d.get<double>()));
    }
    const Json alpha = rs.value("alpha", Json("rotatable"));
    if (alpha.is_number()) {
      c.alpha_mode = AlphaMode::custom;
      c.custom_alpha = alpha.get<double>();
    } else {
      c.alpha_mode = alpha_mode_from_string(alpha.get<std::string>());
    }

    const Json bs = j.value("bootstrap", Json::object());
    c.bootstrap_replications = bs.value("replications", 1000);
    c.bootstrap_seed = bs.value("seed", std::uint64_t{123});
    c.bootstrap_threads = bs.value("threads", 1);
    c.residual_scaling = scaling_from(bs.value("residual_scaling", std::string("df_corrected")));

    c.contour_grid = j.value("contour_grid", 41);
    c.evaluator = j.value("evaluator", Json::object());

    // Checks that do not need data.
    for (const auto& g : c.responses) {
      if (!c.screening && (g.auto_lower || g.auto_upper)) {
        throw InvalidArgument("response '" + g.name + "': 'auto' limits need the screening stage");
      }
      if (!g.auto_lower && !g.auto_upper) g.spec.validate();
    }
    if (c.n_center < 1) throw InvalidArgument("rsm.n_center must be at least 1");
    if (c.max_ascent_cycles < 0) throw InvalidArgument("rsm.max_ascent_cycles must be nonnegative");
    if (c.bootstrap_replications < 1) throw InvalidArgument("bootstrap.replications must be positive");
    for (const auto& t : c.ties) {
      for (const auto& m : t.members) {
        if (std::none_of(c.factors.begin(), c.factors.end(), [&](const Factor& f) { return f.name == m; })) {
          throw InvalidArgument("tie '" + t.name + "' names unknown factor '" + m + "'");
        }
      }
    }
    for (const auto& [k, v] : c.half_range) {
      if (!(v > 0.0)) throw InvalidArgument("rsm.half_range." + k + " must be positive");
    }
    return c;
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("configuration: ") + e.what());
  }
}

CampaignConfig CampaignConfig::load(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read configuration " + path.string());
  Json j;
  try {
    j = Json::parse(in, nullptr, true, true);
  } catch (const Json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
  return from_json(j);
}

Json CampaignConfig::to_json() const {
  Json responses_j = Json::array();
  for (const auto& r : responses) {
    Json g{{"name", r.name}, {"goal", to_string(r.spec.goal)}, {"target", r.spec.target}};
    if (r.spec.goal != Goal::maximize) g["upper"] = r.auto_upper ? Json("auto") : Json(r.spec.upper);
    if (r.spec.goal != Goal::minimize) g["lower"] = r.auto_lower ? Json("auto") : Json(r.spec.lower);
    if (r.spec.goal == Goal::target) {
      g["weight_low"] = r.spec.weight_low;
      g["weight_high"] = r.spec.weight_high;
    } else {
      g["weight"] = r.spec.weight;
    }
    responses_j.push_back(g);
  }
  Json ties_j = Json::array();
  for (const auto& t : ties) ties_j.push_back({{"name", t.name}, {"members", t.members}});
  Json inactive_j = Json::object();
  for (const auto& [k, v] : inactive) inactive_j[k] = {{"mean", v.mean}, {"sd", v.sd}};
  Json recenter = Json::array();
  for (const auto& d : recenter_distance) recenter.push_back(d ? Json(*d) : Json(nullptr));
  return {{"seed", seed},
          {"factors", factors_to_json(factors)},
          {"responses", responses_j},
          {"screening",
           {{"enabled", screening},
            {"fraction", fraction},
            {"generators", generators},
            {"rule", rule_name(rule)},
            {"lasso_folds", lasso_folds},
            {"ties", ties_j},
            {"active", forced_active},
            {"inactive", inactive_j}}},
          {"rsm",
           {{"center", number_map(center)},
            {"half_range", number_map(half_range)},
            {"n_center", n_center},
            {"max_ascent_cycles", max_ascent_cycles},
            {"adequacy_f_p", adequacy_f_p},
            {"adequacy_lof_p", adequacy_lof_p},
            {"recenter_distance", recenter},
            {"alpha", alpha_mode == AlphaMode::custom ? Json(custom_alpha) : Json(to_string(alpha_mode))}}},
          {"bootstrap",
           {{"replications", bootstrap_replications},
            {"seed", bootstrap_seed},
            {"threads", bootstrap_threads},
            {"residual_scaling", scaling_name(residual_scaling)}}},
          {"contour_grid", contour_grid},
          {"evaluator", evaluator}};
}

CampaignConfig CampaignConfig::housing_default() {
  const Json j = R"({
    "seed": 2024,
    "factors": [
      {"name": "overhang_north", "low": 0.5, "high": 2.5, "units": "m"},
      {"name": "overhang_south", "low": 0.5, "high": 2.5, "units": "m"},
      {"name": "overhang_east",  "low": 0.5, "high": 2.5, "units": "m"},
      {"name": "overhang_west",  "low": 0.5, "high": 2.5, "units": "m"},
      {"name": "wwr_north", "low": 5, "high": 40, "units": "%"},
      {"name": "wwr_south", "low": 5, "high": 40, "units": "%"},
      {"name": "wwr_east",  "low": 5, "high": 40, "units": "%"},
      {"name": "wwr_west",  "low": 5, "high": 40, "units": "%"}
    ],
    "responses": [
      {"name": "IOH", "goal": "minimize", "target": 0, "upper": "auto"},
      {"name": "UDI", "goal": "maximize", "target": 100, "lower": "auto"}
    ],
    "screening": {
      "fraction": 2,
      "generators": ["G=ABCD", "H=ABEF"],
      "rule": "both",
      "lasso_folds": 3,
      "ties": [{"name": "overhang", "members": ["overhang_south", "overhang_west"]}],
      "inactive": {
        "overhang_north": {"mean": 0.5, "sd": 2}, "overhang_east": {"mean": 0.5, "sd": 2},
        "wwr_north": {"mean": 15, "sd": 2}, "wwr_east": {"mean": 15, "sd": 2}
      }
    },
    "rsm": {
      "center": {"overhang": 2.5, "wwr_south": 40, "wwr_west": 15},
      "half_range": {"overhang": 0.5, "wwr_south": 10, "wwr_west": 10},
      "n_center": 3,
      "max_ascent_cycles": 5,
      "alpha": "rotatable"
    },
    "bootstrap": {"replications": 1000, "seed": 123},
    "evaluator": {"kind": "surrogate", "preset": "housing_screening"}
  })"_json;
  return from_json(j);
}

std::unique_ptr<Evaluator> make_evaluator(const CampaignConfig& config, const fs::path& workdir) {
  const auto& e = config.evaluator;
  const std::string kind = e.value("kind", std::string("surrogate"));
  try {
    if (kind == "surrogate") {
      return std::make_unique<SurrogateEvaluator>(surrogate_from_json(e), e.value("threads", 1));
    }
    if (kind == "csv") {
      const Json c = e.value("csv", Json::object());
      CsvEvaluatorOptions o;
      fs::path dir = c.value("workdir", std::string("evaluations"));
      o.workdir = dir.is_absolute() || workdir.empty() ? dir : workdir / dir;
      o.timeout = std::chrono::milliseconds(static_cast<long long>(1000.0 * c.value("timeout_s", 86400.0)));
      o.poll_interval = std::chrono::milliseconds(c.value("poll_ms", 200));
      o.command = c.value("command", std::string());
      return std::make_unique<CsvBatchEvaluator>(o);
    }
  } catch (const Json::exception& ex) {
    throw SchemaError(std::string("evaluator configuration: ") + ex.what());
  }
  throw InvalidArgument("unknown evaluator kind '" + kind + "' (surrogate|csv)");
}

CampaignState run_campaign(const CampaignConfig& config, Evaluator& evaluator, const CampaignOptions& options) {
  Runner runner(config, evaluator, options);
  return runner.run();
}

}  // namespace rsm
