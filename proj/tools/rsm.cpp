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

// rsm: command-line front end for designs, fits, analyses, metrics and the
// sequential campaign.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rsm/ascent.hpp"
#include "rsm/bootstrap.hpp"
#include "rsm/campaign.hpp"
#include "rsm/canonical.hpp"
#include "rsm/csv.hpp"
#include "rsm/designs.hpp"
#include "rsm/errors.hpp"
#include "rsm/metrics.hpp"
#include "rsm/modelfit.hpp"
#include "rsm/report.hpp"
#include "rsm/screening.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitEvaluation = 3;
constexpr int kExitAnalysis = 1;

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw rsm::InvalidInput("cannot read " + path);
  return in;
}

// Writes to `path`, or stdout when empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw rsm::InvalidInput("cannot write " + path);
  out << text;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Factors from a `name,low,high[,units]` CSV, or k coded factors A, B, ...
std::vector<rsm::Factor> load_factors(const std::string& path, int k) {
  std::vector<rsm::Factor> f;
  if (!path.empty()) {
    auto in = open_in(path);
    const auto t = rsm::csv::read(in);
    const auto cn = t.column("name");
    const auto cl = t.column("low");
    const auto ch = t.column("high");
    const bool has_units = t.has_column("units");
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      f.push_back(rsm::Factor{t.rows[r][cn], t.number(r, cl), t.number(r, ch),
                              has_units ? t.rows[r][t.column("units")] : std::string()});
    }
  } else {
    if (k < 1) throw rsm::InvalidArgument("give -k or --factors");
    for (int i = 0; i < k; ++i) f.push_back(rsm::Factor{std::string(1, rsm::factor_letter(i)), -1.0, 1.0, {}});
  }
  rsm::validate_factors(f);
  return f;
}

struct Table {
  rsm::Design design;
  std::vector<double> y;
};

// Reads run_id,pt_type,<factors...>,<response>. Factor coding comes from the
// factors file when given, else from the min/max of the factorial runs.
Table load_table(const std::string& path, const std::string& response, const std::string& factor_list,
                 const std::string& factors_file) {
  auto in = open_in(path);
  const auto t = rsm::csv::read(in);
  const std::string resp = response.empty() ? t.header.back() : response;
  const auto cy = t.column(resp);
  std::vector<std::string> names = split(factor_list);
  if (names.empty()) {
    for (const auto& h : t.header) {
      if (h != "run_id" && h != "pt_type" && h != resp) names.push_back(h);
    }
  }
  std::vector<rsm::Factor> factors;
  if (!factors_file.empty()) {
    const auto all = load_factors(factors_file, 0);
    for (const auto& n : names) {
      auto it = std::find_if(all.begin(), all.end(), [&](const rsm::Factor& f) { return f.name == n; });
      if (it == all.end()) throw rsm::SchemaError("factors file has no factor '" + n + "'");
      factors.push_back(*it);
    }
  } else {
    const bool typed = t.has_column("pt_type");
    for (const auto& n : names) {
      const auto c = t.column(n);
      double lo = 0.0, hi = 0.0;
      bool first = true;
      for (std::size_t r = 0; r < t.rows.size(); ++r) {
        if (typed && t.rows[r][t.column("pt_type")] != "factorial") continue;
        const double v = t.number(r, c);
        lo = first ? v : std::min(lo, v);
        hi = first ? v : std::max(hi, v);
        first = false;
      }
      if (first || !(lo < hi)) throw rsm::SchemaError("cannot infer the coding of column '" + n + "'; pass --factors-file");
      factors.push_back(rsm::Factor{n, lo, hi, {}});
    }
  }
  std::stringstream copy;
  {
    std::vector<std::string> header{"run_id"};
    if (t.has_column("pt_type")) header.push_back("pt_type");
    for (const auto& n : names) header.push_back(n);
    rsm::csv::write_row(copy, header);
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      std::vector<std::string> row{t.rows[r][t.column("run_id")]};
      if (t.has_column("pt_type")) row.push_back(t.rows[r][t.column("pt_type")]);
      for (const auto& n : names) row.push_back(t.rows[r][t.column(n)]);
      rsm::csv::write_row(copy, row);
    }
  }
  Table out;
  out.design = rsm::read_design_csv(copy, factors);
  for (std::size_t r = 0; r < t.rows.size(); ++r) out.y.push_back(t.number(r, cy));
  return out;
}

rsm::FittedModel load_model(const std::string& path) {
  auto in = open_in(path);
  rsm::Json j;
  try {
    j = rsm::Json::parse(in);
  } catch (const rsm::Json::exception& e) {
    throw rsm::SchemaError(path + ": " + e.what());
  }
  return rsm::model_from_json(j);
}

rsm::IlluminanceGrid load_grid(const std::string& lux, const std::string& sensors, const std::string& zone) {
  std::map<std::string, std::string> map;
  if (!sensors.empty()) {
    auto in = open_in(sensors);
    map = rsm::read_sensor_map(in);
  }
  auto in = open_in(lux);
  auto grid = rsm::read_illuminance(in, map);
  return zone.empty() ? grid : grid.zone(zone);
}

std::string percent(double v) { return rsm::csv::format(v) + "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential response surface optimization with desirability functions"};
  app.require_subcommand(1);
  std::string out_path;

  // design
  auto* design = app.add_subcommand("design", "Generate a design as CSV");
  design->require_subcommand(1);
  int k = 0, p = 0, nc = 3;
  std::string factors_file, generators, alpha = "rotatable";
  bool coded = false;
  for (auto* sub : {design->add_subcommand("full", "2^k full factorial"),
                    design->add_subcommand("fractional", "2^(k-p) fractional factorial"),
                    design->add_subcommand("fo", "2^k factorial plus center runs"),
                    design->add_subcommand("ccd", "Central composite design")}) {
    sub->add_option("-k", k, "Number of coded factors A, B, ...");
    sub->add_option("--factors", factors_file, "CSV name,low,high[,units]");
    sub->add_flag("--coded", coded, "Write coded instead of natural levels");
    sub->add_option("-o,--out", out_path, "Output file (default stdout)");
    if (sub->get_name() == "fractional") {
      sub->add_option("-p", p, "Number of generators")->required();
      sub->add_option("--generators", generators, "Comma-separated, e.g. G=ABCD,H=ABEF");
    }
    if (sub->get_name() == "fo" || sub->get_name() == "ccd") sub->add_option("--nc", nc, "Center runs");
    if (sub->get_name() == "ccd") sub->add_option("--alpha", alpha, "rotatable, face_centered or a number");
  }

  // fit
  auto* fitc = app.add_subcommand("fit", "Fit a first- or second-order model");
  std::string in_path, response, factor_list, order = "fo", text_path;
  fitc->add_option("--in", in_path, "Design CSV with a response column")->required();
  fitc->add_option("--order", order, "fo or so")->check(CLI::IsMember({"fo", "so"}));
  fitc->add_option("--response", response, "Response column (default: last)");
  fitc->add_option("--columns", factor_list, "Comma-separated factor columns");
  fitc->add_option("--factors-file", factors_file, "CSV name,low,high for the coding");
  fitc->add_option("-o,--out", out_path, "Model JSON (default stdout)");
  fitc->add_option("--text", text_path, "Also write a plain-text summary");

  // screen
  auto* screen = app.add_subcommand("screen", "Stepwise-BIC and Lasso screening");
  std::string method = "both";
  int folds = 3;
  std::uint64_t seed = 1;
  screen->add_option("--in", in_path, "Design CSV with a response column")->required();
  screen->add_option("--response", response, "Response column (default: last)");
  screen->add_option("--columns", factor_list, "Comma-separated factor columns");
  screen->add_option("--factors-file", factors_file, "CSV name,low,high for the coding");
  screen->add_option("--method", method)->check(CLI::IsMember({"stepwise", "lasso", "both"}));
  screen->add_option("--folds", folds, "Lasso cross-validation folds");
  screen->add_option("--seed", seed, "Fold assignment seed");
  screen->add_option("-o,--out", out_path, "JSON output (default stdout)");

  // ascend
  auto* ascend = app.add_subcommand("ascend", "Steepest-ascent path from a first-order model");
  std::string model_path;
  bool extended = false;
  ascend->add_option("--model", model_path, "Model JSON from `fit --order fo`")->required();
  ascend->add_flag("--extended", extended, "Use distances 6.5..12 instead of 0.5..6");
  ascend->add_option("-o,--out", out_path, "Path CSV (default stdout)");

  // canonical
  auto* canon = app.add_subcommand("canonical", "Stationary point and canonical analysis");
  canon->add_option("--model", model_path, "Model JSON from `fit --order so`")->required();
  canon->add_option("-o,--out", out_path, "JSON output (default stdout)");
  canon->add_option("--text", text_path, "Also write a plain-text summary");

  // bootstrap
  auto* boot = app.add_subcommand("bootstrap", "Residual bootstrap of the stationary point");
  int reps = 1000, threads = 1;
  std::string scaling = "df_corrected", samples_path;
  std::uint64_t boot_seed = 123;
  boot->add_option("--model", model_path, "Model JSON from `fit --order so`")->required();
  boot->add_option("-B,--replications", reps);
  boot->add_option("--seed", boot_seed);
  boot->add_option("--threads", threads);
  boot->add_option("--scaling", scaling)->check(CLI::IsMember({"none", "df_corrected"}));
  boot->add_option("--samples", samples_path, "Write the stationary-point samples as CSV");
  boot->add_option("-o,--out", out_path, "JSON output (default stdout)");

  // metrics
  auto* metrics = app.add_subcommand("metrics", "Comfort and daylight metrics from hourly CSVs");
  metrics->require_subcommand(1);
  std::string zones, outdoor, areas, lux, sensors, zone;
  double alpha_pm = 0.9, low = 100.0, high = 3000.0, threshold = 300.0, fraction = 0.5;
  auto* m_ioh = metrics->add_subcommand("ioh", "Indoor overheating hours, %");
  m_ioh->add_option("--zones", zones, "hour,zone,t_op,occupied")->required();
  m_ioh->add_option("--outdoor", outdoor, "hour,t_out")->required();
  m_ioh->add_option("--areas", areas, "zone,area");
  m_ioh->add_option("--alpha", alpha_pm, "Prevailing-mean weight");
  std::vector<CLI::App*> daylight;
  for (const char* name : {"udi", "da", "cda", "sda"}) {
    auto* sub = metrics->add_subcommand(name, std::string(name) + ", %");
    sub->add_option("--lux", lux, "hour,sensor,lux")->required();
    sub->add_option("--sensors", sensors, "sensor,zone");
    sub->add_option("--zone", zone, "Restrict to the sensors of one zone");
    if (std::string(name) == "udi") {
      sub->add_option("--low", low);
      sub->add_option("--high", high);
    } else {
      sub->add_option("--threshold", threshold);
    }
    if (std::string(name) == "sda") sub->add_option("--fraction", fraction);
    daylight.push_back(sub);
  }

  // run
  auto* run = app.add_subcommand("run", "Run or resume the sequential campaign");
  std::string config_path, workdir = "campaign", evaluator;
  bool resume = false;
  std::optional<std::uint64_t> run_seed;
  std::optional<int> stop_after;
  run->add_option("--config", config_path, "Campaign JSON (default: built-in housing campaign)");
  run->add_option("--workdir", workdir, "Output directory");
  run->add_option("--seed", run_seed, "Override the campaign seed");
  run->add_option("--evaluator", evaluator, "surrogate or csv")->check(CLI::IsMember({"surrogate", "csv"}));
  run->add_flag("--resume", resume, "Continue from <workdir>/state.json");
  run->add_option("--stop-after", stop_after, "Stop after this many stages");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*design) {
      const auto factors = load_factors(factors_file, k);
      rsm::Design d;
      if (design->got_subcommand("full")) {
        d = rsm::full_factorial(factors);
      } else if (design->got_subcommand("fractional")) {
        auto gens = split(generators);
        if (gens.empty()) gens = rsm::default_generators(static_cast<int>(factors.size()), p);
        d = rsm::fractional_factorial(factors, p, gens).design;
      } else if (design->got_subcommand("fo")) {
        d = rsm::first_order_design(factors, nc);
      } else {
        rsm::AlphaMode mode = rsm::AlphaMode::custom;
        double custom = 0.0;
        if (alpha == "rotatable" || alpha == "face_centered") {
          mode = rsm::alpha_mode_from_string(alpha);
        } else {
          try {
            custom = std::stod(alpha);
          } catch (const std::exception&) {
            throw rsm::InvalidArgument("--alpha must be rotatable, face_centered or a number");
          }
        }
        d = rsm::central_composite(factors, nc, mode, custom).design;
      }
      std::ostringstream o;
      rsm::write_design_csv(o, d, coded);
      emit(out_path, o.str());
    } else if (*fitc) {
      const auto t = load_table(in_path, response, factor_list, factors_file);
      const auto m = rsm::fit(t.design, t.y, rsm::model_order_from_string(order));
      emit(out_path, rsm::model_to_json(m).dump(2) + "\n");
      if (!text_path.empty()) emit(text_path, rsm::model_text(m));
    } else if (*screen) {
      const auto t = load_table(in_path, response, factor_list, factors_file);
      rsm::Json j = rsm::Json::object();
      if (method != "lasso") j["stepwise"] = rsm::screening_to_json(rsm::stepwise_bic(t.design, t.y));
      if (method != "stepwise") {
        rsm::LassoOptions lo;
        lo.fold_seed = seed;
        j["lasso"] = rsm::screening_to_json(rsm::lasso_cv(t.design, t.y, folds, lo));
      }
      emit(out_path, j.dump(2) + "\n");
    } else if (*ascend) {
      const auto m = load_model(model_path);
      const auto path = rsm::steepest_path(m, extended ? rsm::extended_distance_grid() : rsm::default_distance_grid());
      std::ostringstream o;
      std::vector<std::string> header{"distance"};
      for (const auto& f : path.factors) header.push_back(f.name);
      for (const auto& f : path.factors) header.push_back(f.name + "_coded");
      header.push_back("yhat");
      rsm::csv::write_row(o, header);
      for (std::size_t i = 0; i < path.points.size(); ++i) {
        std::vector<std::string> row{rsm::csv::format(path.distances[i])};
        for (double v : path.points[i].natural) row.push_back(rsm::csv::format(v));
        for (double v : path.points[i].coded) row.push_back(rsm::csv::format(v));
        row.push_back(rsm::csv::format(m.predict(path.points[i].coded)));
        rsm::csv::write_row(o, row);
      }
      emit(out_path, o.str());
    } else if (*canon) {
      const auto m = load_model(model_path);
      const auto a = rsm::stationary_point(m);
      const auto names = m.design.factor_names();
      emit(out_path, rsm::canonical_to_json(a, names).dump(2) + "\n");
      if (!text_path.empty()) emit(text_path, rsm::canonical_text(a, names));
    } else if (*boot) {
      const auto m = load_model(model_path);
      rsm::BootstrapOptions bo;
      bo.threads = threads;
      bo.scaling = scaling == "none" ? rsm::ResidualScaling::none : rsm::ResidualScaling::df_corrected;
      const auto r = rsm::bootstrap_stationary(m, reps, boot_seed, bo);
      const auto names = m.design.factor_names();
      emit(out_path, rsm::bootstrap_to_json(r, names).dump(2) + "\n");
      if (!samples_path.empty()) {
        std::ostringstream o;
        std::vector<std::string> header{"replication"};
        for (const auto& n : names) header.push_back(n);
        rsm::csv::write_row(o, header);
        for (Eigen::Index i = 0; i < r.stationary_samples.rows(); ++i) {
          std::vector<std::string> row{std::to_string(r.replication_index[static_cast<std::size_t>(i)])};
          for (Eigen::Index j = 0; j < r.stationary_samples.cols(); ++j) row.push_back(rsm::csv::format(r.stationary_samples(i, j)));
          rsm::csv::write_row(o, row);
        }
        emit(samples_path, o.str());
      }
    } else if (*metrics) {
      if (*m_ioh) {
        std::map<std::string, double> area_map;
        if (!areas.empty()) {
          auto in = open_in(areas);
          area_map = rsm::read_zone_areas(in);
        }
        auto zin = open_in(zones);
        const auto series = rsm::read_zone_series(zin, area_map);
        auto oin = open_in(outdoor);
        const auto out = rsm::read_outdoor_series(oin);
        rsm::AdaptiveComfortParams params;
        params.alpha = alpha_pm;
        std::cout << percent(rsm::ioh(series, out, params));
      } else {
        const auto grid = load_grid(lux, sensors, zone);
        if (metrics->got_subcommand("udi")) std::cout << percent(rsm::udi(grid, low, high));
        if (metrics->got_subcommand("da")) std::cout << percent(rsm::da(grid, threshold));
        if (metrics->got_subcommand("cda")) std::cout << percent(rsm::cda(grid, threshold));
        if (metrics->got_subcommand("sda")) std::cout << percent(rsm::sda(grid, threshold, fraction));
      }
    } else if (*run) {
      rsm::CampaignConfig cfg =
          config_path.empty() ? rsm::CampaignConfig::housing_default() : rsm::CampaignConfig::load(config_path);
      if (run_seed) cfg.seed = *run_seed;
      if (!evaluator.empty()) cfg.evaluator["kind"] = evaluator;
      rsm::CampaignOptions opt;
      opt.workdir = workdir;
      opt.resume = resume;
      opt.stop_after_stages = stop_after;
      auto ev = rsm::make_evaluator(cfg, opt.workdir);
      const auto state = rsm::run_campaign(cfg, *ev, opt);
      std::cout << "campaign " << state.status() << ": " << state.total_evaluations() << " evaluations";
      if (state.status() == "completed") {
        const auto& r = state.result();
        std::cout << ", " << r.at("classification").get<std::string>() << " at";
        for (const auto& [name, v] : r.at("stationary_natural").items()) {
          std::cout << " " << name << "=" << rsm::csv::format(v.get<double>());
        }
        std::cout << ", confirmation D=" << rsm::csv::format(r.at("confirmation_D").get<double>());
      }
      std::cout << "\n";
    }
  } catch (const rsm::CampaignEvaluationError& e) {
    std::cerr << "rsm: evaluation failed: " << e.what() << "\n";
    return kExitEvaluation;
  } catch (const rsm::EvaluationTimeout& e) {
    std::cerr << "rsm: evaluation failed: " << e.what() << "\n";
    return kExitEvaluation;
  } catch (const rsm::MalformedResponseError& e) {
    std::cerr << "rsm: evaluation failed: " << e.what() << "\n";
    return kExitEvaluation;
  } catch (const rsm::InvalidArgument& e) {
    std::cerr << "rsm: " << e.what() << "\n";
    return kExitValidation;
  } catch (const rsm::InvalidInput& e) {
    std::cerr << "rsm: " << e.what() << "\n";
    return kExitValidation;
  } catch (const rsm::SchemaError& e) {
    std::cerr << "rsm: " << e.what() << "\n";
    return kExitValidation;
  } catch (const rsm::RankDeficientError& e) {
    std::cerr << "rsm: " << e.what() << "\n";
    return kExitValidation;
  } catch (const rsm::Error& e) {
    std::cerr << "rsm: " << e.what() << "\n";
    return kExitAnalysis;
  } catch (const std::exception& e) {
    std::cerr << "rsm: " << e.what() << "\n";
    return kExitAnalysis;
  }
  return 0;
}
