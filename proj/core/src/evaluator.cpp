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

#include "rsm/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "rsm/csv.hpp"
#include "rsm/errors.hpp"
#include "rsm/random.hpp"

namespace rsm {
namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string join_ids(const std::vector<int>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? ", " : "") + std::to_string(ids[i]);
  return out;
}

void check_request(const EvaluationRequest& request) {
  if (request.responses.empty()) throw InvalidArgument("evaluation request names no responses");
  std::set<int> ids;
  for (const auto& run : request.design.runs) {
    if (!ids.insert(run.run_id).second) {
      throw InvalidArgument("duplicate run_id " + std::to_string(run.run_id) + " in evaluation request");
    }
    if (run.natural.size() != request.design.dimension()) {
      throw InvalidArgument("run " + std::to_string(run.run_id) + " has the wrong number of coordinates");
    }
  }
}

SurrogateSpec housing_with(std::vector<std::string> overhang) {
  SurrogateSpec s;
  s.variables = {
      {"x1", std::move(overhang), 3.78, 1.5, std::nullopt, std::nullopt},
      {"x2", {"wwr_west"}, 3.76, 10.0, std::nullopt, std::nullopt},
      {"x3", {"wwr_south"}, 29.34, 12.0, std::nullopt, std::nullopt},
  };
  SurrogateResponse ioh{"IOH", 8.3, Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Zero(3, 3), 0.0};
  ioh.quadratic.diagonal() << 0.9, 0.6, 0.5;
  ioh.quadratic(0, 2) = ioh.quadratic(2, 0) = 0.075;
  SurrogateResponse udi{"UDI", 79.7, Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Zero(3, 3), 0.0};
  udi.quadratic.diagonal() << -1.2, -1.0, -0.8;
  s.responses = {ioh, udi};
  return s;
}

}  // namespace

const RunResult& EvaluationResult::at(int run_id) const {
  auto it = std::lower_bound(runs.begin(), runs.end(), run_id,
                             [](const RunResult& r, int id) { return r.run_id < id; });
  if (it == runs.end() || it->run_id != run_id) {
    throw InvalidArgument("no result for run " + std::to_string(run_id));
  }
  return *it;
}

std::vector<double> EvaluationResult::column(const std::string& response) const {
  auto it = std::find(responses.begin(), responses.end(), response);
  if (it == responses.end()) throw InvalidArgument("unknown response '" + response + "'");
  const auto j = static_cast<std::size_t>(it - responses.begin());
  std::vector<double> out;
  out.reserve(runs.size());
  for (const auto& r : runs) out.push_back(r.values[j]);
  return out;
}

bool EvaluationResult::all_accepted() const {
  return std::none_of(runs.begin(), runs.end(), [](const RunResult& r) { return r.rejected.has_value(); });
}

std::vector<int> EvaluationResult::rejected_ids() const {
  std::vector<int> ids;
  for (const auto& r : runs) {
    if (r.rejected) ids.push_back(r.run_id);
  }
  return ids;
}

void SurrogateSpec::validate() const {
  const auto k = static_cast<Eigen::Index>(variables.size());
  if (k == 0) throw InvalidArgument("surrogate has no variables");
  for (const auto& v : variables) {
    if (v.factors.empty()) throw InvalidArgument("surrogate variable '" + v.name + "' binds no factor");
    if (!(v.scale > 0.0)) throw InvalidArgument("surrogate variable '" + v.name + "' needs a positive scale");
    if (v.min && v.max && *v.min > *v.max) {
      throw InvalidArgument("surrogate variable '" + v.name + "' has min > max");
    }
  }
  for (const auto& r : responses) {
    if (r.quadratic.rows() != k || r.quadratic.cols() != k) {
      throw InvalidArgument("surrogate response '" + r.name + "' quadratic form has the wrong size");
    }
    if (r.linear.size() != 0 && r.linear.size() != k) {
      throw InvalidArgument("surrogate response '" + r.name + "' linear term has the wrong size");
    }
    if (!(r.noise_sd >= 0.0)) throw InvalidArgument("surrogate noise sd must be nonnegative");
  }
}

SurrogateSpec SurrogateSpec::housing() { return housing_with({"overhang"}); }

SurrogateSpec SurrogateSpec::housing_screening() {
  return housing_with({"overhang_south", "overhang_west"});
}

std::vector<double> SurrogateSpec::housing_center() { return {3.78, 3.76, 29.34}; }

SurrogateEvaluator::SurrogateEvaluator(SurrogateSpec spec, int threads)
    : spec_(std::move(spec)), threads_(std::max(1, threads)) {
  spec_.validate();
}

std::vector<double> SurrogateEvaluator::exact(const std::vector<double>& v) const {
  const auto k = static_cast<Eigen::Index>(spec_.variables.size());
  if (static_cast<Eigen::Index>(v.size()) != k) throw InvalidArgument("surrogate expects one value per variable");
  Eigen::VectorXd u(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto& var = spec_.variables[static_cast<std::size_t>(i)];
    u(i) = (v[static_cast<std::size_t>(i)] - var.center) / var.scale;
  }
  std::vector<double> out;
  for (const auto& r : spec_.responses) {
    double y = r.constant + u.dot(r.quadratic * u);
    if (r.linear.size() == k) y += r.linear.dot(u);
    out.push_back(y);
  }
  return out;
}

EvaluationResult SurrogateEvaluator::evaluate(const EvaluationRequest& request) {
  check_request(request);
  const auto names = request.design.factor_names();
  // Variable -> column indices in the request design.
  std::vector<std::vector<std::size_t>> bind;
  for (const auto& var : spec_.variables) {
    std::vector<std::size_t> cols;
    for (const auto& f : var.factors) {
      auto it = std::find(names.begin(), names.end(), f);
      if (it == names.end()) {
        throw InvalidArgument("surrogate variable '" + var.name + "' needs factor '" + f + "'");
      }
      cols.push_back(static_cast<std::size_t>(it - names.begin()));
    }
    bind.push_back(std::move(cols));
  }
  std::vector<std::size_t> pick;
  for (const auto& name : request.responses) {
    auto it = std::find_if(spec_.responses.begin(), spec_.responses.end(),
                           [&](const SurrogateResponse& r) { return r.name == name; });
    if (it == spec_.responses.end()) throw InvalidArgument("surrogate does not provide response '" + name + "'");
    pick.push_back(static_cast<std::size_t>(it - spec_.responses.begin()));
  }
  const std::uint64_t batch_seed = substream_seed(spec_.noise_seed, fnv1a(request.batch));

  EvaluationResult out;
  out.responses = request.responses;
  out.runs.resize(request.design.size());
  auto eval_run = [&](std::size_t i) {
    const auto& run = request.design.runs[i];
    RunResult& rr = out.runs[i];
    rr.run_id = run.run_id;
    std::vector<double> v;
    for (std::size_t j = 0; j < bind.size(); ++j) {
      double s = 0.0;
      for (auto c : bind[j]) s += run.natural[c];
      const double value = s / static_cast<double>(bind[j].size());
      const auto& var = spec_.variables[j];
      if ((var.min && value < *var.min) || (var.max && value > *var.max)) {
        std::ostringstream why;
        why << var.name << " = " << csv::format(value) << " outside ["
            << (var.min ? csv::format(*var.min) : "-inf") << ", "
            << (var.max ? csv::format(*var.max) : "inf") << "]";
        rr.rejected = why.str();
      }
      v.push_back(value);
    }
    if (rr.rejected) {
      rr.values.assign(pick.size(), std::nan(""));
      return;
    }
    const auto y = exact(v);
    const auto run_seed = substream_seed(batch_seed, static_cast<std::uint64_t>(run.run_id));
    for (auto r : pick) {
      double value = y[r];
      if (spec_.responses[r].noise_sd > 0.0) {
        SplitMix64 rng(substream_seed(run_seed, r));
        value += spec_.responses[r].noise_sd * rng.normal();
      }
      rr.values.push_back(value);
    }
  };
  const auto n = request.design.size();
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(threads_), std::max<std::size_t>(n, 1));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) eval_run(i);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < n; i += threads) eval_run(i);
      });
    }
  }
  std::sort(out.runs.begin(), out.runs.end(), [](const RunResult& a, const RunResult& b) { return a.run_id < b.run_id; });
  return out;
}

CsvBatchEvaluator::CsvBatchEvaluator(CsvEvaluatorOptions options) : options_(std::move(options)) {
  if (const char* env = std::getenv("RSM_EVALUATOR_WORKDIR"); env && *env) options_.workdir = env;
  if (options_.workdir.empty()) throw InvalidArgument("csv evaluator needs a working directory");
  if (options_.poll_interval.count() <= 0) throw InvalidArgument("poll interval must be positive");
}

std::filesystem::path CsvBatchEvaluator::batch_dir(const std::string& batch) const {
  return batch.empty() ? options_.workdir : options_.workdir / batch;
}

EvaluationResult parse_responses(std::istream& in, const EvaluationRequest& request) {
  csv::Table t;
  try {
    t = csv::read(in);
  } catch (const Error& e) {
    throw MalformedResponseError(std::string("responses.csv: ") + e.what(), {});
  }
  if (!t.has_column("run_id")) throw MalformedResponseError("responses.csv: missing column 'run_id'", {});
  const auto cid = t.column("run_id");
  std::vector<std::size_t> cols;
  for (const auto& r : request.responses) {
    if (!t.has_column(r)) throw MalformedResponseError("responses.csv: missing column '" + r + "'", {});
    cols.push_back(t.column(r));
  }
  std::map<int, std::vector<double>> got;
  std::set<int> wanted;
  for (const auto& run : request.design.runs) wanted.insert(run.run_id);
  for (std::size_t row = 0; row < t.rows.size(); ++row) {
    const std::string where = "responses.csv row " + std::to_string(row + 2);
    int id = 0;
    try {
      const double v = t.number(row, cid);
      if (v != std::floor(v)) throw SchemaError("not an integer");
      id = static_cast<int>(v);
    } catch (const SchemaError&) {
      throw MalformedResponseError(where + ": run_id '" + t.rows[row][cid] + "' is not an integer", {});
    }
    if (!wanted.count(id)) throw MalformedResponseError(where + ": unknown run_id " + std::to_string(id), {id});
    if (got.count(id)) throw MalformedResponseError(where + ": duplicate run_id " + std::to_string(id), {id});
    std::vector<double> values;
    for (std::size_t j = 0; j < cols.size(); ++j) {
      try {
        const double v = t.number(row, cols[j]);
        if (!std::isfinite(v)) throw SchemaError("not finite");
        values.push_back(v);
      } catch (const SchemaError&) {
        throw MalformedResponseError(where + " (run " + std::to_string(id) + "): non-numeric " +
                                         request.responses[j] + " '" + t.rows[row][cols[j]] + "'",
                                     {id});
      }
    }
    got[id] = std::move(values);
  }
  std::vector<int> missing;
  for (int id : wanted) {
    if (!got.count(id)) missing.push_back(id);
  }
  if (!missing.empty()) {
    throw MalformedResponseError("responses.csv is missing run_id " + join_ids(missing), missing);
  }
  EvaluationResult out;
  out.responses = request.responses;
  for (auto& [id, values] : got) out.runs.push_back(RunResult{id, std::move(values), std::nullopt});
  return out;
}

EvaluationResult CsvBatchEvaluator::evaluate(const EvaluationRequest& request) {
  check_request(request);
  namespace fs = std::filesystem;
  const auto dir = batch_dir(request.batch);
  fs::create_directories(dir);
  const auto requests = dir / "requests.csv";
  const auto responses = dir / "responses.csv";
  {
    const auto tmp = dir / "requests.csv.tmp";
    std::ofstream out(tmp);
    if (!out) throw InvalidInput("cannot write " + tmp.string());
    write_design_csv(out, request.design, false);
    out.close();
    fs::rename(tmp, requests);
  }
  if (!options_.command.empty() && !fs::exists(responses)) {
    const std::string cmd = "cd '" + dir.string() + "' && " + options_.command;
    const int status = std::system(cmd.c_str());
    if (status != 0) {
      throw InvalidInput("evaluator command failed with status " + std::to_string(status) + ": " + options_.command);
    }
  }
  const auto deadline = std::chrono::steady_clock::now() + options_.timeout;
  while (!fs::exists(responses)) {
    if (std::chrono::steady_clock::now() >= deadline) {
      throw EvaluationTimeout("timed out waiting for " + responses.string());
    }
    std::this_thread::sleep_for(options_.poll_interval);
  }
  std::ifstream in(responses, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_responses(buffer, request);
}

}  // namespace rsm
