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

#ifndef RSM_EVALUATOR_HPP_
#define RSM_EVALUATOR_HPP_

// Response evaluation back ends: an analytic surrogate and a CSV batch
// round trip through an external program.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rsm/designs.hpp"

namespace rsm {

struct EvaluationRequest {
  Design design;                       // natural coordinates are what gets evaluated
  std::vector<std::string> responses;  // requested response names
  std::string batch;                   // stage label, also seeds surrogate noise
};

struct RunResult {
  int run_id = 0;
  std::vector<double> values;           // in request response order; NaN when rejected
  std::optional<std::string> rejected;  // reason, when the run could not be evaluated
};

struct EvaluationResult {
  std::vector<std::string> responses;
  std::vector<RunResult> runs;  // one per run id, ascending

  const RunResult& at(int run_id) const;
  // Values of one response in ascending run-id order.
  std::vector<double> column(const std::string& response) const;
  bool all_accepted() const;
  std::vector<int> rejected_ids() const;
};

class Evaluator {
 public:
  virtual ~Evaluator() = default;
  virtual EvaluationResult evaluate(const EvaluationRequest& request) = 0;
  virtual std::string name() const = 0;
};

// y = c + g'u + u'Qu, u_i = (v_i - center_i) / scale_i, with v_i the mean of
// the natural values of the factors bound to variable i.
struct SurrogateVariable {
  std::string name;
  std::vector<std::string> factors;
  double center = 0.0;
  double scale = 1.0;
  std::optional<double> min;  // runs outside [min, max] are rejected
  std::optional<double> max;
};

struct SurrogateResponse {
  std::string name;
  double constant = 0.0;
  Eigen::VectorXd linear;     // empty means zero
  Eigen::MatrixXd quadratic;  // symmetric
  double noise_sd = 0.0;
};

struct SurrogateSpec {
  std::vector<SurrogateVariable> variables;
  std::vector<SurrogateResponse> responses;
  std::uint64_t noise_seed = 0;

  void validate() const;
  // Noiseless IOH / UDI fixture over factors overhang, wwr_west, wwr_south.
  static SurrogateSpec housing();
  // Same surfaces bound to the eight-factor screening layout:
  // overhang = mean(overhang_south, overhang_west).
  static SurrogateSpec housing_screening();
  // Analytic optimum of the fixture, natural (overhang, wwr_west, wwr_south).
  static std::vector<double> housing_center();
};

class SurrogateEvaluator final : public Evaluator {
 public:
  explicit SurrogateEvaluator(SurrogateSpec spec, int threads = 1);
  EvaluationResult evaluate(const EvaluationRequest& request) override;
  std::string name() const override { return "surrogate"; }
  const SurrogateSpec& spec() const { return spec_; }

  // Noiseless response values at surrogate-variable coordinates.
  std::vector<double> exact(const std::vector<double>& variables) const;

 private:
  SurrogateSpec spec_;
  int threads_;
};

struct CsvEvaluatorOptions {
  std::filesystem::path workdir;  // RSM_EVALUATOR_WORKDIR overrides when set
  std::chrono::milliseconds poll_interval{200};
  std::chrono::milliseconds timeout{std::chrono::hours(24)};
  // Optional shell command run inside the batch directory after requests.csv
  // is written, e.g. a script that produces responses.csv.
  std::string command;
};

// Writes <workdir>[/<batch>]/requests.csv and waits for responses.csv with
// columns run_id,<responses...>. An existing responses.csv is consumed as is.
class CsvBatchEvaluator final : public Evaluator {
 public:
  explicit CsvBatchEvaluator(CsvEvaluatorOptions options);
  EvaluationResult evaluate(const EvaluationRequest& request) override;
  std::string name() const override { return "csv"; }
  std::filesystem::path batch_dir(const std::string& batch) const;

 private:
  CsvEvaluatorOptions options_;
};

// Parses a responses table against the request; throws MalformedResponseError.
EvaluationResult parse_responses(std::istream& in, const EvaluationRequest& request);

}  // namespace rsm

#endif  // RSM_EVALUATOR_HPP_
