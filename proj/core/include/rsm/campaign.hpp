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

#ifndef RSM_CAMPAIGN_HPP_
#define RSM_CAMPAIGN_HPP_

// Sequential optimization campaign:
//   screening -> (fo -> ascent)* -> fo -> ccd -> canonical -> bootstrap
// The state is written to <workdir>/state.json after every stage. Resuming
// reuses the responses of completed stages and recomputes everything else,
// so an interrupted and an uninterrupted run end in the same state.

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rsm/bootstrap.hpp"
#include "rsm/designs.hpp"
#include "rsm/desirability.hpp"
#include "rsm/errors.hpp"
#include "rsm/evaluator.hpp"
#include "rsm/report.hpp"

namespace rsm {

// An evaluation needed by the campaign failed; the state on disk is resumable.
class CampaignEvaluationError : public Error {
 public:
  using Error::Error;
};

struct ResponseGoal {
  std::string name;
  DesirabilitySpec spec;
  bool auto_upper = false;  // U taken from the screening maximum
  bool auto_lower = false;  // L taken from the screening minimum
};

struct TieGroup {
  std::string name;
  std::vector<std::string> members;
};

struct InactiveSetting {
  double mean = 0.0;
  double sd = 0.0;
};

enum class ScreeningRule { both, either, stepwise, lasso };

struct CampaignConfig {
  std::uint64_t seed = 1;
  std::vector<Factor> factors;  // screening box, or the RSM factors when screening is off
  std::vector<ResponseGoal> responses;

  bool screening = true;
  int fraction = 2;
  std::vector<std::string> generators;  // empty: default generators
  ScreeningRule rule = ScreeningRule::both;
  int lasso_folds = 3;
  std::vector<TieGroup> ties;
  std::vector<std::string> forced_active;  // overrides the screening decision when set
  std::map<std::string, InactiveSetting> inactive;

  std::map<std::string, double> center;      // RSM start center, natural units
  std::map<std::string, double> half_range;  // RSM design half ranges
  int n_center = 3;
  int max_ascent_cycles = 5;
  double adequacy_f_p = 0.05;
  double adequacy_lof_p = 0.05;
  std::vector<std::optional<double>> recenter_distance;  // manual override per ascent cycle
  AlphaMode alpha_mode = AlphaMode::rotatable;
  double custom_alpha = 0.0;

  int bootstrap_replications = 1000;
  std::uint64_t bootstrap_seed = 123;
  int bootstrap_threads = 1;
  ResidualScaling residual_scaling = ResidualScaling::df_corrected;

  int contour_grid = 41;
  Json evaluator = Json::object();

  static CampaignConfig from_json(const Json& j);
  static CampaignConfig load(const std::filesystem::path& path);
  // Eight-factor housing layout on the surrogate; desirability limits come
  // from the screening outputs and re-centering is fully automatic.
  static CampaignConfig housing_default();
  Json to_json() const;
};

struct CampaignOptions {
  std::filesystem::path workdir;
  bool resume = false;
  // Stop cleanly after this many stages have completed (state "interrupted").
  std::optional<int> stop_after_stages;
  bool write_artifacts = true;
};

struct CampaignState {
  Json doc;

  const Json& stages() const { return doc.at("stages"); }
  std::string status() const { return doc.value("status", std::string()); }
  int total_evaluations() const;
  // Evaluations per evaluating stage, in stage order.
  std::vector<int> stage_run_counts() const;
  const Json& result() const { return doc.at("result"); }
  // The persisted document without its "timestamps" field.
  Json without_timestamps() const;

  static CampaignState load(const std::filesystem::path& path);
};

std::unique_ptr<Evaluator> make_evaluator(const CampaignConfig& config, const std::filesystem::path& workdir);

CampaignState run_campaign(const CampaignConfig& config, Evaluator& evaluator, const CampaignOptions& options);

// Checks that the stage kinds follow the campaign grammar; throws Error otherwise.
void check_stage_grammar(const std::vector<std::string>& kinds);

}  // namespace rsm

#endif  // RSM_CAMPAIGN_HPP_
