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

#ifndef RSM_REPORT_HPP_
#define RSM_REPORT_HPP_

// JSON and plain-text renderings of designs, fits and analyses. Non-finite
// numbers are written as JSON null.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rsm/ascent.hpp"
#include "rsm/bootstrap.hpp"
#include "rsm/canonical.hpp"
#include "rsm/designs.hpp"
#include "rsm/desirability.hpp"
#include "rsm/modelfit.hpp"
#include "rsm/screening.hpp"

namespace rsm {

using Json = nlohmann::json;

Json number_json(double v);
double json_number(const Json& j);

Json factors_to_json(const std::vector<Factor>& factors);
std::vector<Factor> factors_from_json(const Json& j);

Json design_to_json(const Design& design);
Design design_from_json(const Json& j);

Json desirability_to_json(const DesirabilitySpec& spec);
DesirabilitySpec desirability_from_json(const Json& j);

Json anova_to_json(const AnovaTable& table);
// Self-contained: factors, coded design, response, terms, estimates, ANOVA.
Json model_to_json(const FittedModel& model);
// Refits the model described by model_to_json output.
FittedModel model_from_json(const Json& j);

Json screening_to_json(const ScreeningResult& result);
Json canonical_to_json(const CanonicalAnalysis& analysis, const std::vector<std::string>& factor_names);
Json path_to_json(const AscentPath& path);
Json bootstrap_to_json(const BootstrapResult& result, const std::vector<std::string>& factor_names);

std::string model_text(const FittedModel& model);
std::string screening_text(const ScreeningResult& result);
std::string canonical_text(const CanonicalAnalysis& analysis, const std::vector<std::string>& factor_names);
std::string bootstrap_text(const BootstrapResult& result, const std::vector<std::string>& factor_names);

}  // namespace rsm

#endif  // RSM_REPORT_HPP_
