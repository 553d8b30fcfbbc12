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

#ifndef RSM_DESIRABILITY_HPP_
#define RSM_DESIRABILITY_HPP_

// Derringer-Suich individual desirabilities and their geometric-mean
// composition. Intervals are closed: d is exactly 1 at the target and exactly
// 0 at the acceptability limit.

#include <span>
#include <string>
#include <vector>

namespace rsm {

enum class Goal { minimize, maximize, target };

std::string to_string(Goal goal);
Goal goal_from_string(const std::string& s);

struct DesirabilitySpec {
  Goal goal = Goal::minimize;
  double target = 0.0;
  double upper = 0.0;        // U: used by minimize and target
  double lower = 0.0;        // L: used by maximize and target
  double weight = 1.0;       // r for one-sided goals
  double weight_low = 1.0;   // r on [L, T] for target goals
  double weight_high = 1.0;  // r on [T, U] for target goals

  static DesirabilitySpec minimize(double target, double upper, double weight = 1.0);
  static DesirabilitySpec maximize(double target, double lower, double weight = 1.0);
  static DesirabilitySpec two_sided(double lower, double target, double upper,
                                    double weight_low = 1.0, double weight_high = 1.0);

  // Throws InvalidArgument on degenerate limits or non-positive weights.
  void validate() const;
};

double d_min(double y, const DesirabilitySpec& spec);
double d_max(double y, const DesirabilitySpec& spec);
double d_target(double y, const DesirabilitySpec& spec);
// Dispatches on spec.goal.
double desirability(double y, const DesirabilitySpec& spec);

// (d_1 * ... * d_m)^(1/m); 0 as soon as any d_i is 0.
double overall(std::span<const double> d);

struct OverallDesirability {
  std::vector<double> d;
  double D = 0.0;
};

OverallDesirability evaluate_desirability(std::span<const double> responses,
                                          std::span<const DesirabilitySpec> specs);

}  // namespace rsm

#endif  // RSM_DESIRABILITY_HPP_
