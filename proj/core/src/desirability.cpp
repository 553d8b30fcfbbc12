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

#include "rsm/desirability.hpp"

#include <cmath>

#include "rsm/errors.hpp"

namespace rsm {
namespace {

void require_finite(double y) {
  if (!std::isfinite(y)) throw InvalidArgument("desirability of a non-finite response");
}

void require_goal(const DesirabilitySpec& spec, Goal goal) {
  if (spec.goal != goal) {
    throw InvalidArgument("desirability spec goal is " + to_string(spec.goal) +
                          ", expected " + to_string(goal));
  }
}

double ramp(double num, double den, double r) {
  const double v = num / den;
  return r == 1.0 ? v : std::pow(v, r);
}

}  // namespace

std::string to_string(Goal goal) {
  switch (goal) {
    case Goal::minimize: return "minimize";
    case Goal::maximize: return "maximize";
    case Goal::target: return "target";
  }
  return "minimize";
}

Goal goal_from_string(const std::string& s) {
  if (s == "minimize" || s == "min") return Goal::minimize;
  if (s == "maximize" || s == "max") return Goal::maximize;
  if (s == "target") return Goal::target;
  throw InvalidArgument("unknown desirability goal '" + s + "'");
}

DesirabilitySpec DesirabilitySpec::minimize(double target, double upper, double weight) {
  DesirabilitySpec s;
  s.goal = Goal::minimize;
  s.target = target;
  s.upper = upper;
  s.weight = weight;
  return s;
}

DesirabilitySpec DesirabilitySpec::maximize(double target, double lower, double weight) {
  DesirabilitySpec s;
  s.goal = Goal::maximize;
  s.target = target;
  s.lower = lower;
  s.weight = weight;
  return s;
}

DesirabilitySpec DesirabilitySpec::two_sided(double lower, double target, double upper,
                                             double weight_low, double weight_high) {
  DesirabilitySpec s;
  s.goal = Goal::target;
  s.lower = lower;
  s.target = target;
  s.upper = upper;
  s.weight_low = weight_low;
  s.weight_high = weight_high;
  return s;
}

void DesirabilitySpec::validate() const {
  switch (goal) {
    case Goal::minimize:
      if (!(target < upper)) throw InvalidArgument("minimize desirability needs T < U");
      if (!(weight > 0.0)) throw InvalidArgument("desirability weight must be > 0");
      break;
    case Goal::maximize:
      if (!(lower < target)) throw InvalidArgument("maximize desirability needs L < T");
      if (!(weight > 0.0)) throw InvalidArgument("desirability weight must be > 0");
      break;
    case Goal::target:
      if (!(lower < target && target < upper)) {
        throw InvalidArgument("target desirability needs L < T < U");
      }
      if (!(weight_low > 0.0 && weight_high > 0.0)) {
        throw InvalidArgument("desirability weights must be > 0");
      }
      break;
  }
}

double d_min(double y, const DesirabilitySpec& spec) {
  require_goal(spec, Goal::minimize);
  spec.validate();
  require_finite(y);
  if (y < spec.target) return 1.0;
  if (y > spec.upper) return 0.0;
  return ramp(spec.upper - y, spec.upper - spec.target, spec.weight);
}

double d_max(double y, const DesirabilitySpec& spec) {
  require_goal(spec, Goal::maximize);
  spec.validate();
  require_finite(y);
  if (y < spec.lower) return 0.0;
  if (y > spec.target) return 1.0;
  return ramp(y - spec.lower, spec.target - spec.lower, spec.weight);
}

double d_target(double y, const DesirabilitySpec& spec) {
  require_goal(spec, Goal::target);
  spec.validate();
  require_finite(y);
  if (y < spec.lower || y > spec.upper) return 0.0;
  if (y <= spec.target) {
    return ramp(y - spec.lower, spec.target - spec.lower, spec.weight_low);
  }
  return ramp(spec.upper - y, spec.upper - spec.target, spec.weight_high);
}

double desirability(double y, const DesirabilitySpec& spec) {
  switch (spec.goal) {
    case Goal::minimize: return d_min(y, spec);
    case Goal::maximize: return d_max(y, spec);
    case Goal::target: return d_target(y, spec);
  }
  return 0.0;
}

double overall(std::span<const double> d) {
  if (d.empty()) throw InvalidArgument("overall desirability of an empty vector");
  double log_sum = 0.0;
  for (double v : d) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvalidArgument("individual desirabilities must lie in [0, 1]");
    }
    if (v == 0.0) return 0.0;
    log_sum += std::log(v);
  }
  return std::exp(log_sum / static_cast<double>(d.size()));
}

OverallDesirability evaluate_desirability(std::span<const double> responses,
                                          std::span<const DesirabilitySpec> specs) {
  if (responses.size() != specs.size()) {
    throw InvalidArgument("responses and desirability specs differ in length");
  }
  OverallDesirability out;
  out.d.reserve(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    out.d.push_back(desirability(responses[i], specs[i]));
  }
  out.D = overall(out.d);
  return out;
}

}  // namespace rsm
