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

#ifndef RSM_ASCENT_HPP_
#define RSM_ASCENT_HPP_

#include <span>
#include <vector>

#include <Eigen/Core>

#include "rsm/designs.hpp"
#include "rsm/modelfit.hpp"

namespace rsm {

// Ray from the design center along the normalized FO gradient, in coded units.
struct AscentPath {
  std::vector<Factor> factors;
  Eigen::VectorXd direction;  // unit length
  std::vector<double> distances;
  std::vector<DesignPoint> points;  // point_type == path, one per distance

  // The path as a Design over `factors` (for evaluators and CSV output).
  Design as_design() const;
};

// 0.5, 1.0, ..., 6.0
std::vector<double> default_distance_grid();
// 6.5, 7.0, ..., 12.0
std::vector<double> extended_distance_grid();

AscentPath steepest_path(const FittedModel& fo_model, std::span<const double> distances);

struct Recenter {
  std::size_t index = 0;
  double distance = 0.0;
  std::vector<double> coded;
  std::vector<double> natural_center;
};

// Distance with the largest D; ties go to the smallest distance.
Recenter select_recenter(const AscentPath& path, std::span<const double> d_values);

}  // namespace rsm

#endif  // RSM_ASCENT_HPP_
