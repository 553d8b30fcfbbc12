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

#include "rsm/ascent.hpp"

#include <cmath>

#include "rsm/errors.hpp"

namespace rsm {
namespace {

std::vector<double> grid(double from, double to, double step) {
  std::vector<double> g;
  const int count = static_cast<int>(std::lround((to - from) / step)) + 1;
  for (int i = 0; i < count; ++i) g.push_back(from + step * i);
  return g;
}

}  // namespace

std::vector<double> default_distance_grid() { return grid(0.5, 6.0, 0.5); }
std::vector<double> extended_distance_grid() { return grid(6.5, 12.0, 0.5); }

Design AscentPath::as_design() const {
  Design d;
  d.factors = factors;
  d.runs = points;
  return d;
}

AscentPath steepest_path(const FittedModel& fo_model, std::span<const double> distances) {
  if (fo_model.order != ModelOrder::first) {
    throw InvalidArgument("steepest ascent needs a first-order model");
  }
  const Eigen::VectorXd b = fo_model.linear_coefficients();
  const double norm = b.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw NoDirectionError("first-order model has an all-zero gradient");
  }
  AscentPath path;
  path.factors = fo_model.design.factors;
  path.direction = b / norm;
  path.distances.assign(distances.begin(), distances.end());
  const auto k = static_cast<std::size_t>(b.size());
  for (std::size_t r = 0; r < distances.size(); ++r) {
    DesignPoint pt;
    pt.run_id = static_cast<int>(r) + 1;
    pt.type = PointType::path;
    pt.coded.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
      pt.coded[i] = distances[r] * path.direction(static_cast<Eigen::Index>(i));
    }
    pt.natural = code_to_natural(path.factors, pt.coded);
    path.points.push_back(std::move(pt));
  }
  return path;
}

Recenter select_recenter(const AscentPath& path, std::span<const double> d_values) {
  if (path.points.empty()) throw InvalidArgument("empty ascent path");
  if (d_values.size() != path.points.size()) {
    throw InvalidArgument("D values are not aligned with the path points");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < d_values.size(); ++i) {
    const bool higher = d_values[i] > d_values[best];
    const bool tie_nearer = d_values[i] == d_values[best] && path.distances[i] < path.distances[best];
    if (higher || tie_nearer) best = i;
  }
  Recenter r;
  r.index = best;
  r.distance = path.distances[best];
  r.coded = path.points[best].coded;
  r.natural_center = path.points[best].natural;
  return r;
}

}  // namespace rsm
