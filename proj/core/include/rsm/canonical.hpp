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

#ifndef RSM_CANONICAL_HPP_
#define RSM_CANONICAL_HPP_

// Stationary point and canonical analysis of a second-order surface
//   y = b0 + b'x + x'Bx  =  y_s + sum_i lambda_i w_i^2,
// where lambda are the eigenvalues of B and w = V'(x - x_s).

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rsm/designs.hpp"
#include "rsm/modelfit.hpp"

namespace rsm {

enum class SurfaceKind { maximum, minimum, saddle, stationary_ridge, rising_ridge };

std::string to_string(SurfaceKind kind);

struct SymmetricEigen {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // columns, orthonormal; largest |component| positive
  int sweeps = 0;
};

// Cyclic Jacobi rotations until every off-diagonal entry is below
// `tolerance` times the Frobenius norm.
SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& symmetric, double tolerance = 1e-12,
                            int max_sweeps = 100);

struct CanonicalAnalysis {
  std::vector<double> stationary_coded;
  std::vector<double> stationary_natural;
  double y_hat_s = 0.0;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  SurfaceKind classification = SurfaceKind::saddle;
  bool in_region = false;
  double region_radius = 0.0;
  double ridge_threshold = 0.0;
};

// Relative ridge threshold: |lambda| <= kRidgeRelTol * max|lambda| counts as zero.
inline constexpr double kRidgeRelTol = 1e-3;

SurfaceKind classify(std::span<const double> eigenvalues, std::span<const double> x_s,
                     double region_radius);

// x_s = -1/2 B^-1 b. Throws RidgeSuspectedError when B is singular
// (condition number above 1e12). `region_radius` <= 0 selects the design's
// largest axial distance, or 1 when the design has no axial runs.
CanonicalAnalysis stationary_point(const FittedModel& so_model, double region_radius = 0.0);

// x_s +/- t v for each t, v the eigenvector with the smallest |lambda| (the
// first such canonical direction on ties). Returns -t points then +t points.
std::vector<DesignPoint> canonical_path(const CanonicalAnalysis& analysis, const FittedModel& model,
                                        std::span<const double> distances);

}  // namespace rsm

#endif  // RSM_CANONICAL_HPP_
