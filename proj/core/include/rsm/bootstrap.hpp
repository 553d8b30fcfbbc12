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

#ifndef RSM_BOOTSTRAP_HPP_
#define RSM_BOOTSTRAP_HPP_

// Residual-resampling bootstrap of a second-order model's stationary point.
//
// Replication r draws its residual indices from SplitMix64 seeded with
// substream_seed(seed, r), so the sample set does not depend on the order or
// the thread in which replications run.

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "rsm/modelfit.hpp"

namespace rsm {

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

// Empirical quantiles at (1-level)/2 and 1-(1-level)/2, linear interpolation
// between order statistics. level = 0 collapses to the median.
Interval percentile_ci(std::span<const double> samples, double level);
// Single linearly interpolated quantile, q in [0, 1].
double quantile(std::span<const double> samples, double q);

enum class ResidualScaling {
  none,         // resample raw residuals
  df_corrected  // inflate residuals by sqrt(n / (n - p))
};

struct BootstrapOptions {
  int threads = 1;
  // Replications whose stationary point lies beyond this multiple of the
  // design's axial radius are counted as failed.
  double max_radius_factor = 3.0;
  ResidualScaling scaling = ResidualScaling::df_corrected;
  double level = 0.95;
};

struct BootstrapResult {
  int replications = 0;
  int n_failed = 0;
  Eigen::MatrixXd stationary_samples;  // successful replications x factors, natural units
  std::vector<int> replication_index;  // replication id of each sample row
  std::vector<Interval> ci;            // per factor, at options.level
  std::vector<double> point_estimate;  // stationary point of the original fit, natural units
  double level = 0.95;
};

BootstrapResult bootstrap_stationary(const FittedModel& so_model, int replications,
                                     std::uint64_t seed, const BootstrapOptions& options = {});

}  // namespace rsm

#endif  // RSM_BOOTSTRAP_HPP_
