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

#include "rsm/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <thread>

#include <Eigen/QR>

#include "rsm/canonical.hpp"
#include "rsm/errors.hpp"
#include "rsm/random.hpp"

namespace rsm {
namespace {

// Stationary point of y = b0 + b'x + x'Bx, or nullopt when B is singular.
std::optional<Eigen::VectorXd> solve_stationary(const Eigen::MatrixXd& big_b, const Eigen::VectorXd& b) {
  const auto eig = jacobi_eigen(big_b);
  const double max_abs = eig.values.cwiseAbs().maxCoeff();
  const double min_abs = eig.values.cwiseAbs().minCoeff();
  if (max_abs == 0.0 || min_abs * 1e12 < max_abs) return std::nullopt;
  const Eigen::VectorXd proj = eig.vectors.transpose() * b;
  return Eigen::VectorXd(-0.5 * eig.vectors * proj.cwiseQuotient(eig.values));
}

double axial_radius(const Design& design) {
  double r = 0.0;
  for (const auto& run : design.runs) {
    if (run.type != PointType::axial) continue;
    double s = 0.0;
    for (double c : run.coded) s += c * c;
    r = std::max(r, std::sqrt(s));
  }
  return r > 0.0 ? r : 1.0;
}

}  // namespace

double quantile(std::span<const double> samples, double q) {
  if (samples.empty()) throw InvalidArgument("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("quantile level must be in [0, 1]");
  std::vector<double> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end());
  const double h = (static_cast<double>(s.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, s.size() - 1);
  return s[lo] + (h - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

Interval percentile_ci(std::span<const double> samples, double level) {
  if (!(level >= 0.0 && level < 1.0)) throw InvalidArgument("CI level must be in [0, 1)");
  const double tail = 0.5 * (1.0 - level);
  return Interval{quantile(samples, tail), quantile(samples, 1.0 - tail)};
}

BootstrapResult bootstrap_stationary(const FittedModel& model, int replications, std::uint64_t seed,
                                     const BootstrapOptions& options) {
  if (replications < 1) throw InvalidArgument("bootstrap needs at least one replication");
  if (model.order != ModelOrder::second) throw InvalidArgument("bootstrap needs a second-order model");
  if (model.df_residual < 1) {
    throw InvalidArgument("bootstrap needs at least one residual degree of freedom");
  }
  const auto coded = model.design.coded_matrix();
  const Eigen::MatrixXd x = model_matrix(coded, model.terms);
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  const int n = model.n();
  const int k = model.k();
  const double scale = options.scaling == ResidualScaling::df_corrected
                           ? std::sqrt(static_cast<double>(n) / model.df_residual)
                           : 1.0;
  const Eigen::VectorXd residuals = model.residuals * scale;
  const double limit = options.max_radius_factor * axial_radius(model.design);

  // Template model reused to map coefficients onto (b, B).
  FittedModel shape;
  shape.order = model.order;
  shape.terms = model.terms;
  shape.design.factors = model.design.factors;

  std::vector<std::optional<std::vector<double>>> per_rep(static_cast<std::size_t>(replications));
  auto run_range = [&](int begin, int end) {
    FittedModel local = shape;
    Eigen::VectorXd y_star(n);
    for (int r = begin; r < end; ++r) {
      if (model.exact_fit) {
        // Every resample of zero residuals reproduces the original data.
        local.coefficients = model.coefficients;
      } else {
        SplitMix64 rng(substream_seed(seed, static_cast<std::uint64_t>(r)));
        for (int i = 0; i < n; ++i) {
          y_star(i) = model.fitted(i) + residuals(static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(n))));
        }
        local.coefficients = qr.solve(y_star);
      }
      const auto xs = solve_stationary(local.quadratic_matrix(), local.linear_coefficients());
      if (!xs || !xs->allFinite() || xs->norm() > limit) continue;
      std::vector<double> c(xs->data(), xs->data() + k);
      per_rep[static_cast<std::size_t>(r)] = code_to_natural(model.design.factors, c);
    }
  };

  const int threads = std::clamp(options.threads, 1, replications);
  if (threads == 1) {
    run_range(0, replications);
  } else {
    std::vector<std::jthread> pool;
    const int chunk = (replications + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const int begin = t * chunk;
      const int end = std::min(replications, begin + chunk);
      if (begin < end) pool.emplace_back(run_range, begin, end);
    }
  }

  BootstrapResult out;
  out.replications = replications;
  out.level = options.level;
  for (int r = 0; r < replications; ++r) {
    if (per_rep[static_cast<std::size_t>(r)]) out.replication_index.push_back(r);
  }
  out.n_failed = replications - static_cast<int>(out.replication_index.size());
  if (out.replication_index.empty()) {
    throw DegenerateBootstrapError("every bootstrap replication failed (singular or divergent refit)");
  }
  out.stationary_samples.resize(static_cast<Eigen::Index>(out.replication_index.size()), k);
  for (std::size_t row = 0; row < out.replication_index.size(); ++row) {
    const auto& s = *per_rep[static_cast<std::size_t>(out.replication_index[row])];
    for (int j = 0; j < k; ++j) out.stationary_samples(static_cast<Eigen::Index>(row), j) = s[static_cast<std::size_t>(j)];
  }
  for (int j = 0; j < k; ++j) {
    const Eigen::VectorXd col = out.stationary_samples.col(j);
    out.ci.push_back(percentile_ci(std::span<const double>(col.data(), static_cast<std::size_t>(col.size())),
                                   options.level));
  }
  if (const auto xs = solve_stationary(model.quadratic_matrix(), model.linear_coefficients())) {
    std::vector<double> c(xs->data(), xs->data() + k);
    out.point_estimate = code_to_natural(model.design.factors, c);
  }
  return out;
}

}  // namespace rsm
