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

#include "rsm/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rsm/errors.hpp"

namespace rsm {

std::string to_string(SurfaceKind kind) {
  switch (kind) {
    case SurfaceKind::maximum: return "maximum";
    case SurfaceKind::minimum: return "minimum";
    case SurfaceKind::saddle: return "saddle";
    case SurfaceKind::stationary_ridge: return "stationary_ridge";
    case SurfaceKind::rising_ridge: return "rising_ridge";
  }
  return "saddle";
}

SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& symmetric, double tolerance, int max_sweeps) {
  const Eigen::Index n = symmetric.rows();
  if (symmetric.cols() != n) throw InvalidArgument("jacobi_eigen needs a square matrix");
  if ((symmetric - symmetric.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * (1.0 + symmetric.cwiseAbs().maxCoeff())) {
    throw InvalidArgument("jacobi_eigen needs a symmetric matrix");
  }
  Eigen::MatrixXd a = 0.5 * (symmetric + symmetric.transpose());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double scale = a.norm();
  SymmetricEigen out;

  auto off_norm = [&]() {
    double s = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) s += 2.0 * a(p, q) * a(p, q);
    }
    return std::sqrt(s);
  };

  while (out.sweeps < max_sweeps && off_norm() > tolerance * scale) {
    ++out.sweeps;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index r = 0; r < n; ++r) {
          const double arp = a(r, p), arq = a(r, q);
          a(r, p) = c * arp - s * arq;
          a(r, q) = s * arp + c * arq;
        }
        for (Eigen::Index r = 0; r < n; ++r) {
          const double apr = a(p, r), aqr = a(q, r);
          a(p, r) = c * apr - s * aqr;
          a(q, r) = s * apr + c * aqr;
        }
        a(p, q) = a(q, p) = 0.0;
        for (Eigen::Index r = 0; r < n; ++r) {
          const double vrp = v(r, p), vrq = v(r, q);
          v(r, p) = c * vrp - s * vrq;
          v(r, q) = s * vrp + c * vrq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) > a(j, j); });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const Eigen::Index src = order[static_cast<std::size_t>(c)];
    out.values(c) = a(src, src);
    Eigen::VectorXd col = v.col(src);
    Eigen::Index big = 0;
    for (Eigen::Index r = 1; r < n; ++r) {
      if (std::abs(col(r)) > std::abs(col(big)) + 1e-12) big = r;
    }
    if (col(big) < 0.0) col = -col;
    out.vectors.col(c) = col;
  }
  return out;
}

SurfaceKind classify(std::span<const double> eigenvalues, std::span<const double> x_s,
                     double region_radius) {
  double max_abs = 0.0;
  for (double l : eigenvalues) {
    if (!std::isfinite(l)) throw InvalidArgument("classify: non-finite eigenvalue");
    max_abs = std::max(max_abs, std::abs(l));
  }
  const double tau = kRidgeRelTol * max_abs;
  double norm2 = 0.0;
  for (double v : x_s) norm2 += v * v;
  const bool inside = std::sqrt(norm2) <= region_radius;
  bool any_small = max_abs == 0.0;
  bool all_neg = true, all_pos = true;
  for (double l : eigenvalues) {
    if (std::abs(l) <= tau) any_small = true;
    if (!(l < -tau)) all_neg = false;
    if (!(l > tau)) all_pos = false;
  }
  if (any_small) return inside ? SurfaceKind::stationary_ridge : SurfaceKind::rising_ridge;
  if (all_neg) return SurfaceKind::maximum;
  if (all_pos) return SurfaceKind::minimum;
  return SurfaceKind::saddle;
}

CanonicalAnalysis stationary_point(const FittedModel& model, double region_radius) {
  if (model.order != ModelOrder::second) {
    throw InvalidArgument("canonical analysis needs a second-order model");
  }
  const Eigen::MatrixXd big_b = model.quadratic_matrix();
  const Eigen::VectorXd b = model.linear_coefficients();
  const auto eig = jacobi_eigen(big_b);

  const double max_abs = eig.values.cwiseAbs().maxCoeff();
  Eigen::Index smallest = 0;
  for (Eigen::Index i = 1; i < eig.values.size(); ++i) {
    if (std::abs(eig.values(i)) < std::abs(eig.values(smallest))) smallest = i;
  }
  const double min_abs = std::abs(eig.values(smallest));
  if (max_abs == 0.0 || min_abs * 1e12 < max_abs) {
    const Eigen::VectorXd dir = eig.vectors.col(smallest);
    throw RidgeSuspectedError("quadratic coefficient matrix is singular; ridge suspected",
                              std::vector<double>(dir.data(), dir.data() + dir.size()));
  }

  // x_s = -1/2 V diag(1/lambda) V' b
  const Eigen::VectorXd proj = eig.vectors.transpose() * b;
  const Eigen::VectorXd xs = -0.5 * eig.vectors * proj.cwiseQuotient(eig.values);

  CanonicalAnalysis out;
  out.stationary_coded.assign(xs.data(), xs.data() + xs.size());
  out.stationary_natural = code_to_natural(model.design.factors, out.stationary_coded);
  out.y_hat_s = model.predict(out.stationary_coded);
  out.eigenvalues = eig.values;
  out.eigenvectors = eig.vectors;
  if (region_radius <= 0.0) {
    region_radius = 0.0;
    for (const auto& run : model.design.runs) {
      if (run.type != PointType::axial) continue;
      double r2 = 0.0;
      for (double c : run.coded) r2 += c * c;
      region_radius = std::max(region_radius, std::sqrt(r2));
    }
    if (region_radius == 0.0) region_radius = 1.0;
  }
  out.region_radius = region_radius;
  out.in_region = xs.norm() <= region_radius;
  out.ridge_threshold = kRidgeRelTol * max_abs;
  out.classification = classify(std::span<const double>(eig.values.data(), static_cast<std::size_t>(eig.values.size())),
                                out.stationary_coded, region_radius);
  return out;
}

std::vector<DesignPoint> canonical_path(const CanonicalAnalysis& analysis, const FittedModel& model,
                                        std::span<const double> distances) {
  const auto& lambda = analysis.eigenvalues;
  if (lambda.size() == 0) throw InvalidArgument("canonical_path: empty analysis");
  const double max_abs = lambda.cwiseAbs().maxCoeff();
  Eigen::Index pick = 0;
  for (Eigen::Index i = 1; i < lambda.size(); ++i) {
    if (std::abs(lambda(i)) < std::abs(lambda(pick)) - 1e-9 * max_abs) pick = i;
  }
  const Eigen::VectorXd v = analysis.eigenvectors.col(pick);
  std::vector<DesignPoint> points;
  int id = 1;
  for (double sign : {-1.0, 1.0}) {
    for (double t : distances) {
      DesignPoint pt;
      pt.run_id = id++;
      pt.type = PointType::path;
      pt.coded = analysis.stationary_coded;
      for (std::size_t i = 0; i < pt.coded.size(); ++i) {
        pt.coded[i] += sign * t * v(static_cast<Eigen::Index>(i));
      }
      pt.natural = code_to_natural(model.design.factors, pt.coded);
      points.push_back(std::move(pt));
    }
  }
  return points;
}

}  // namespace rsm
