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

// Reference implementations used only by the test suites. They avoid the
// library's code paths on purpose: plain loops, normal equations, Boost.Math.

#ifndef RSM_TESTS_ORACLES_HPP_
#define RSM_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

// Solves A z = r by Gauss-Jordan elimination with partial pivoting.
inline std::vector<double> gauss_jordan(Matrix a, std::vector<double> r) {
  const std::size_t n = a.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < n; ++i) {
      if (std::abs(a[i][c]) > std::abs(a[piv][c])) piv = i;
    }
    if (std::abs(a[piv][c]) < 1e-300) throw std::runtime_error("singular system");
    std::swap(a[c], a[piv]);
    std::swap(r[c], r[piv]);
    const double d = a[c][c];
    for (std::size_t j = 0; j < n; ++j) a[c][j] /= d;
    r[c] /= d;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c) continue;
      const double f = a[i][c];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) a[i][j] -= f * a[c][j];
      r[i] -= f * r[c];
    }
  }
  return r;
}

// Least squares through the normal equations X'X b = X'y.
inline std::vector<double> normal_equations(const Matrix& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  const std::size_t p = x.front().size();
  Matrix xtx(p, std::vector<double>(p, 0.0));
  std::vector<double> xty(p, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < p; ++i) {
      xty[i] += x[r][i] * y[r];
      for (std::size_t j = 0; j < p; ++j) xtx[i][j] += x[r][i] * x[r][j];
    }
  }
  return gauss_jordan(xtx, xty);
}

inline double rss(const Matrix& x, const std::vector<double>& y, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t r = 0; r < x.size(); ++r) {
    double f = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) f += x[r][i] * b[i];
    s += (y[r] - f) * (y[r] - f);
  }
  return s;
}

// Upper tail of F(d1, d2) through the regularized incomplete beta function.
inline double f_upper_tail(double f, double d1, double d2) {
  if (f <= 0.0) return 1.0;
  return boost::math::ibeta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f));
}

inline double t_two_sided(double t, double df) {
  return boost::math::ibeta(df / 2.0, 0.5, df / (df + t * t));
}

// Gaussian-likelihood BIC with the error variance counted as a parameter.
inline double bic(double rss_value, std::size_t n, std::size_t p) {
  const double dn = static_cast<double>(n);
  return dn * std::log(2.0 * std::numbers::pi * rss_value / dn) + dn + std::log(dn) * static_cast<double>(p + 1);
}

// Exhaustive best-subset search over main-effect columns: returns the
// bitmask of the BIC-minimizing subset; intercept always included.
inline unsigned best_subset_bic(const Matrix& cand, const std::vector<double>& y) {
  const std::size_t n = y.size();
  const std::size_t k = cand.front().size();
  unsigned best_mask = 0;
  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    Matrix x(n);
    for (std::size_t r = 0; r < n; ++r) {
      x[r].push_back(1.0);
      for (std::size_t j = 0; j < k; ++j) {
        if (mask & (1u << j)) x[r].push_back(cand[r][j]);
      }
    }
    const auto b = normal_equations(x, y);
    const double v = bic(rss(x, y, b), n, x.front().size());
    if (v < best - 1e-12) {
      best = v;
      best_mask = mask;
    }
  }
  return best_mask;
}

// Type-7 quantile written out from the order statistics.
inline double quantile7(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

// Area-weighted overheating percentage computed hour by hour. The running
// mean is rebuilt from raw hourly temperatures for every day.
inline double ioh(const std::vector<std::vector<double>>& t_op, const std::vector<std::vector<bool>>& occ,
                  const std::vector<double>& area, const std::vector<double>& t_out, double alpha) {
  auto day_mean = [&](int d) {
    double s = 0.0;
    for (int h = 0; h < 24; ++h) s += t_out[static_cast<std::size_t>(d * 24 + h)];
    return s / 24.0;
  };
  std::vector<double> limit(365);
  for (int d = 0; d < 365; ++d) {
    double pm = 0.0;
    if (d == 0) {
      pm = day_mean(0);
    } else {
      double num = 0.0, den = 0.0;
      for (int lag = 1; lag <= d; ++lag) {
        const double w = std::pow(alpha, lag - 1);
        if (w < 1e-6) break;
        num += w * day_mean(d - lag);
        den += w;
      }
      pm = num / den;
    }
    limit[static_cast<std::size_t>(d)] = 0.31 * pm + 17.8 + 3.5;
  }
  double num = 0.0, den = 0.0;
  for (std::size_t z = 0; z < t_op.size(); ++z) {
    double e = 0.0, o = 0.0;
    for (std::size_t h = 0; h < 8760; ++h) {
      if (!occ[z][h]) continue;
      o += 1.0;
      if (t_op[z][h] > limit[h / 24]) e += 1.0;
    }
    num += e * area[z];
    den += o * area[z];
  }
  return 100.0 * num / den;
}

// Daylight oracles over an hours x sensors table and an hour mask.
struct Lux {
  std::vector<std::vector<double>> e;  // [hour][sensor]
  std::vector<bool> hours;
};

inline double mean_over_sensors(const Lux& g, double (*credit)(double, double, double), double a, double b) {
  const std::size_t s = g.e.front().size();
  double total = 0.0;
  for (std::size_t j = 0; j < s; ++j) {
    double c = 0.0, n = 0.0;
    for (std::size_t h = 0; h < g.e.size(); ++h) {
      if (!g.hours[h]) continue;
      n += 1.0;
      c += credit(g.e[h][j], a, b);
    }
    total += c / n;
  }
  return 100.0 * total / static_cast<double>(s);
}

inline double udi(const Lux& g, double low, double high) {
  return mean_over_sensors(g, [](double e, double lo, double hi) { return (e >= lo && e <= hi) ? 1.0 : 0.0; }, low, high);
}
inline double da(const Lux& g, double thr) {
  return mean_over_sensors(g, [](double e, double t, double) { return e >= t ? 1.0 : 0.0; }, thr, 0.0);
}
inline double cda(const Lux& g, double thr) {
  return mean_over_sensors(g, [](double e, double t, double) { return e >= t ? 1.0 : e / t; }, thr, 0.0);
}
inline double sda(const Lux& g, double thr, double frac) {
  const std::size_t s = g.e.front().size();
  double passing = 0.0;
  for (std::size_t j = 0; j < s; ++j) {
    double c = 0.0, n = 0.0;
    for (std::size_t h = 0; h < g.e.size(); ++h) {
      if (!g.hours[h]) continue;
      n += 1.0;
      if (g.e[h][j] >= thr) c += 1.0;
    }
    if (c / n >= frac) passing += 1.0;
  }
  return 100.0 * passing / static_cast<double>(s);
}

// Housing surrogate written out term by term; x = (overhang m, west WWR %,
// south WWR %).
inline double housing_ioh(double x1, double x2, double x3) {
  const double u1 = (x1 - 3.78) / 1.5, u2 = (x2 - 3.76) / 10.0, u3 = (x3 - 29.34) / 12.0;
  return 8.3 + 0.9 * u1 * u1 + 0.6 * u2 * u2 + 0.5 * u3 * u3 + 0.15 * u1 * u3;
}

inline double housing_udi(double x1, double x2, double x3) {
  const double u1 = (x1 - 3.78) / 1.5, u2 = (x2 - 3.76) / 10.0, u3 = (x3 - 29.34) / 12.0;
  return 79.7 - 1.2 * u1 * u1 - 1.0 * u2 * u2 - 0.8 * u3 * u3;
}

// Overall desirability of the surrogate with minimize-IOH (T = 0) and
// maximize-UDI (T = 100) ramps.
inline double housing_d(double x1, double x2, double x3, double upper = 19.32, double lower = 35.25) {
  const double i = housing_ioh(x1, x2, x3), u = housing_udi(x1, x2, x3);
  const double d1 = i <= 0.0 ? 1.0 : (i >= upper ? 0.0 : (upper - i) / upper);
  const double d2 = u >= 100.0 ? 1.0 : (u <= lower ? 0.0 : (u - lower) / (100.0 - lower));
  return std::sqrt(d1 * d2);
}

}  // namespace oracle

#endif  // RSM_TESTS_ORACLES_HPP_
