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

#include "rsm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>

#include "rsm/csv.hpp"
#include "rsm/errors.hpp"

namespace rsm {
namespace {

void require_year(std::size_t n, const std::string& what) {
  if (n != static_cast<std::size_t>(kHoursPerYear)) {
    throw InvalidInput(what + " must have " + std::to_string(kHoursPerYear) + " hourly values, got " +
                       std::to_string(n));
  }
}

void check_grid(const IlluminanceGrid& g) {
  if (g.lux.cols() == 0 || g.lux.rows() == 0) throw InvalidInput("illuminance grid is empty");
  if (static_cast<Eigen::Index>(g.analysis_hours.size()) != g.lux.rows()) {
    throw InvalidInput("analysis-hour mask does not match the illuminance rows");
  }
  if (std::none_of(g.analysis_hours.begin(), g.analysis_hours.end(), [](bool b) { return b; })) {
    throw InvalidInput("illuminance grid has no analysis hours");
  }
  if (!g.lux.allFinite() || (g.lux.array() < 0.0).any()) {
    throw InvalidInput("illuminance must be finite and nonnegative");
  }
}

// Mean over sensors of the per-sensor mean of credit(E) over analysis hours.
template <typename Credit>
double sensor_average(const IlluminanceGrid& g, Credit credit) {
  check_grid(g);
  double total = 0.0;
  int hours = 0;
  for (bool b : g.analysis_hours) hours += b ? 1 : 0;
  for (Eigen::Index s = 0; s < g.lux.cols(); ++s) {
    double acc = 0.0;
    for (Eigen::Index h = 0; h < g.lux.rows(); ++h) {
      if (g.analysis_hours[static_cast<std::size_t>(h)]) acc += credit(g.lux(h, s));
    }
    total += acc / hours;
  }
  return 100.0 * total / static_cast<double>(g.lux.cols());
}

// Maps file hour labels onto 0-based hour of year.
int hour_offset(const csv::Table& t, std::size_t col) {
  bool has_zero = false;
  bool has_last = false;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double h = t.number(r, col);
    has_zero = has_zero || h == 0.0;
    has_last = has_last || h == kHoursPerYear;
  }
  return (has_last && !has_zero) ? 1 : 0;
}

int hour_at(const csv::Table& t, std::size_t row, std::size_t col, int offset) {
  const double v = t.number(row, col);
  const double h = v - offset;
  if (h != std::floor(h) || h < 0 || h >= kHoursPerYear) {
    throw InvalidInput("row " + std::to_string(row + 2) + ": hour " + csv::format(v) + " out of range");
  }
  return static_cast<int>(h);
}

bool parse_flag(const std::string& s, std::size_t row) {
  if (s == "1" || s == "true" || s == "TRUE" || s == "True") return true;
  if (s == "0" || s == "false" || s == "FALSE" || s == "False") return false;
  throw SchemaError("row " + std::to_string(row + 2) + " column 'occupied': expected 0/1, got '" + s + "'");
}

}  // namespace

IlluminanceGrid IlluminanceGrid::zone(const std::string& name) const {
  IlluminanceGrid out;
  out.analysis_hours = analysis_hours;
  std::vector<Eigen::Index> keep;
  for (std::size_t s = 0; s < sensors.size(); ++s) {
    if (s < sensor_zone.size() && sensor_zone[s] == name) {
      keep.push_back(static_cast<Eigen::Index>(s));
      out.sensors.push_back(sensors[s]);
      out.sensor_zone.push_back(name);
    }
  }
  out.lux.resize(lux.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) out.lux.col(static_cast<Eigen::Index>(j)) = lux.col(keep[j]);
  return out;
}

std::vector<bool> daylight_window(int hours, int first_hour, int last_hour) {
  std::vector<bool> w(static_cast<std::size_t>(hours));
  for (int h = 0; h < hours; ++h) {
    const int hod = h % 24;
    w[static_cast<std::size_t>(h)] = hod >= first_hour && hod < last_hour;
  }
  return w;
}

std::vector<double> daily_means(const OutdoorSeries& outdoor) {
  require_year(outdoor.t_out.size(), "outdoor series");
  std::vector<double> te(kDaysPerYear, 0.0);
  for (int h = 0; h < kHoursPerYear; ++h) {
    const double v = outdoor.t_out[static_cast<std::size_t>(h)];
    if (!std::isfinite(v)) throw InvalidInput("outdoor temperature missing at hour " + std::to_string(h));
    te[static_cast<std::size_t>(h / 24)] += v;
  }
  for (double& v : te) v /= 24.0;
  return te;
}

std::vector<double> prevailing_mean(const OutdoorSeries& outdoor, const AdaptiveComfortParams& params) {
  if (!(params.alpha >= 0.0 && params.alpha < 1.0)) throw InvalidArgument("alpha must be in [0, 1)");
  const auto te = daily_means(outdoor);
  std::vector<double> pm(kDaysPerYear);
  pm[0] = te[0];
  for (int d = 1; d < kDaysPerYear; ++d) {
    double num = 0.0;
    double den = 0.0;
    double w = 1.0;
    for (int j = 0; j < d && w >= 1e-6; ++j) {
      num += w * te[static_cast<std::size_t>(d - 1 - j)];
      den += w;
      w *= params.alpha;
    }
    pm[static_cast<std::size_t>(d)] = num / den;
  }
  return pm;
}

double adaptive_upper_limit(double t_pm, const AdaptiveComfortParams& params) {
  return 0.31 * t_pm + 17.8 + params.acceptability_offset;
}

double ioh(std::span<const HourlyZoneSeries> zones, const OutdoorSeries& outdoor,
           const AdaptiveComfortParams& params) {
  if (zones.empty()) throw InvalidInput("ioh needs at least one zone");
  const auto pm = prevailing_mean(outdoor, params);
  std::vector<double> limit(pm.size());
  std::transform(pm.begin(), pm.end(), limit.begin(), [&](double t) { return adaptive_upper_limit(t, params); });
  double exceed = 0.0;
  double occupied = 0.0;
  for (const auto& z : zones) {
    require_year(z.t_op.size(), "zone '" + z.zone + "' temperatures");
    require_year(z.occupied.size(), "zone '" + z.zone + "' occupancy");
    if (!(z.area > 0.0)) throw InvalidInput("zone '" + z.zone + "' area must be positive");
    long e = 0;
    long o = 0;
    for (int h = 0; h < kHoursPerYear; ++h) {
      const auto i = static_cast<std::size_t>(h);
      if (!std::isfinite(z.t_op[i])) throw InvalidInput("zone '" + z.zone + "' temperature missing at hour " + std::to_string(h));
      if (!z.occupied[i]) continue;
      ++o;
      if (z.t_op[i] > limit[i / 24]) ++e;
    }
    exceed += static_cast<double>(e) * z.area;
    occupied += static_cast<double>(o) * z.area;
  }
  if (occupied == 0.0) throw InvalidInput("ioh needs at least one occupied hour");
  return 100.0 * exceed / occupied;
}

double udi(const IlluminanceGrid& grid, double low, double high) {
  if (!(low <= high)) throw InvalidArgument("udi needs low <= high");
  return sensor_average(grid, [&](double e) { return (e >= low && e <= high) ? 1.0 : 0.0; });
}

double da(const IlluminanceGrid& grid, double threshold) {
  return sensor_average(grid, [&](double e) { return e >= threshold ? 1.0 : 0.0; });
}

double cda(const IlluminanceGrid& grid, double threshold) {
  if (!(threshold > 0.0)) throw InvalidArgument("cda threshold must be positive");
  return sensor_average(grid, [&](double e) { return std::min(1.0, e / threshold); });
}

double sda(const IlluminanceGrid& grid, double threshold, double time_fraction) {
  check_grid(grid);
  int hours = 0;
  for (bool b : grid.analysis_hours) hours += b ? 1 : 0;
  int passing = 0;
  for (Eigen::Index s = 0; s < grid.lux.cols(); ++s) {
    int lit = 0;
    for (Eigen::Index h = 0; h < grid.lux.rows(); ++h) {
      if (grid.analysis_hours[static_cast<std::size_t>(h)] && grid.lux(h, s) >= threshold) ++lit;
    }
    if (static_cast<double>(lit) >= time_fraction * hours) ++passing;
  }
  return 100.0 * passing / static_cast<double>(grid.lux.cols());
}

std::vector<HourlyZoneSeries> read_zone_series(std::istream& in, const std::map<std::string, double>& areas) {
  const auto t = csv::read(in);
  const auto ch = t.column("hour");
  const auto cz = t.column("zone");
  const auto ct = t.column("t_op");
  const auto co = t.column("occupied");
  const int offset = hour_offset(t, ch);
  std::map<std::string, std::size_t> index;
  std::vector<HourlyZoneSeries> zones;
  std::vector<std::vector<bool>> seen;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& name = t.rows[r][cz];
    auto [it, fresh] = index.emplace(name, zones.size());
    if (fresh) {
      HourlyZoneSeries z;
      z.zone = name;
      z.t_op.assign(kHoursPerYear, std::nan(""));
      z.occupied.assign(kHoursPerYear, false);
      if (auto a = areas.find(name); a != areas.end()) z.area = a->second;
      zones.push_back(std::move(z));
      seen.emplace_back(kHoursPerYear, false);
    }
    const int h = hour_at(t, r, ch, offset);
    auto& z = zones[it->second];
    if (seen[it->second][static_cast<std::size_t>(h)]) {
      throw InvalidInput("zone '" + name + "' has a duplicate row for hour " + std::to_string(h));
    }
    seen[it->second][static_cast<std::size_t>(h)] = true;
    z.t_op[static_cast<std::size_t>(h)] = t.number(r, ct);
    z.occupied[static_cast<std::size_t>(h)] = parse_flag(t.rows[r][co], r);
  }
  for (std::size_t i = 0; i < zones.size(); ++i) {
    const auto missing = std::count(seen[i].begin(), seen[i].end(), false);
    if (missing > 0) {
      throw InvalidInput("zone '" + zones[i].zone + "' is missing " + std::to_string(missing) + " hours");
    }
  }
  return zones;
}

std::map<std::string, double> read_zone_areas(std::istream& in) {
  const auto t = csv::read(in);
  const auto cz = t.column("zone");
  const auto ca = t.column("area");
  std::map<std::string, double> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) out[t.rows[r][cz]] = t.number(r, ca);
  return out;
}

OutdoorSeries read_outdoor_series(std::istream& in) {
  const auto t = csv::read(in);
  const auto ch = t.column("hour");
  const auto ct = t.column("t_out");
  const int offset = hour_offset(t, ch);
  OutdoorSeries out;
  out.t_out.assign(kHoursPerYear, std::nan(""));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    out.t_out[static_cast<std::size_t>(hour_at(t, r, ch, offset))] = t.number(r, ct);
  }
  return out;
}

IlluminanceGrid read_illuminance(std::istream& in, const std::map<std::string, std::string>& sensor_zone) {
  const auto t = csv::read(in);
  const auto ch = t.column("hour");
  const auto cs = t.column("sensor");
  const auto cl = t.column("lux");
  const int offset = hour_offset(t, ch);
  IlluminanceGrid g;
  std::map<std::string, Eigen::Index> index;
  for (const auto& row : t.rows) {
    if (index.emplace(row[cs], static_cast<Eigen::Index>(g.sensors.size())).second) {
      g.sensors.push_back(row[cs]);
      auto z = sensor_zone.find(row[cs]);
      g.sensor_zone.push_back(z == sensor_zone.end() ? std::string() : z->second);
    }
  }
  g.lux = Eigen::MatrixXd::Zero(kHoursPerYear, static_cast<Eigen::Index>(g.sensors.size()));
  g.analysis_hours = daylight_window();
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    g.lux(hour_at(t, r, ch, offset), index.at(t.rows[r][cs])) = t.number(r, cl);
  }
  return g;
}

std::map<std::string, std::string> read_sensor_map(std::istream& in) {
  const auto t = csv::read(in);
  const auto cs = t.column("sensor");
  const auto cz = t.column("zone");
  std::map<std::string, std::string> out;
  for (const auto& row : t.rows) out[row[cs]] = row[cz];
  return out;
}

}  // namespace rsm
