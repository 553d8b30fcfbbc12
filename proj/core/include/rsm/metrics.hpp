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

#ifndef RSM_METRICS_HPP_
#define RSM_METRICS_HPP_

// Thermal-comfort and daylight metrics over hourly annual series.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace rsm {

inline constexpr int kHoursPerYear = 8760;
inline constexpr int kDaysPerYear = 365;

struct HourlyZoneSeries {
  std::string zone;
  double area = 1.0;          // m^2
  std::vector<double> t_op;   // operative temperature, one value per hour of year
  std::vector<bool> occupied;
};

struct OutdoorSeries {
  std::vector<double> t_out;  // dry-bulb temperature, one value per hour of year
};

struct IlluminanceGrid {
  std::vector<std::string> sensors;
  std::vector<std::string> sensor_zone;  // zone of each sensor ("" when unmapped)
  Eigen::MatrixXd lux;                   // hours x sensors
  std::vector<bool> analysis_hours;      // one flag per row of `lux`

  // Grid restricted to the sensors of one zone.
  IlluminanceGrid zone(const std::string& name) const;
};

// 06:00 to 19:00 every day: hour-of-day 6..18.
std::vector<bool> daylight_window(int hours = kHoursPerYear, int first_hour = 6, int last_hour = 19);

struct AdaptiveComfortParams {
  double alpha = 0.9;
  double acceptability_offset = 3.5;  // 80 % acceptability band
};

std::vector<double> daily_means(const OutdoorSeries& outdoor);
// Exponentially weighted mean of previous daily means, one value per day.
std::vector<double> prevailing_mean(const OutdoorSeries& outdoor, const AdaptiveComfortParams& params = {});
double adaptive_upper_limit(double t_pm, const AdaptiveComfortParams& params = {});

// Area-weighted percentage of occupied hours above the adaptive upper limit.
double ioh(std::span<const HourlyZoneSeries> zones, const OutdoorSeries& outdoor,
           const AdaptiveComfortParams& params = {});

double udi(const IlluminanceGrid& grid, double low = 100.0, double high = 3000.0);
double da(const IlluminanceGrid& grid, double threshold = 300.0);
double cda(const IlluminanceGrid& grid, double threshold = 300.0);
double sda(const IlluminanceGrid& grid, double threshold = 300.0, double time_fraction = 0.5);

// CSV loaders.
//   zones:     hour,zone,t_op,occupied
//   outdoor:   hour,t_out
//   areas:     zone,area
//   lux:       hour,sensor,lux
//   sensormap: sensor,zone
// Hours are 0..8759, or 1..8760 when the file contains hour 8760 and no hour 0.
std::vector<HourlyZoneSeries> read_zone_series(std::istream& in,
                                               const std::map<std::string, double>& areas = {});
std::map<std::string, double> read_zone_areas(std::istream& in);
OutdoorSeries read_outdoor_series(std::istream& in);
// Hours missing from the file read as 0 lux.
IlluminanceGrid read_illuminance(std::istream& in, const std::map<std::string, std::string>& sensor_zone = {});
std::map<std::string, std::string> read_sensor_map(std::istream& in);

}  // namespace rsm

#endif  // RSM_METRICS_HPP_
