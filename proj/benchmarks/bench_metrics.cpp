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

#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "rsm/metrics.hpp"
#include "rsm/random.hpp"

namespace {

void BM_Ioh(benchmark::State& state) {
  rsm::SplitMix64 rng(1);
  rsm::OutdoorSeries out;
  for (int h = 0; h < rsm::kHoursPerYear; ++h) out.t_out.push_back(18.0 + 8.0 * std::sin(h * 7.17e-4) + 2.0 * rng.normal());
  std::vector<rsm::HourlyZoneSeries> zones(static_cast<std::size_t>(state.range(0)));
  for (auto& z : zones) {
    z.area = 20.0;
    for (int h = 0; h < rsm::kHoursPerYear; ++h) {
      z.t_op.push_back(25.0 + 3.0 * rng.normal());
      z.occupied.push_back(rng.uniform() < 0.6);
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(rsm::ioh(zones, out));
}
BENCHMARK(BM_Ioh)->Arg(1)->Arg(10);

void BM_Daylight(benchmark::State& state) {
  rsm::SplitMix64 rng(2);
  rsm::IlluminanceGrid g;
  const auto sensors = state.range(0);
  g.lux.resize(rsm::kHoursPerYear, sensors);
  for (Eigen::Index i = 0; i < g.lux.size(); ++i) g.lux.data()[i] = std::exp(2.0 + 7.0 * rng.uniform());
  for (Eigen::Index s = 0; s < sensors; ++s) {
    g.sensors.push_back("s" + std::to_string(s));
    g.sensor_zone.push_back("");
  }
  g.analysis_hours = rsm::daylight_window();
  for (auto _ : state) {
    benchmark::DoNotOptimize(rsm::udi(g));
    benchmark::DoNotOptimize(rsm::cda(g));
    benchmark::DoNotOptimize(rsm::sda(g));
  }
}
BENCHMARK(BM_Daylight)->Arg(16)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
