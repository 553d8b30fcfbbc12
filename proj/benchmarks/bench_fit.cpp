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

#include "rsm/canonical.hpp"
#include "rsm/designs.hpp"
#include "rsm/modelfit.hpp"

namespace {

std::vector<rsm::Factor> factors(int k) {
  std::vector<rsm::Factor> f;
  for (int i = 0; i < k; ++i) f.push_back({"x" + std::to_string(i + 1), -1.0, 1.0, ""});
  return f;
}

std::vector<double> response(const rsm::Design& d) {
  std::vector<double> y;
  for (const auto& r : d.runs) {
    double v = 1.0;
    for (std::size_t i = 0; i < r.coded.size(); ++i) v += 0.3 * r.coded[i] - r.coded[i] * r.coded[i] + 0.01 * std::sin(7.0 * i + r.run_id);
    y.push_back(v);
  }
  return y;
}

void BM_FitSecondOrder(benchmark::State& state) {
  const auto d = rsm::central_composite(factors(static_cast<int>(state.range(0))), 3).design;
  const auto y = response(d);
  for (auto _ : state) benchmark::DoNotOptimize(rsm::fit(d, y, rsm::ModelOrder::second));
}
BENCHMARK(BM_FitSecondOrder)->DenseRange(2, 8, 2);

void BM_Anova(benchmark::State& state) {
  const auto d = rsm::central_composite(factors(3), 3).design;
  const auto m = rsm::fit(d, response(d), rsm::ModelOrder::second);
  for (auto _ : state) benchmark::DoNotOptimize(rsm::anova(m));
}
BENCHMARK(BM_Anova);

void BM_StationaryPoint(benchmark::State& state) {
  const auto d = rsm::central_composite(factors(static_cast<int>(state.range(0))), 3).design;
  const auto m = rsm::fit(d, response(d), rsm::ModelOrder::second);
  for (auto _ : state) benchmark::DoNotOptimize(rsm::stationary_point(m));
}
BENCHMARK(BM_StationaryPoint)->DenseRange(2, 8, 3);

}  // namespace

BENCHMARK_MAIN();
