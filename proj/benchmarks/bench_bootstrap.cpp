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

#include <vector>

#include <benchmark/benchmark.h>

#include "rsm/bootstrap.hpp"
#include "rsm/designs.hpp"
#include "rsm/modelfit.hpp"
#include "rsm/random.hpp"

namespace {

rsm::FittedModel noisy_quadratic() {
  const std::vector<rsm::Factor> f{{"a", -1, 1, ""}, {"b", -1, 1, ""}, {"c", -1, 1, ""}};
  const auto d = rsm::central_composite(f, 3).design;
  rsm::SplitMix64 rng(5);
  std::vector<double> y;
  for (const auto& r : d.runs) {
    const double a = r.coded[0] - 0.2, b = r.coded[1], c = r.coded[2] + 0.1;
    y.push_back(4.0 - a * a - 0.7 * b * b - 0.4 * c * c + 0.05 * rng.normal());
  }
  return rsm::fit(d, y, rsm::ModelOrder::second);
}

void BM_Bootstrap(benchmark::State& state) {
  const auto m = noisy_quadratic();
  rsm::BootstrapOptions opt;
  opt.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rsm::bootstrap_stationary(m, 1000, 123, opt));
}
BENCHMARK(BM_Bootstrap)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
