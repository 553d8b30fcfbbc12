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

#include "rsm/designs.hpp"
#include "rsm/random.hpp"
#include "rsm/screening.hpp"

namespace {

struct Problem {
  rsm::Design design;
  std::vector<double> y;
};

Problem screening_problem() {
  std::vector<rsm::Factor> f;
  for (int i = 0; i < 8; ++i) f.push_back({"x" + std::to_string(i + 1), -1.0, 1.0, ""});
  Problem p{rsm::fractional_factorial(f, 2, rsm::default_generators(8, 2)).design, {}};
  rsm::SplitMix64 rng(3);
  for (const auto& r : p.design.runs) p.y.push_back(1.5 * r.coded[1] - r.coded[5] + 0.1 * rng.normal());
  return p;
}

void BM_LassoCv(benchmark::State& state) {
  const auto p = screening_problem();
  for (auto _ : state) benchmark::DoNotOptimize(rsm::lasso_cv(p.design, p.y, 3));
}
BENCHMARK(BM_LassoCv)->Unit(benchmark::kMillisecond);

void BM_StepwiseBic(benchmark::State& state) {
  const auto p = screening_problem();
  for (auto _ : state) benchmark::DoNotOptimize(rsm::stepwise_bic(p.design, p.y));
}
BENCHMARK(BM_StepwiseBic)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
