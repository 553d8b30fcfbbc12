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

#ifndef RSM_SPECIAL_HPP_
#define RSM_SPECIAL_HPP_

namespace rsm::special {

// Regularized incomplete beta I_x(a, b), a, b > 0, 0 <= x <= 1.
double regularized_beta(double x, double a, double b);

// P(F > f) for an F(d1, d2) variate.
double f_upper_tail(double f, double d1, double d2);

// Two-sided P(|T| >= |t|) for a Student t variate with `df` degrees of freedom.
double t_two_sided(double t, double df);

}  // namespace rsm::special

#endif  // RSM_SPECIAL_HPP_
