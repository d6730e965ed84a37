// Copyright 2026 The Coalesce Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Evolution of the (a_t, lambda_t) bounds of the l-bounding argument: red
// red-ended intervals stay dominated by Pareto(a_t), blue intervals dominate
// 1 + Exp(lambda_t).

#ifndef COALESCE_LBOUND_HPP_
#define COALESCE_LBOUND_HPP_

#include <cstdint>
#include <vector>

#include "coalesce/verification.hpp"

namespace coalesce {

struct LBoundState {
  double a = 0;
  double lambda = 0;
  double eps = 0;
  double Lambda = 13.06207;
  std::int64_t t = 0;
};

struct LBoundStep {
  LBoundState next;
  double zeta;
  double xi;
};

LBoundStep EvolveStep(const LBoundState& s);

struct TrajectoryRow {
  std::int64_t t;
  double a;
  double lambda;
  double zeta;
  double xi;
};

struct TrajectoryResult {
  VerificationReport report;
  std::vector<TrajectoryRow> rows;
};

// Iterates until the state is admissible (a <= 1 - delta, lambda >=
// Lambda/(1-delta), eps < min(delta/2, eps0, 1/10)) and lambda_T > 2/eps, at
// which point sum_{t>T} eps/lambda_t <= 2/(eps lambda_T) < 1. Rows are kept
// every `record_every` steps (0 keeps none).
TrajectoryResult CertifyTrajectory(const LBoundState& s0, double delta,
                                   std::int64_t max_steps = 10'000'000,
                                   double eps0 = 0.01,
                                   std::int64_t record_every = 0);

struct RedDomPoint {
  double x;
  double empirical;
  double analytic;
  double excess;
  double std_error;
  double sigmas;
};

struct RedDomResult {
  std::int64_t samples = 0;
  std::vector<RedDomPoint> points;
  double max_excess = 0;
  double max_sigmas = 0;
};

// Samples Z = 2^ceil(log2 Y) (X_1 + ... + X_Y) with Y ~ Geom(eps) and X_i ~
// Pareto(a), and compares P(Z >= x) against the Pareto(a + Lambda eps) tail.
RedDomResult RedDomEmpirical(double a, double eps, double Lambda,
                             std::int64_t samples, const std::vector<double>& grid,
                             std::uint64_t seed, int threads);

}  // namespace coalesce

#endif  // COALESCE_LBOUND_HPP_
