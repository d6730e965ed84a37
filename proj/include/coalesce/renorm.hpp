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

// Renormalisation certificates: renormalisable triples, the quadratic
// threshold Q, and the bad-probability recursion q_{t+1} = (2k-3) q_t^2 +
// k eta_t.

#ifndef COALESCE_RENORM_HPP_
#define COALESCE_RENORM_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "coalesce/dist.hpp"

namespace coalesce {

struct RenormParams {
  double alpha = 0.23;
  double beta = 1.04;
  std::int64_t k = 10;
  std::int64_t n = 2'000'000;
};

// Evaluated exactly on the binary values of alpha and beta.
bool IsRenormalisable(double alpha, double beta, std::int64_t k);

double ComputeC(double mu_red, double mu_blue, double var_red, double var_blue,
                double beta);

// Largest root of x = (2k-3) x^2 + k c / n; empty when the discriminant is
// negative.
std::optional<double> Renorm2Root(std::int64_t k, double c, std::int64_t n);

struct EtaModel {
  std::function<double(int)> eta;
  // eta_{t+1} <= ratio * eta_t for all t, when known.
  std::optional<double> ratio;
  std::string description;
};

// eta_t = c / (k^t n).
EtaModel ChebyshevEta(double c, std::int64_t k, std::int64_t n);
EtaModel ZeroEta();

struct QRecursion {
  std::vector<double> q;
  bool converged = false;
  double partial_sum = 0;
  // Bound on the sum of all remaining terms once contraction is certified.
  std::optional<double> tail_bound;
};

// Converged once q_t < 1e-30 and, with zeta = (2k-3) q_t, k eta_t <=
// (1 - zeta) q_t, so every later term stays below q_t. Diverged once q_t > 1.
QRecursion RunQRecursion(double q0, const EtaModel& eta, std::int64_t k, int T);

struct Certificate {
  RenormParams params;
  std::string red;
  std::string blue;
  double c = 0;
  std::optional<double> Q;
  double q_input = 0;
  std::string eta_model;
  QRecursion recursion;
  bool certified = false;
  std::optional<double> confidence_log10;
  std::string reason;
};

// Throws PreconditionFailed for non-renormalisable parameters and
// InfiniteMoment when a variance diverges.
Certificate Certify(const RenormParams& params, const DistSpec& red,
                    const DistSpec& blue, double q_input,
                    std::optional<double> confidence_log10 = std::nullopt,
                    int max_steps = 200);

}  // namespace coalesce

#endif  // COALESCE_RENORM_HPP_
