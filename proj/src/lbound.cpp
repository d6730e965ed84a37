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

#include "coalesce/lbound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coalesce/error.hpp"
#include "coalesce/parallel.hpp"
#include "coalesce/rng.hpp"

namespace coalesce {

LBoundStep EvolveStep(const LBoundState& s) {
  if (!(s.lambda > 0) || !(s.a >= 0) || !(s.eps >= 0)) {
    throw Error(ErrorCode::kInvalidArgument, "need a >= 0, lambda > 0, eps >= 0");
  }
  LBoundStep r;
  r.zeta = -std::expm1(-s.eps / s.lambda);
  const double lz = s.Lambda * r.zeta;
  const double d = s.a + lz + 1.0 + s.eps;
  r.xi = s.eps * (2.0 * s.a + 2.0 * lz + 2.0 + s.eps) / (d * d);
  r.next = s;
  r.next.a = (s.a + lz) / (1.0 + s.eps);
  r.next.lambda = s.lambda / ((1.0 - r.xi) * (1.0 + s.eps));
  r.next.t = s.t + 1;
  return r;
}

TrajectoryResult CertifyTrajectory(const LBoundState& s0, double delta,
                                   std::int64_t max_steps, double eps0,
                                   std::int64_t record_every) {
  if (!(delta > 0 && delta < 1)) {
    throw Error(ErrorCode::kInvalidArgument, "delta must lie in (0, 1)");
  }
  TrajectoryResult out;
  VerificationReport& rep = out.report;
  rep.check = "lbound_trajectory";
  rep.region = "t >= 0";
  rep.slack = std::numeric_limits<double>::infinity();
  const double eps = s0.eps;
  const double growth = 1.0 + eps * eps / 2.0;
  const double eps_cap = std::min({delta / 2.0, eps0, 0.1});
  rep.metrics = {{"a0", s0.a}, {"lambda0", s0.lambda}, {"eps", eps},
                 {"Lambda", s0.Lambda}, {"delta", delta}, {"eps0", eps0}};
  if (!(eps > 0)) {
    rep.status = Status::kInconclusive;
    rep.notes.push_back("eps = 0: lambda never grows and the survival sum diverges");
    return out;
  }
  if (!(eps < eps_cap)) {
    rep.notes.push_back(
        "eps is not below min(delta/2, eps0, 1/10); the inductive tail "
        "argument is unavailable");
  }
  LBoundState s = s0;
  double min_ratio_margin = std::numeric_limits<double>::infinity();
  for (std::int64_t step = 0; step <= max_steps; ++step) {
    const double a_margin = (1.0 - delta) - s.a;
    rep.slack = std::min(rep.slack, a_margin);
    if (a_margin < 0) {
      rep.status = Status::kFalsified;
      rep.witness = Witness{"a_t exceeds 1 - delta",
                            {{"t", static_cast<double>(s.t)}, {"a", s.a},
                             {"lambda", s.lambda}}};
      break;
    }
    const bool admissible = eps < eps_cap && s.lambda >= s.Lambda / (1.0 - delta);
    if (admissible && s.lambda * eps > 2.0) {
      rep.status = Status::kVerified;
      rep.chain_length = static_cast<std::uint64_t>(s.t - s0.t);
      rep.metrics.push_back({"T", static_cast<double>(s.t)});
      rep.metrics.push_back({"lambda_T", s.lambda});
      rep.metrics.push_back({"a_T", s.a});
      rep.metrics.push_back({"tail_sum_bound", 2.0 / (eps * s.lambda)});
      break;
    }
    if (step == max_steps) {
      rep.status = Status::kInconclusive;
      rep.notes.push_back("step budget exhausted");
      break;
    }
    const LBoundStep st = EvolveStep(s);
    if (record_every > 0 && (s.t - s0.t) % record_every == 0) {
      out.rows.push_back({s.t, s.a, s.lambda, st.zeta, st.xi});
    }
    const double ratio = st.next.lambda / s.lambda;
    min_ratio_margin = std::min(min_ratio_margin, ratio - growth);
    if (ratio < growth) {
      rep.status = Status::kFalsified;
      rep.witness = Witness{"lambda growth ratio below 1 + eps^2/2",
                            {{"t", static_cast<double>(s.t)}, {"ratio", ratio},
                             {"a", s.a}, {"lambda", s.lambda}}};
      break;
    }
    s = st.next;
  }
  rep.chain_length = static_cast<std::uint64_t>(s.t - s0.t);
  if (std::isfinite(min_ratio_margin)) {
    rep.metrics.push_back({"min_growth_margin", min_ratio_margin});
  }
  if (record_every > 0) {
    const LBoundStep st = EvolveStep(s);
    if (out.rows.empty() || out.rows.back().t != s.t) {
      out.rows.push_back({s.t, s.a, s.lambda, st.zeta, st.xi});
    }
  }
  return out;
}

RedDomResult RedDomEmpirical(double a, double eps, double Lambda,
                             std::int64_t samples, const std::vector<double>& grid,
                             std::uint64_t seed, int threads) {
  if (!(a >= 0 && a <= 1) || !(eps > 0 && eps < 1) || samples <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "need a in [0,1], eps in (0,1), samples > 0");
  }
  constexpr std::int64_t kBlock = 1 << 16;
  const std::int64_t blocks = (samples + kBlock - 1) / kBlock;
  const std::size_t g = grid.size();
  std::vector<std::int64_t> counts(static_cast<std::size_t>(blocks) * g, 0);
  const double log_eps = std::log(eps);
  ParallelFor(static_cast<std::size_t>(blocks), threads, [&](std::size_t b) {
    const std::int64_t begin = static_cast<std::int64_t>(b) * kBlock;
    const std::int64_t end = std::min(samples, begin + kBlock);
    std::int64_t* c = &counts[b * g];
    for (std::int64_t i = begin; i < end; ++i) {
      Stream s(seed, static_cast<std::uint64_t>(i), 0);
      const double y = 1.0 + std::floor(std::log(s.Uniform01()) / log_eps);
      double pow2 = 1;
      while (pow2 < y) pow2 *= 2;
      double sum = 0;
      for (double j = 0; j < y; ++j) sum += (a + 1.0) / std::sqrt(s.Uniform01()) - a;
      const double z = pow2 * sum;
      for (std::size_t k = 0; k < g; ++k) c[k] += z >= grid[k];
    }
  });
  RedDomResult r;
  r.samples = samples;
  r.max_excess = -std::numeric_limits<double>::infinity();
  r.max_sigmas = -std::numeric_limits<double>::infinity();
  const double ap = a + Lambda * eps;
  for (std::size_t k = 0; k < g; ++k) {
    std::int64_t hits = 0;
    for (std::int64_t b = 0; b < blocks; ++b) hits += counts[static_cast<std::size_t>(b) * g + k];
    const double x = grid[k];
    const double emp = static_cast<double>(hits) / static_cast<double>(samples);
    const double ana = x <= 1 ? 1.0 : (ap + 1) * (ap + 1) / ((ap + x) * (ap + x));
    const double se = std::sqrt(ana * (1 - ana) / static_cast<double>(samples));
    const double excess = emp - ana;
    const double sig = se > 0 ? excess / se : (excess > 0 ? std::numeric_limits<double>::infinity() : 0.0);
    r.points.push_back({x, emp, ana, excess, se, sig});
    r.max_excess = std::max(r.max_excess, excess);
    r.max_sigmas = std::max(r.max_sigmas, sig);
  }
  return r;
}

}  // namespace coalesce
