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

#include "coalesce/montecarlo.hpp"

#include <cmath>
#include <limits>

#include "coalesce/error.hpp"
#include "coalesce/parallel.hpp"
#include "coalesce/special.hpp"

namespace coalesce {

namespace {

std::vector<double> WindowLengths(const DistSpec& red, const DistSpec& blue,
                                  std::size_t n, std::uint64_t seed,
                                  std::uint64_t trial) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "window size n must be positive");
  std::vector<double> lengths(2 * n);
  for (std::size_t j = 0; j < 2 * n; ++j) {
    Stream s(seed, trial, static_cast<std::uint32_t>(j));
    const double v = Sample(j % 2 == 0 ? red : blue, s);
    if (!(v > 0)) {
      throw Error(ErrorCode::kDomain,
                  "sampled a non-positive length; distributions must be "
                  "supported on (0, inf)");
    }
    lengths[j] = v;
  }
  return lengths;
}

}  // namespace

ColoredInterval SampleWindow(const DistSpec& red, const DistSpec& blue,
                             std::size_t n, std::uint64_t seed,
                             std::uint64_t trial) {
  if (2 * n > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::kInvalidArgument, "window too large");
  }
  return ColoredInterval::Alternating(Colour::kRed,
                                      WindowLengths(red, blue, n, seed, trial));
}

TrialReport RunTrial(const DistSpec& red, const DistSpec& blue, std::size_t n,
                     double alpha, std::uint64_t seed, std::uint64_t trial,
                     Colour target) {
  const ColoredInterval w = SampleWindow(red, blue, n, seed, trial);
  TrialReport r;
  r.trial_index = trial;
  r.window_length = w.total_length();
  try {
    const GoodnessReport<double> g = Goodness(w, alpha, target);
    r.good = g.good;
    r.segments = g.closure_segments;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateTie) throw;
    r.degenerate = true;
  }
  return r;
}

QEstimate EstimateQ(const DistSpec& red, const DistSpec& blue,
                    const EstimateConfig& cfg) {
  if (cfg.trials == 0) throw Error(ErrorCode::kInvalidArgument, "trials must be positive");
  if (!(cfg.alpha > 0 && cfg.alpha <= 0.25)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must lie in (0, 1/4]");
  }
  std::vector<TrialReport> reports(cfg.trials);
  ParallelFor(cfg.trials, cfg.threads, [&](std::size_t i) {
    reports[i] = RunTrial(red, blue, cfg.n, cfg.alpha, cfg.seed, i, cfg.target);
  });
  QEstimate q;
  q.trials = cfg.trials;
  for (const auto& r : reports) {
    if (r.degenerate) {
      ++q.degenerate;
    } else if (!r.good) {
      ++q.bad;
    }
  }
  const std::uint64_t effective = q.trials - q.degenerate;
  q.q_hat = effective == 0 ? std::numeric_limits<double>::quiet_NaN()
                           : static_cast<double>(q.bad) / static_cast<double>(effective);
  if (cfg.q_star) {
    q.q_star = cfg.q_star;
    q.log10_prob = Log10BinomialCdf(static_cast<std::int64_t>(effective),
                                    static_cast<std::int64_t>(q.bad), *cfg.q_star);
  }
  if (cfg.keep_reports) q.reports = std::move(reports);
  return q;
}

TypicalityEstimate TypicalityRate(const DistSpec& red, const DistSpec& blue,
                                  std::size_t n, double L, double beta,
                                  std::uint64_t trials, std::uint64_t seed,
                                  int threads, double level) {
  if (trials == 0) throw Error(ErrorCode::kInvalidArgument, "trials must be positive");
  if (!(L > 0) || !(beta > 1)) {
    throw Error(ErrorCode::kInvalidArgument, "need L > 0 and beta > 1");
  }
  std::vector<std::uint8_t> atypical(trials, 0);
  ParallelFor(trials, threads, [&](std::size_t i) {
    internal::Accumulator<double> acc;
    for (double v : WindowLengths(red, blue, n, seed, i)) acc.Add(v);
    const double len = acc.Value();
    atypical[i] = !(len > L && len < beta * L);
  });
  TypicalityEstimate t;
  t.trials = trials;
  for (auto a : atypical) t.atypical += a;
  t.eta_hat = static_cast<double>(t.atypical) / static_cast<double>(trials);
  const auto [lo, hi] = BinomialConfidence(static_cast<std::int64_t>(trials),
                                           static_cast<std::int64_t>(t.atypical), level);
  t.eta_lower = lo;
  t.eta_upper = hi;
  t.level = level;
  return t;
}

}  // namespace coalesce
