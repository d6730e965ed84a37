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

// Monte Carlo estimation of the probability that a window of 2n alternating
// intervals is bad, i.e. its closure lacks a long central interval of the
// target colour.

#ifndef COALESCE_MONTECARLO_HPP_
#define COALESCE_MONTECARLO_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "coalesce/colored_interval.hpp"
#include "coalesce/dist.hpp"

namespace coalesce {

struct TrialReport {
  std::uint64_t trial_index = 0;
  bool good = false;
  double window_length = 0;
  std::size_t segments = 0;  // closure segment count
  bool degenerate = false;
};

// R_1, B_1, ..., R_n, B_n. Segment j of trial i draws from the stream
// (seed, i, j).
ColoredInterval SampleWindow(const DistSpec& red, const DistSpec& blue,
                             std::size_t n, std::uint64_t seed,
                             std::uint64_t trial);

TrialReport RunTrial(const DistSpec& red, const DistSpec& blue, std::size_t n,
                     double alpha, std::uint64_t seed, std::uint64_t trial,
                     Colour target = Colour::kBlue);

struct EstimateConfig {
  std::size_t n = 0;
  double alpha = 0.23;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  Colour target = Colour::kBlue;
  int threads = 1;
  // When set, log10_prob = log10 P(Bin(trials - degenerate, q_star) <= bad).
  std::optional<double> q_star;
  bool keep_reports = false;
};

struct QEstimate {
  std::uint64_t trials = 0;
  std::uint64_t bad = 0;
  std::uint64_t degenerate = 0;
  double q_hat = 0;  // NaN when every trial was degenerate
  std::optional<double> q_star;
  std::optional<double> log10_prob;  // may be -inf (saturated)
  std::vector<TrialReport> reports;
};

QEstimate EstimateQ(const DistSpec& red, const DistSpec& blue,
                    const EstimateConfig& cfg);

struct TypicalityEstimate {
  std::uint64_t trials = 0;
  std::uint64_t atypical = 0;
  double eta_hat = 0;
  double eta_lower = 0;
  double eta_upper = 0;
  double level = 0;
};

// Fraction of windows whose total length falls outside (L, beta L).
TypicalityEstimate TypicalityRate(const DistSpec& red, const DistSpec& blue,
                                  std::size_t n, double L, double beta,
                                  std::uint64_t trials, std::uint64_t seed,
                                  int threads, double level = 0.99);

}  // namespace coalesce

#endif  // COALESCE_MONTECARLO_HPP_
