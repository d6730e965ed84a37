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

// Rigorous checks: the (e:1)-type ratio inequality for Pareto tails by
// rectangle subdivision, dominance chains against 1 + Exp(Lambda), and the
// case analysis for the toy model.

#ifndef COALESCE_VERIFY_HPP_
#define COALESCE_VERIFY_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "coalesce/dist.hpp"
#include "coalesce/special.hpp"
#include "coalesce/verification.hpp"

namespace coalesce {

// P(X_1 + X_2 >= x/2) for X_i ~ Pareto(a), a in [0, 1], x >= 4.
double ConvTailClosedForm(double a, double x);
Enclosure ConvTailEnclosure(double a, double x);
// P(X >= x) = (a+1)^2/(a+x)^2 for x >= 1.
Enclosure ParetoTailEnclosure(double a, double x);
// 2 (x-1) Lambda / ((a+1)(a+x)).
Enclosure E1RightSide(double Lambda, double a, double x);

struct Rectangle {
  double a1, a2, x1, x2;
  int depth;
};

struct E1Options {
  double Lambda = 13.06207;
  double delta = 1e-10;
  double a_lo = 0, a_hi = 1;
  double x_lo = 4, x_hi = 100;
  int max_depth = 60;
  double min_width = 1e-9;
  std::uint64_t max_rectangles = 200'000'000;
  int audit_points = 10;
  int threads = 1;
  bool keep_leaves = false;
};

struct E1Result {
  VerificationReport report;
  std::vector<Rectangle> leaves;
};

E1Result VerifyE1(const E1Options& opts);

// The closed-form bounds used for x >= x0 >= 100.
VerificationReport VerifyE1LargeX(double Lambda, double x0);

using TailFn = std::function<TailValue(double)>;

struct ChainResult {
  VerificationReport report;
  std::vector<double> points;
};

// x_{i+1} = -Lambda log P(X >= x_i + 1), rounded up, starting from x0. The
// caller is responsible for domination on [x0, inf).
ChainResult DominanceChain(const TailFn& tail, double Lambda, double x0,
                           double floor, std::int64_t max_iters);

// 1/2 P(Y >= 2x/(a+b)) for Y ~ Geom(p): a lower bound on P(U_1 + ... + U_Y
// >= x) with U_i ~ U[a, b].
double GeomHalfBound(double p, double a, double b, double x);
double GeomHalfLogBound(double p, double a, double b, double x);

enum class ToySide { kRed, kBlue };

struct ToyOptions {
  double gamma = 0.1216;
  ToySide side = ToySide::kRed;
  double c = 1.26;
  double a = 0.999;
  double Lambda = 13.06207;
  // Zero picks the default for the side: 2000 (red) or 1e6 (blue).
  double x0 = 0;
  std::int64_t max_iters = 10'000'000;
  // Exact Irwin-Hall up to this many summands in the chain tails.
  int irwin_hall_max_k = 320;
  bool keep_chain = false;
};

struct ToyResult {
  VerificationReport report;
  std::vector<double> chain;
};

ToyResult VerifyToy(const ToyOptions& opts);

struct DominanceOptions {
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  // Each one-sample DKW band holds with probability at least 1 - alpha.
  double alpha = 1e-6;
  int threads = 1;
};

// Statistical test of X >= Y in the usual stochastic order from empirical
// tails. FALSIFIED when sup_x P(Y >= x) - P(X >= x) exceeds the two DKW
// bands; VERIFIED otherwise.
VerificationReport VerifyDominance(const DistSpec& x, const DistSpec& y,
                                   const DominanceOptions& opts);

}  // namespace coalesce

#endif  // COALESCE_VERIFY_HPP_
