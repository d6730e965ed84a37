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

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <random>

#include "coalesce/dist.hpp"
#include "coalesce/error.hpp"
#include "coalesce/report.hpp"
#include "coalesce/rng.hpp"
#include "coalesce/verify.hpp"
#include "doctest.h"

using coalesce::Status;

namespace {

// P(X1 + X2 >= y), X_i ~ G(a), by adaptive quadrature over X1.
double ConvTailQuadrature(double a, double y) {
  auto sf = [a](double s) { return s <= 1 ? 1.0 : (a + 1) * (a + 1) / ((a + s) * (a + s)); };
  auto dens = [a](double t) { return 2 * (a + 1) * (a + 1) / std::pow(a + t, 3); };
  auto f = [&](double t) { return dens(t) * sf(y - t); };
  using boost::math::quadrature::gauss_kronrod;
  double total = 0;
  if (y - 1 > 1) total += gauss_kronrod<double, 61>::integrate(f, 1, y - 1, 15, 1e-14);
  total += gauss_kronrod<double, 61>::integrate(f, std::max(1.0, y - 1),
                                                std::numeric_limits<double>::infinity(), 15,
                                                1e-14);
  return total;
}

bool E1HoldsAt(double Lambda, double a, double x) {
  const double lhs = coalesce::ConvTailClosedForm(a, x) / ((a + 1) * (a + 1) / ((a + x) * (a + x))) - 1;
  const double rhs = 2 * (x - 1) * Lambda / ((a + 1) * (a + x));
  return lhs <= rhs;
}

}  // namespace

TEST_CASE("convolution tail closed form") {
  CHECK(coalesce::ConvTailClosedForm(0, 4) == 1);
  CHECK(coalesce::ConvTailClosedForm(1, 4) == 1);
  for (double a = 0; a <= 1; a += 0.125) {
    CHECK(coalesce::ConvTailClosedForm(a, 4) == doctest::Approx(1).epsilon(1e-15));
  }
  // Frozen value; the next case checks it by sampling.
  CHECK(coalesce::ConvTailClosedForm(0, 8) == doctest::Approx(0.28066411769798427).epsilon(1e-14));
  for (double a : {0.0, 0.3, 1.0}) {
    for (double x : {4.5, 8.0, 9.3, 30.0, 99.0}) {
      CHECK(coalesce::ConvTailClosedForm(a, x) ==
            doctest::Approx(ConvTailQuadrature(a, x / 2)).epsilon(1e-10));
      const auto e = coalesce::ConvTailEnclosure(a, x);
      CHECK(e.Contains(coalesce::ConvTailClosedForm(a, x)));
      const double v = coalesce::ConvTailClosedForm(a, x);
      CHECK(v >= 0);
      CHECK(v <= 1);
    }
  }
  CHECK_THROWS_AS(coalesce::ConvTailClosedForm(0.5, 3.9), coalesce::Error);
  CHECK_THROWS_AS(coalesce::ConvTailClosedForm(1.5, 5), coalesce::Error);
}

TEST_CASE("closed form at (0, 8) against 10^7 Pareto pairs") {
  const coalesce::DistSpec g = coalesce::DistSpec::Pareto(0);
  const int n = 10'000'000;
  int hits = 0;
  coalesce::Stream s(31, 0, 0);
  for (int i = 0; i < n; ++i) {
    const double x1 = coalesce::Sample(g, s);
    const double x2 = coalesce::Sample(g, s);
    if (x1 + x2 >= 4) ++hits;
  }
  const double p = coalesce::ConvTailClosedForm(0, 8);
  const double sigma = std::sqrt(p * (1 - p) / n);
  CHECK(std::fabs(static_cast<double>(hits) / n - p) <= 4 * sigma);
}

TEST_CASE("pareto tail and right-side enclosures") {
  const auto p = coalesce::ParetoTailEnclosure(0.5, 10);
  CHECK(p.Contains(2.25 / (10.5 * 10.5)));
  const auto r = coalesce::E1RightSide(13.06207, 1, 4);
  CHECK(r.Contains(2 * 3 * 13.06207 / (2 * 5)));
}

TEST_CASE("e1 negative control") {
  coalesce::E1Options o;
  o.Lambda = 1;
  const auto r = coalesce::VerifyE1(o);
  CHECK(r.report.status == Status::kFalsified);
  REQUIRE(r.report.witness.has_value());
  double a = -1, x = -1;
  for (const auto& [k, v] : r.report.witness->values) {
    if (k == "a") a = v;
    if (k == "x") x = v;
  }
  CHECK_FALSE(E1HoldsAt(1, a, x));
}

TEST_CASE("e1 verifies comfortably above the critical constant") {
  coalesce::E1Options o;
  o.Lambda = 14;
  o.keep_leaves = true;
  const auto one = coalesce::VerifyE1(o);
  CHECK(one.report.status == Status::kVerified);
  o.threads = 4;
  const auto four = coalesce::VerifyE1(o);
  REQUIRE(one.leaves.size() == four.leaves.size());
  for (std::size_t i = 0; i < one.leaves.size(); ++i) {
    CHECK(coalesce::ToJson(one.leaves[i]) == coalesce::ToJson(four.leaves[i]));
  }
  CHECK(coalesce::ToJson(one.report).dump() == coalesce::ToJson(four.report).dump());
  // Independent spot audit of certified leaves.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  for (std::size_t i = 0; i < one.leaves.size(); i += 7) {
    const auto& l = one.leaves[i];
    for (int k = 0; k < 10; ++k) {
      const double a = l.a1 + (l.a2 - l.a1) * u(rng);
      const double x = l.x1 + (l.x2 - l.x1) * u(rng);
      REQUIRE(E1HoldsAt(14, a, x));
    }
  }
}

TEST_CASE("e1 on a degenerate rectangle") {
  coalesce::E1Options o;
  o.Lambda = 13.06207;
  o.a_lo = o.a_hi = 0.5;
  o.x_lo = o.x_hi = 50;
  const auto r = coalesce::VerifyE1(o);
  CHECK(r.report.status == Status::kVerified);
  CHECK(r.report.rectangles_processed == 1);
}

TEST_CASE("e1 large-x closed forms") {
  CHECK(coalesce::VerifyE1LargeX(13.06207, 100).status == Status::kVerified);
  CHECK(coalesce::VerifyE1LargeX(11, 100).status == Status::kVerified);
  const auto bad = coalesce::VerifyE1LargeX(5, 100);
  CHECK(bad.status == Status::kFalsified);
  CHECK(bad.witness.has_value());
  CHECK_THROWS_AS(coalesce::VerifyE1LargeX(13, 50), coalesce::Error);
}

TEST_CASE("chain on an exact shifted exponential is stationary") {
  const double L = 13.06207;
  auto tail = [&](double x) { return coalesce::Tail(coalesce::DistSpec::ShiftedExp(L), x); };
  const auto r = coalesce::DominanceChain(tail, L, 50, 1, 1000);
  CHECK(r.report.status == Status::kFalsified);
  CHECK(r.report.witness.has_value());
  CHECK(r.report.chain_length == 0);
}

TEST_CASE("chain length is monotone in the tail lower bound") {
  const double L = 13.06207;
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0, 0.5);
  for (int rep = 0; rep < 50; ++rep) {
    const double mean = L * (1.05 + u(rng));
    auto base = [&](double x) {
      return coalesce::Tail(coalesce::DistSpec::ShiftedExp(mean), x);
    };
    const double bump = u(rng);
    auto raised = [&](double x) {
      auto t = base(x);
      t.log_lower = std::min(0.0, t.log_lower + bump * std::fabs(std::sin(x)));
      t.lower = std::exp(t.log_lower);
      return t;
    };
    const auto a = coalesce::DominanceChain(base, L, 500, 1, 100000);
    const auto b = coalesce::DominanceChain(raised, L, 500, 1, 100000);
    REQUIRE(a.report.status == Status::kVerified);
    REQUIRE(b.report.status == Status::kVerified);
    CHECK(b.report.chain_length <= a.report.chain_length);
  }
}

TEST_CASE("geometric half bound") {
  CHECK(coalesce::GeomHalfBound(0.3, 1, 2, 1.5) == 0.5);
  CHECK(coalesce::GeomHalfBound(0.3, 1, 2, 0.2) == 0.5);
  CHECK(coalesce::GeomHalfBound(0.5, 0, 2, 2) == 0.25);
  CHECK(coalesce::GeomHalfLogBound(0.5, 0, 2, 2) == doctest::Approx(std::log(0.25)));
  // Case-1 base inequality (1/2)(1 + g)^(-2x/3) >= e^(-x/Lambda): fails at
  // x = 2000 and first holds near x = 12983.71 (recorded finding).
  const double g = 0.1216, L = 13.06207;
  auto holds = [&](double x) {
    return std::log(0.5) - 2 * x / 3 * std::log1p(g) >= -x / L;
  };
  CHECK_FALSE(holds(2000));
  CHECK_FALSE(holds(12983));
  CHECK(holds(12984));
}

TEST_CASE("toy preconditions") {
  coalesce::ToyOptions o;
  o.side = coalesce::ToySide::kBlue;
  o.gamma = 6.048;
  o.c = 1.0;
  try {
    coalesce::VerifyToy(o);
    FAIL("c <= 5/4 accepted");
  } catch (const coalesce::Error& e) {
    CHECK(e.code() == coalesce::ErrorCode::kPreconditionFailed);
  }
  o.c = 7;
  CHECK_THROWS_AS(coalesce::VerifyToy(o), coalesce::Error);
}

TEST_CASE("empirical dominance check") {
  coalesce::DominanceOptions o;
  o.samples = 200000;
  o.seed = 3;
  const auto big = coalesce::DistSpec::ShiftedExp(3), small = coalesce::DistSpec::ShiftedExp(1);
  CHECK(coalesce::VerifyDominance(big, small, o).status == Status::kVerified);
  CHECK(coalesce::VerifyDominance(small, big, o).status == Status::kFalsified);
  // A distribution dominates itself.
  CHECK(coalesce::VerifyDominance(big, big, o).status == Status::kVerified);
}
