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

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "coalesce/rng.hpp"
#include "coalesce/special.hpp"
#include "doctest.h"
#include "oracles.hpp"

using oracle::Q;

TEST_CASE("Philox4x32-10 known answers") {
  using A4 = std::array<std::uint32_t, 4>;
  CHECK(coalesce::Philox4x32({0, 0, 0, 0}, {0, 0}) ==
        A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(coalesce::Philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                             {0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(coalesce::Philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                             {0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are keyed and uniform draws stay inside (0, 1)") {
  coalesce::Stream a(1, 2, 3), b(1, 2, 3), c(1, 3, 3);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    (void)c;
  }
  coalesce::Stream d(1, 2, 3), e(2, 2, 3);
  CHECK(d() != e());
  coalesce::Stream u(5, 5, 5);
  double mean = 0;
  for (int i = 0; i < 100000; ++i) {
    const double v = u.Uniform01();
    REQUIRE(v > 0);
    REQUIRE(v < 1);
    mean += v;
  }
  CHECK(mean / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("Irwin-Hall CDF agrees with piecewise convolution to 1e-10") {
  std::mt19937_64 rng(3);
  for (int k = 1; k <= 12; ++k) {
    const oracle::IrwinHallPieces exact(k);
    std::uniform_real_distribution<double> u(-0.5, k + 0.5);
    for (int i = 0; i < 100; ++i) {
      const double t = u(rng);
      const double want = exact.Cdf(Q(t)).convert_to<double>();
      CHECK(std::fabs(coalesce::IrwinHallCdf(k, t) - want) <= 1e-10);
      CHECK(std::fabs(coalesce::IrwinHallSf(k, t) - (1 - want)) <= 1e-10);
    }
  }
}

TEST_CASE("Berry-Esseen enclosure contains the exact value for 13 <= k <= 64") {
  for (int k = 13; k <= 64; ++k) {
    for (int i = 1; i <= 100; ++i) {
      const double t = k * (i / 101.0);
      const auto [lo, hi] = coalesce::UniformSumLogSfBounds(k, 0, 1, t);
      const double exact = coalesce::IrwinHallLogSf(k, t);
      CHECK(lo <= exact);
      CHECK(exact <= hi);
    }
  }
}

TEST_CASE("tilted bounds contain exact tails far above the mean") {
  for (int k : {100, 200, 320}) {
    for (double frac : {0.55, 0.7, 0.85, 0.95}) {
      const double t = k * frac;
      const auto [lo, hi] = coalesce::TiltedUniformSumLogSf(k, t, t);
      const double exact = coalesce::IrwinHallLogSf(k, t);
      CHECK(lo <= exact);
      CHECK(exact <= hi);
      CHECK(std::isfinite(lo));
    }
  }
}

TEST_CASE("uniform-sum bounds scale with the support") {
  // U[2, 5]: S_k >= t iff the unit sum is >= (t - 2k) / 3.
  for (int k : {70, 150}) {
    for (double frac : {0.3, 0.5, 0.8}) {
      const double t = 2 * k + 3 * k * frac;
      const auto [lo, hi] = coalesce::UniformSumLogSfBounds(k, 2, 5, t);
      const double exact = coalesce::IrwinHallLogSf(k, k * frac);
      CHECK(lo <= exact);
      CHECK(exact <= hi);
    }
  }
}

TEST_CASE("binomial lower tail agrees with exact rationals for N <= 50") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> uq(0.001, 0.999);
  for (int n = 1; n <= 50; ++n) {
    for (int rep = 0; rep < 6; ++rep) {
      const int k = std::uniform_int_distribution<int>(0, n)(rng);
      const double q = uq(rng);
      const Q exact = oracle::BinomialCdfExact(n, k, q);
      const double want = std::log10(exact.convert_to<double>());
      const double got = coalesce::Log10BinomialCdf(n, k, q);
      CHECK(std::fabs(got - want) <= 1e-9 * std::max(1.0, std::fabs(want)));
    }
  }
}

TEST_CASE("binomial tail examples") {
  CHECK(coalesce::Log10BinomialCdf(1000, 13, 0.058) < -12);
  CHECK(coalesce::Log10BinomialCdf(10, 10, 0.3) == 0);
  CHECK(coalesce::Log10BinomialCdf(2, 0, 0.5) == doctest::Approx(std::log10(0.25)));
  CHECK(coalesce::Log10BinomialCdf(5, 2, 0) == 0);
  CHECK(coalesce::Log10BinomialCdf(5, 2, 1) == -std::numeric_limits<double>::infinity());
  // Deep tail stays finite in log space.
  CHECK(std::isfinite(coalesce::Log10BinomialCdf(100000, 10, 0.5)));
}

TEST_CASE("binomial confidence brackets the proportion") {
  const auto [lo, hi] = coalesce::BinomialConfidence(1000, 13, 0.99);
  CHECK(lo < 0.013);
  CHECK(hi > 0.013);
  CHECK(hi < 0.058);
  const auto [z0, z1] = coalesce::BinomialConfidence(100, 0, 0.99);
  CHECK(z0 == 0);
  CHECK(z1 > 0);
}

TEST_CASE("enclosure arithmetic is outward") {
  const auto third = coalesce::Enclosure::Point(1) / coalesce::Enclosure::Point(3);
  CHECK(third.lo < third.hi);
  CHECK(third.Contains(1.0 / 3));
  const auto e = coalesce::Exp(coalesce::Enclosure::Point(1));
  CHECK(e.Contains(std::exp(1.0)));
  const auto l = coalesce::Log(coalesce::Enclosure{2, 3});
  CHECK(l.lo <= std::log(2.0));
  CHECK(l.hi >= std::log(3.0));
  const auto s = coalesce::Square(coalesce::Enclosure{-2, 1});
  CHECK(s.lo <= 0);
  CHECK(s.hi >= 4);
  CHECK(coalesce::StepUp(1.0) > 1.0);
  CHECK(coalesce::StepDown(1.0) < 1.0);
}

TEST_CASE("log-space helpers") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(coalesce::LogAddExp(-inf, 2) == 2);
  CHECK(coalesce::LogAddExp(std::log(2.0), std::log(3.0)) == doctest::Approx(std::log(5.0)));
  CHECK(coalesce::LogSubExp(std::log(5.0), std::log(3.0)) == doctest::Approx(std::log(2.0)));
  CHECK(coalesce::Log1mExp(std::log(0.25)) == doctest::Approx(std::log(0.75)));
  CHECK(coalesce::NormalSf(0) == doctest::Approx(0.5));
  CHECK(coalesce::NormalLogSf(40) == doctest::Approx(-804.608442013754).epsilon(1e-10));
  CHECK(coalesce::NormalCdf(1.0).Contains(0.8413447460685429));
}
