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
#include <random>

#include "coalesce/dist.hpp"
#include "coalesce/error.hpp"
#include "coalesce/presets.hpp"
#include "coalesce/renorm.hpp"
#include "coalesce/report.hpp"
#include "coalesce/special.hpp"
#include "doctest.h"

TEST_CASE("renormalisable triples") {
  CHECK(coalesce::IsRenormalisable(0.2, 10.0 / 9.0, 12));
  CHECK(coalesce::IsRenormalisable(0.23, 1.04, 10));
  for (std::int64_t k : {1, 2, 7, 8, 9, 10, 11, 100, 12345, 1000000}) {
    CHECK_FALSE(coalesce::IsRenormalisable(0.25, 2, k));
  }
  CHECK_FALSE(coalesce::IsRenormalisable(0.3, 1.04, 10));
  CHECK_FALSE(coalesce::IsRenormalisable(0.23, 1.0, 10));
  CHECK_FALSE(coalesce::IsRenormalisable(0.23, 1.04, 6));
  // 10/9 is not a double; the triple must still be accepted at k = 12 and
  // rejected at k = 11 where (e:b2) needs 0.2 * 8 > 2 * (10/9) * 0.8.
  CHECK_FALSE(coalesce::IsRenormalisable(0.2, 10.0 / 9.0, 11));
}

TEST_CASE("compute_c") {
  const double c1 = 0.08, c2 = 0.01;
  const double want = 51.0 * 51.0 * (c1 * (1 - c1) * (1 + c2) + c2 * c2 / 6) /
                      ((2 + c2 - c1) * (2 + c2 - c1));
  const auto p = coalesce::MakePreset("counter");
  const auto mr = coalesce::ComputeMoments(p.red), mb = coalesce::ComputeMoments(p.blue);
  const double c = coalesce::ComputeC(mr.mean, mb.mean, mr.variance, mb.variance, 1.04);
  CHECK(c == doctest::Approx(want).epsilon(1e-12));
  CHECK(c == doctest::Approx(51.92).epsilon(1e-3));
  CHECK(coalesce::ComputeC(1, 2, 0, 0, 1.5) == 0);
  CHECK(coalesce::ComputeC(1, 1, 1, 1, 1e12) == doctest::Approx(0.5));
  CHECK_THROWS_AS(coalesce::ComputeC(1, 1, INFINITY, 1, 2), coalesce::Error);
}

TEST_CASE("renorm2_root") {
  auto q = coalesce::Renorm2Root(10, 0, 1000);
  REQUIRE(q);
  CHECK(*q == doctest::Approx(1.0 / 17));
  q = coalesce::Renorm2Root(10, 51.9239, 2'000'000);
  REQUIRE(q);
  CHECK(*q >= 0.058);
  CHECK(*q <= 0.0600);
  // Discriminant zero: 4 * 17 * 10 * c = n.
  q = coalesce::Renorm2Root(10, 1.0, 680);
  REQUIRE(q);
  CHECK(*q == doctest::Approx(1.0 / 34));
  CHECK_FALSE(coalesce::Renorm2Root(10, 1.0, 679).has_value());
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> uc(0, 100);
  for (int i = 0; i < 1000; ++i) {
    const std::int64_t k = 7 + static_cast<std::int64_t>(i % 20);
    const double c = uc(rng);
    const auto r = coalesce::Renorm2Root(k, c, 10'000'000);
    REQUIRE(r);
    const double x = *r;
    const double rhs = (2.0 * k - 3) * x * x + k * c / 1e7;
    CHECK(std::fabs(x - rhs) <= 1e-12 * x);
  }
}

TEST_CASE("q recursion") {
  auto r = coalesce::RunQRecursion(1.0 / 40, coalesce::ZeroEta(), 10, 200);
  CHECK(r.converged);
  CHECK(r.q.back() < 1e-30);
  r = coalesce::RunQRecursion(1.0, coalesce::ZeroEta(), 10, 200);
  CHECK_FALSE(r.converged);
  const auto p = coalesce::MakePreset("counter");
  const auto mr = coalesce::ComputeMoments(p.red), mb = coalesce::ComputeMoments(p.blue);
  const double c = coalesce::ComputeC(mr.mean, mb.mean, mr.variance, mb.variance, 1.04);
  const auto eta = coalesce::ChebyshevEta(c, 10, 2'000'000);
  r = coalesce::RunQRecursion(0.013, eta, 10, 200);
  CHECK(r.converged);
  REQUIRE(r.tail_bound);
  CHECK(std::isfinite(r.partial_sum + *r.tail_bound));
  // Monotone decrease once k eta_t <= (1 - (2k - 3) q_t) q_t.
  bool started = false;
  for (std::size_t t = 0; t + 1 < r.q.size(); ++t) {
    const double q = r.q[t];
    if (!started && 10 * eta.eta(static_cast<int>(t)) <= (1 - 17 * q) * q) started = true;
    if (started) CHECK(r.q[t + 1] <= q);
  }
}

TEST_CASE("certify") {
  const auto p = coalesce::MakePreset("counter");
  const coalesce::RenormParams params;
  const double conf = coalesce::Log10BinomialCdf(1000, 13, 0.058);
  auto cert = coalesce::Certify(params, p.red, p.blue, 0.013, conf);
  CHECK(cert.certified);
  REQUIRE(cert.Q);
  CHECK(*cert.Q >= 0.058);
  const auto j = coalesce::ToJson(cert);
  CHECK(j.contains("tool_version"));
  CHECK(j.contains("input_hashes"));
  CHECK(j["confidence_log10"].get<double>() < -12);

  cert = coalesce::Certify(params, p.red, p.blue, *cert.Q + 0.01);
  CHECK_FALSE(cert.certified);

  // Monotone in q_input.
  bool seen_fail = false;
  for (double q = 0.0; q <= 0.07; q += 0.002) {
    const bool ok = coalesce::Certify(params, p.red, p.blue, q).certified;
    if (!ok) seen_fail = true;
    CHECK_FALSE((seen_fail && ok));
  }
  try {
    coalesce::Certify(params, coalesce::DistSpec::Pareto(0.5), p.blue, 0.01);
    FAIL("pareto accepted");
  } catch (const coalesce::Error& e) {
    CHECK(e.code() == coalesce::ErrorCode::kInfiniteMoment);
  }
  coalesce::RenormParams bad;
  bad.alpha = 0.25;
  bad.beta = 2;
  CHECK_THROWS_AS(coalesce::Certify(bad, p.red, p.blue, 0.01), coalesce::Error);
}
