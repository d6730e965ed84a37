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

// Acceptance runner. `acceptance --criterion N` checks one criterion and
// prints a single PASS/FAIL line; without arguments it runs all fourteen.

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coalesce/colored_interval.hpp"
#include "coalesce/dist.hpp"
#include "coalesce/lbound.hpp"
#include "coalesce/montecarlo.hpp"
#include "coalesce/presets.hpp"
#include "coalesce/renorm.hpp"
#include "coalesce/special.hpp"
#include "coalesce/verify.hpp"
#include "oracles.hpp"
#include "properties.hpp"

namespace {

using Clock = std::chrono::steady_clock;
using coalesce::Status;

struct Outcome {
  bool pass;
  std::string detail;
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome OracleEquivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10000; ++i) {
    std::string why;
    if (!props::MatchesOracle(rng, &why)) {
      return {false, "instance " + std::to_string(i) + ": " + why};
    }
  }
  const double s = Seconds(t0);
  return {s < 120, "10000 instances match, " + Fmt("%.1f s", s)};
}

Outcome PropertySuites() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2);
  const std::pair<const char*, bool (*)(std::mt19937_64&)> suites[] = {
      {"merge bound for two red-ended intervals", props::Lemma62},
      {"power-of-two merge bound", props::Corollary63},
      {"long blues swallow a red-ended interval", props::Proposition64}};
  for (const auto& [name, fn] : suites) {
    for (int i = 0; i < 100000; ++i) {
      if (!fn(rng)) return {false, std::string(name) + " violated at " + std::to_string(i)};
    }
  }
  const double s = Seconds(t0);
  return {s < 120, "3 x 100000 instances, 0 violations, " + Fmt("%.1f s", s)};
}

Outcome TripleTable() {
  if (!coalesce::IsRenormalisable(0.2, 10.0 / 9.0, 12)) return {false, "(1/5, 10/9, 12) rejected"};
  if (!coalesce::IsRenormalisable(0.23, 1.04, 10)) return {false, "(0.23, 1.04, 10) rejected"};
  std::vector<std::int64_t> ks;
  for (std::int64_t k = 7; k <= 2000; ++k) ks.push_back(k);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 5000; ++i) ks.push_back(std::uniform_int_distribution<std::int64_t>(7, 1000000)(rng));
  ks.push_back(1000000);
  for (auto k : ks) {
    if (coalesce::IsRenormalisable(0.25, 2, k)) {
      return {false, "(1/4, 2, " + std::to_string(k) + ") accepted"};
    }
  }
  return {true, "2 accepted, " + std::to_string(ks.size()) + " values of k rejected"};
}

Outcome Threshold() {
  const auto p = coalesce::MakePreset("counter", {{"c1", 0.08}, {"c2", 0.01}});
  const auto mr = coalesce::ComputeMoments(p.red), mb = coalesce::ComputeMoments(p.blue);
  const double c = coalesce::ComputeC(mr.mean, mb.mean, mr.variance, mb.variance, 1.04);
  const auto Q = coalesce::Renorm2Root(10, c, 2'000'000);
  if (!Q) return {false, "no root"};
  // 50-digit evaluation of the same closed forms.
  using D = boost::multiprecision::cpp_dec_float_50;
  const D c1("0.08"), c2("0.01"), beta("1.04");
  const D var = c1 * (1 - c1) * (1 + c2) + c2 * c2 / 6;
  const D mu = 2 + c2 - c1;
  const D cc = var * (beta + 1) * (beta + 1) / ((beta - 1) * (beta - 1) * mu * mu);
  const D disc = 1 - 4 * D(17) * D(10) * cc / D(2000000);
  const double want = static_cast<double>((1 + sqrt(disc)) / D(34));
  const bool ok = *Q >= 0.058 && *Q <= 0.0600 && std::fabs(*Q - want) <= 1e-9;
  return {ok, Fmt("c = %.6f, ", c) + Fmt("Q = %.10f, ", *Q) + Fmt("|Q - Q50| = %.1e", std::fabs(*Q - want))};
}

Outcome Confidence() {
  const double v = coalesce::Log10BinomialCdf(1000, 13, 0.058);
  double worst = 0;
  for (int n = 1; n <= 50; ++n) {
    for (int k = 0; k <= n; ++k) {
      for (double q : {0.01, 0.058, 0.3, 0.77}) {
        const double exact = std::log10(oracle::BinomialCdfExact(n, k, q).convert_to<double>());
        const double got = coalesce::Log10BinomialCdf(n, k, q);
        worst = std::max(worst, std::fabs(got - exact) / std::max(1.0, std::fabs(exact)));
      }
    }
  }
  return {v < -12 && worst <= 1e-9,
          Fmt("log10 P = %.4f, ", v) + Fmt("worst rational mismatch %.1e", worst)};
}

Outcome MonteCarlo(bool full) {
  const auto t0 = Clock::now();
  const auto p = coalesce::MakePreset("counter");
  coalesce::EstimateConfig cfg;
  cfg.n = full ? 2'000'000 : 20'000;
  cfg.trials = full ? 1000 : 200;
  cfg.alpha = 0.23;
  cfg.seed = 42;
  cfg.threads = 0;
  cfg.q_star = 0.058;
  const auto q = coalesce::EstimateQ(p.red, p.blue, cfg);
  const double s = Seconds(t0);
  const auto [lo, hi] = coalesce::BinomialConfidence(
      static_cast<std::int64_t>(q.trials - q.degenerate), static_cast<std::int64_t>(q.bad), 0.99);
  std::string detail = "q_hat = " + Fmt("%.4f", q.q_hat) + " (" + std::to_string(q.bad) + "/" +
                       std::to_string(q.trials) + " bad), 99% CI [" + Fmt("%.4f", lo) + ", " +
                       Fmt("%.4f", hi) + "], log10 P(<= bad | q = 0.058) = " +
                       Fmt("%.3f", q.log10_prob.value_or(NAN)) + ", " + Fmt("%.1f s", s);
  bool ok = q.log10_prob.has_value() && std::isfinite(q.q_hat);
  if (full) {
    const double good = static_cast<double>(q.trials - q.bad - q.degenerate);
    ok = ok && std::fabs(good - 987) <= 11;
    detail += ", good = " + Fmt("%.0f", good) + " vs 987 +- 11";
  } else {
    ok = ok && s < 300;
  }
  return {ok, detail};
}

Outcome E1Main() {
  const auto t0 = Clock::now();
  coalesce::E1Options o;
  o.Lambda = 13.06207;
  o.delta = 1e-10;
  o.threads = 0;
  const auto r = coalesce::VerifyE1(o);
  const auto large = coalesce::VerifyE1LargeX(13.06207, 100);
  const double s = Seconds(t0);
  std::string detail = std::string("box ") + coalesce::StatusName(r.report.status) +
                       " after " + std::to_string(r.report.rectangles_processed) +
                       " rectangles, large-x " + coalesce::StatusName(large.status);
  if (r.report.witness) {
    detail += ", witness";
    for (const auto& [k, v] : r.report.witness->values) detail += " " + k + "=" + Fmt("%.10g", v);
  }
  detail += ", " + Fmt("%.1f s", s);
  return {r.report.status == Status::kVerified && large.status == Status::kVerified && s < 600,
          detail};
}

Outcome E1Negative() {
  coalesce::E1Options o;
  o.Lambda = 1;
  const auto r = coalesce::VerifyE1(o);
  std::string detail = coalesce::StatusName(r.report.status);
  if (r.report.witness) {
    for (const auto& [k, v] : r.report.witness->values) detail += " " + k + "=" + Fmt("%.6g", v);
  }
  return {r.report.status == Status::kFalsified && r.report.witness.has_value(), detail};
}

Outcome Trajectory() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  const double Lambda = 13.06207;
  for (int i = 0; i < 10000; ++i) {
    const double delta = 0.001 + 0.6 * u(rng);
    const double a = (1 - delta) * u(rng);
    const double lambda = Lambda / (1 - delta) * (1 + 20 * u(rng) * u(rng));
    const double eps = std::min({delta / 2, 0.01, 0.1}) * (1e-4 + (1 - 2e-4) * u(rng));
    const auto st = coalesce::EvolveStep({a, lambda, eps, Lambda, 0});
    if (st.next.a > 1 - delta || st.next.lambda / lambda < 1 + eps * eps / 2) {
      return {false, "violation at state " + std::to_string(i)};
    }
  }
  const double s = Seconds(t0);
  return {s < 10, "10000 states, 0 violations, " + Fmt("%.2f s", s)};
}

Outcome RedDom() {
  const auto t0 = Clock::now();
  const std::vector<double> grid{1.5, 2, 4, 8, 16, 64};
  const auto pos = coalesce::RedDomEmpirical(0.5, 0.01, 13.06207, 10'000'000, grid, 1, 0);
  const auto neg = coalesce::RedDomEmpirical(0.5, 0.01, 0, 10'000'000, grid, 2, 0);
  const double s = Seconds(t0);
  return {pos.max_sigmas < 4 && neg.max_sigmas >= 4 && s < 120,
          Fmt("max excess %.2f sigma at Lambda = 13.06207, ", pos.max_sigmas) +
              Fmt("%.1f sigma at Lambda = 0, ", neg.max_sigmas) + Fmt("%.1f s", s)};
}

Outcome Toy() {
  const auto t0 = Clock::now();
  coalesce::ToyOptions red;
  red.gamma = 0.1216;
  red.side = coalesce::ToySide::kRed;
  red.a = 0.999;
  const auto r = coalesce::VerifyToy(red);
  coalesce::ToyOptions blue;
  blue.gamma = 6.048;
  blue.side = coalesce::ToySide::kBlue;
  blue.c = 1.26;
  blue.a = 0.999;
  const auto b = coalesce::VerifyToy(blue);
  const double s = Seconds(t0);
  auto describe = [](const coalesce::VerificationReport& rep) {
    std::string d = coalesce::StatusName(rep.status);
    for (const auto& sub : rep.sub_checks) {
      if (sub.status != Status::kVerified) d += " [" + sub.check + " " + coalesce::StatusName(sub.status) + "]";
    }
    return d;
  };
  return {r.report.status == Status::kVerified && b.report.status == Status::kVerified && s < 300,
          "red " + describe(r.report) + ", blue " + describe(b.report) + ", " + Fmt("%.1f s", s)};
}

Outcome IrwinHall() {
  const auto t0 = Clock::now();
  double worst = 0;
  std::mt19937_64 rng(12);
  for (int k = 1; k <= 12; ++k) {
    const oracle::IrwinHallPieces exact(k);
    std::uniform_real_distribution<double> u(0, k);
    for (int i = 0; i < 200; ++i) {
      const double t = u(rng);
      worst = std::max(worst, std::fabs(coalesce::IrwinHallCdf(k, t) -
                                        exact.Cdf(oracle::Q(t)).convert_to<double>()));
    }
  }
  int misses = 0;
  for (int k = 13; k <= 64; ++k) {
    for (int i = 1; i <= 100; ++i) {
      const double t = k * i / 101.0;
      const auto [lo, hi] = coalesce::UniformSumLogSfBounds(k, 0, 1, t);
      const double v = coalesce::IrwinHallLogSf(k, t);
      if (!(lo <= v && v <= hi)) ++misses;
    }
  }
  const double s = Seconds(t0);
  return {worst <= 1e-10 && misses == 0 && s < 60,
          Fmt("max |exact - convolution| = %.1e, ", worst) + std::to_string(misses) +
              " enclosure misses in 5200 points, " + Fmt("%.1f s", s)};
}

std::string RunCli(const std::string& args) {
  const std::string cmd = std::string(COALESCE_CLI_PATH) + " " + args;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return "";
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int rc = pclose(p);
  if (rc != 0) out += "\nexit " + std::to_string(rc);
  return out;
}

Outcome Determinism() {
  unsetenv("COALESCE_THREADS");
  const std::string base =
      "estimate-q --preset counter --n 2000 --trials 96 --alpha 0.23 --seed 42 --q-star 0.058";
  const std::string a = RunCli("--threads 1 " + base);
  const std::string b = RunCli("--threads 4 " + base);
  const std::string c = RunCli("--threads 16 " + base);
  const bool ok = !a.empty() && a.find("\"q_hat\"") != std::string::npos && a == b && a == c;
  return {ok, ok ? "identical JSON (" + std::to_string(a.size()) + " bytes) at 1, 4, 16 threads"
                 : "outputs differ"};
}

Outcome Conservation() {
  std::mt19937_64 rng(14);
  std::exponential_distribution<double> e(1.0);
  for (int rep = 0; rep < 3; ++rep) {
    std::vector<double> l(1'000'000);
    for (auto& v : l) v = e(rng) + 1e-9;
    const auto c = coalesce::ColoredInterval::Alternating(coalesce::Colour::kRed, l);
    const auto closed = coalesce::Closure(c).interval;
    const double rel = std::fabs(closed.total_length() - c.total_length()) / c.total_length();
    if (rel > 1e-12 || !coalesce::IsClosed(closed)) {
      return {false, Fmt("relative length error %.2e or non-unimodal output", rel)};
    }
  }
  const auto p = coalesce::MakePreset("main_theorem");
  const auto w = coalesce::SampleWindow(p.red, p.blue, 2'000'000, 7, 0);
  const auto t0 = Clock::now();
  const auto closed = coalesce::Closure(w).interval;
  const double s = Seconds(t0);
  const double rel = std::fabs(closed.total_length() - w.total_length()) / w.total_length();
  return {s < 30 && rel <= 1e-12 && coalesce::IsClosed(closed),
          "1e6-segment windows conserve length; 4e6-segment closure " + Fmt("%.2f s", s) +
              Fmt(", relative error %.1e", rel)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria runner"};
  int only = 0;
  bool full = false;
  app.add_option("--criterion", only, "criterion to run (1-14); all when omitted")
      ->check(CLI::Range(1, 14));
  app.add_flag("--full-scale", full, "criterion 6 at n = 2e6 with 1000 trials (hours)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Outcome()>> criteria = {
      OracleEquivalence, PropertySuites, TripleTable, Threshold, Confidence,
      [full] { return MonteCarlo(full); }, E1Main, E1Negative, Trajectory, RedDom, Toy,
      IrwinHall, Determinism, Conservation};
  int failures = 0;
  for (int i = 1; i <= 14; ++i) {
    if (only != 0 && i != only) continue;
    Outcome o;
    try {
      o = criteria[i - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << i << ": " << (o.pass ? "PASS" : "FAIL") << " - " << o.detail
              << std::endl;
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
