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

#include "coalesce/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>

#include "coalesce/error.hpp"
#include "coalesce/parallel.hpp"
#include "coalesce/rng.hpp"

namespace coalesce {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Enclosure P(double v) { return Enclosure::Point(v); }

std::string Num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void CheckE1Domain(double a, double x) {
  if (!(a >= 0 && a <= 1)) throw Error(ErrorCode::kDomain, "a must lie in [0, 1]");
  if (!(x >= 4)) throw Error(ErrorCode::kDomain, "x must be at least 4");
}

struct PointCheck {
  Enclosure lhs;
  Enclosure rhs;
};

// Both sides of the inequality at a single point; lhs includes delta.
PointCheck EvalPoint(double Lambda, double delta, double a, double x) {
  const Enclosure ratio = ConvTailEnclosure(a, x) / ParetoTailEnclosure(a, x);
  return {ratio - P(1.0) + P(delta), E1RightSide(Lambda, a, x)};
}

bool Violated(const PointCheck& c) { return c.lhs.lo > c.rhs.hi; }

Witness PointWitness(const std::string& what, double a, double x,
                     const PointCheck& c) {
  return {what,
          {{"a", a},
           {"x", x},
           {"lhs_lower", c.lhs.lo},
           {"rhs_upper", c.rhs.hi},
           {"excess", c.lhs.lo - c.rhs.hi}}};
}

enum class Verdict { kCertified, kSplit, kFalsified, kStuck };

struct Outcome {
  Verdict verdict = Verdict::kSplit;
  double margin = 0;
  std::optional<Witness> witness;
  std::string audit_failure;
};

}  // namespace

const char* StatusName(Status s) {
  switch (s) {
    case Status::kVerified: return "VERIFIED";
    case Status::kFalsified: return "FALSIFIED";
    case Status::kInconclusive: return "INCONCLUSIVE";
  }
  return "UNKNOWN";
}

double ConvTailClosedForm(double a, double x) {
  CheckE1Domain(a, x);
  const double u = 4 * a + x;
  const double a1 = a + 1;
  return 8 * a1 * a1 * (u * u + 6 * a1 * (x - 4)) / (u * u * u * (2 * a + x - 2)) +
         192 * a1 * a1 * a1 * a1 / (u * u * u * u) *
             std::log((2 * a + x - 2) / (2 * a + 2));
}

Enclosure ConvTailEnclosure(double a, double x) {
  CheckE1Domain(a, x);
  const Enclosure A = P(a), X = P(x);
  const Enclosure u = P(4.0) * A + X;
  const Enclosure a1 = A + P(1.0);
  const Enclosure a1sq = Square(a1);
  const Enclosure v = P(2.0) * A + X - P(2.0);
  const Enclosure first = P(8.0) * a1sq * (Square(u) + P(6.0) * a1 * (X - P(4.0))) /
                          (Square(u) * u * v);
  const Enclosure second = P(192.0) * Square(a1sq) / Square(Square(u)) *
                           Log(v / (P(2.0) * A + P(2.0)));
  Enclosure r = first + second;
  r.lo = std::max(r.lo, 0.0);
  r.hi = std::min(r.hi, 1.0);
  return r;
}

Enclosure ParetoTailEnclosure(double a, double x) {
  if (!(x >= 1)) throw Error(ErrorCode::kDomain, "x must be at least 1");
  return Square((P(a) + P(1.0)) / (P(a) + P(x)));
}

Enclosure E1RightSide(double Lambda, double a, double x) {
  return P(2.0) * (P(x) - P(1.0)) * P(Lambda) /
         ((P(a) + P(1.0)) * (P(a) + P(x)));
}

E1Result VerifyE1(const E1Options& o) {
  if (!(o.Lambda > 0) || !(o.delta > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "need Lambda > 0 and delta > 0");
  }
  if (!(o.a_lo <= o.a_hi) || !(o.x_lo <= o.x_hi)) {
    throw Error(ErrorCode::kInvalidArgument, "empty rectangle");
  }
  CheckE1Domain(o.a_lo, o.x_lo);
  CheckE1Domain(o.a_hi, o.x_hi);
  E1Result out;
  VerificationReport& rep = out.report;
  rep.check = "e1";
  rep.region = "[" + Num(o.a_lo) + ", " + Num(o.a_hi) + "] x [" + Num(o.x_lo) +
               ", " + Num(o.x_hi) + "]";
  rep.slack = kInf;
  const double span_a = o.a_hi > o.a_lo ? o.a_hi - o.a_lo : 1.0;
  const double span_x = o.x_hi > o.x_lo ? o.x_hi - o.x_lo : 1.0;
  const int threads = ResolveThreads(o.threads);

  auto process = [&](const Rectangle& r, std::uint64_t ordinal) {
    Outcome res;
    const Enclosure up = ConvTailEnclosure(r.a2, r.x1) / ParetoTailEnclosure(r.a1, r.x2);
    const Enclosure lhs = up - P(1.0) + P(o.delta);
    const Enclosure rhs = E1RightSide(o.Lambda, r.a2, r.x1);
    if (lhs.hi <= rhs.lo) {
      res.verdict = Verdict::kCertified;
      res.margin = rhs.lo - lhs.hi;
      Stream s(0xA0D17ULL, ordinal, 0);
      for (int i = 0; i < o.audit_points; ++i) {
        const double a = r.a1 + (r.a2 - r.a1) * s.Uniform01();
        const double x = r.x1 + (r.x2 - r.x1) * s.Uniform01();
        const PointCheck c = EvalPoint(o.Lambda, o.delta, a, x);
        if (Violated(c)) {
          res.verdict = Verdict::kFalsified;
          res.witness = PointWitness("audit point violates the inequality", a, x, c);
          return res;
        }
        if (c.lhs.mid() > c.rhs.mid()) {
          res.audit_failure = "audit point at a=" + Num(a) + ", x=" + Num(x) +
                              " exceeds the bound in double arithmetic";
        }
      }
      return res;
    }
    const double pts[5][2] = {{r.a2, r.x1}, {r.a1, r.x1}, {r.a2, r.x2},
                              {r.a1, r.x2}, {0.5 * (r.a1 + r.a2), 0.5 * (r.x1 + r.x2)}};
    for (const auto& p : pts) {
      const PointCheck c = EvalPoint(o.Lambda, o.delta, p[0], p[1]);
      if (Violated(c)) {
        res.verdict = Verdict::kFalsified;
        res.witness = PointWitness("pointwise violation", p[0], p[1], c);
        return res;
      }
    }
    const double wa = r.a2 - r.a1, wx = r.x2 - r.x1;
    if (r.depth >= o.max_depth || std::max(wa, wx) < o.min_width) {
      res.verdict = Verdict::kStuck;
    }
    return res;
  };

  std::vector<Rectangle> level = {{o.a_lo, o.a_hi, o.x_lo, o.x_hi, 0}};
  std::uint64_t processed = 0, leaves = 0, stuck = 0, audit_warnings = 0;
  int deepest = 0;
  std::optional<Witness> witness;
  std::optional<Rectangle> stuck_at;
  while (!level.empty()) {
    if (processed + level.size() > o.max_rectangles) {
      rep.notes.push_back("rectangle budget exhausted");
      stuck += level.size();
      break;
    }
    std::vector<Outcome> res(level.size());
    const std::uint64_t base = processed;
    ParallelFor(level.size(), threads,
                [&](std::size_t i) { res[i] = process(level[i], base + i); });
    processed += level.size();
    std::vector<Rectangle> next;
    for (std::size_t i = 0; i < level.size(); ++i) {
      const Rectangle& r = level[i];
      deepest = std::max(deepest, r.depth);
      switch (res[i].verdict) {
        case Verdict::kCertified:
          ++leaves;
          rep.slack = std::min(rep.slack, res[i].margin);
          if (!res[i].audit_failure.empty()) {
            if (audit_warnings++ == 0) rep.notes.push_back(res[i].audit_failure);
          }
          if (o.keep_leaves) out.leaves.push_back(r);
          break;
        case Verdict::kFalsified:
          if (!witness) witness = res[i].witness;
          break;
        case Verdict::kStuck:
          if (!stuck_at) stuck_at = r;
          ++stuck;
          break;
        case Verdict::kSplit: {
          Rectangle lo = r, hi = r;
          lo.depth = hi.depth = r.depth + 1;
          if ((r.a2 - r.a1) / span_a >= (r.x2 - r.x1) / span_x) {
            const double m = 0.5 * (r.a1 + r.a2);
            lo.a2 = m;
            hi.a1 = m;
          } else {
            const double m = 0.5 * (r.x1 + r.x2);
            lo.x2 = m;
            hi.x1 = m;
          }
          next.push_back(lo);
          next.push_back(hi);
          break;
        }
      }
    }
    if (witness) break;
    level = std::move(next);
  }
  rep.rectangles_processed = processed;
  rep.metrics = {{"Lambda", o.Lambda},
                 {"delta", o.delta},
                 {"leaves", static_cast<double>(leaves)},
                 {"max_depth", static_cast<double>(deepest)},
                 {"audit_points_per_leaf", static_cast<double>(o.audit_points)},
                 {"audit_warnings", static_cast<double>(audit_warnings)}};
  if (witness) {
    rep.status = Status::kFalsified;
    rep.witness = witness;
  } else if (stuck > 0) {
    rep.status = Status::kInconclusive;
    if (stuck_at) {
      rep.witness = Witness{"undecided rectangle at the subdivision limit",
                            {{"a1", stuck_at->a1},
                             {"a2", stuck_at->a2},
                             {"x1", stuck_at->x1},
                             {"x2", stuck_at->x2}}};
    }
  } else {
    rep.status = Status::kVerified;
  }
  if (leaves == 0) rep.slack = std::numeric_limits<double>::quiet_NaN();
  return out;
}

VerificationReport VerifyE1LargeX(double Lambda, double x0) {
  if (!(x0 >= 100)) throw Error(ErrorCode::kDomain, "x0 must be at least 100");
  if (!(Lambda > 0)) throw Error(ErrorCode::kInvalidArgument, "Lambda must be positive");
  VerificationReport rep;
  rep.check = "e1_largex";
  rep.region = "[0, 1] x [" + Num(x0) + ", inf)";
  const Enclosure X = P(x0);
  // Decreasing in x, so its value at x0 bounds the ratio for all x >= x0.
  const Enclosure ratio = P(8.0) + P(176.0) / (X - P(2.0)) +
                          P(192.0) / (Square(X) * X);
  // Increasing in x.
  const Enclosure rhs = (X - P(1.0)) * P(Lambda) / (X + P(1.0));
  rep.metrics = {{"Lambda", Lambda},
                 {"x0", x0},
                 {"ratio_bound_upper", ratio.hi},
                 {"rhs_bound_lower", rhs.lo}};
  const bool ok_ratio = ratio.hi <= 10.0;
  const bool ok_rhs = rhs.lo >= 10.0;
  rep.rectangles_processed = 1;
  if (ok_ratio && ok_rhs) {
    rep.status = Status::kVerified;
    rep.slack = std::min(10.0 - ratio.hi, rhs.lo - 10.0);
    rep.notes.push_back(
        "ratio <= 8 + 176/(x-2) + 192/x^3 is decreasing and "
        "2(x-1)Lambda/((a+1)(a+x)) >= (x-1)Lambda/(x+1) is increasing in x");
    return rep;
  }
  rep.slack = std::numeric_limits<double>::quiet_NaN();
  // The closed forms are only sufficient; look for a genuine violation.
  for (int j = 0; j <= 40; ++j) {
    const double x = std::ldexp(x0, j);
    for (double a : {1.0, 0.75, 0.5, 0.25, 0.0}) {
      const PointCheck c = EvalPoint(Lambda, 0.0, a, x);
      ++rep.rectangles_processed;
      if (Violated(c)) {
        rep.status = Status::kFalsified;
        rep.witness = PointWitness("pointwise violation (delta = 0)", a, x, c);
        return rep;
      }
    }
  }
  rep.status = Status::kInconclusive;
  rep.notes.push_back(ok_ratio ? "(x-1)Lambda/(x+1) < 10 at x0"
                               : "8 + 176/(x-2) + 192/x^3 > 10 at x0");
  return rep;
}

ChainResult DominanceChain(const TailFn& tail, double Lambda, double x0,
                           double floor, std::int64_t max_iters) {
  if (!(Lambda > 0)) throw Error(ErrorCode::kInvalidArgument, "Lambda must be positive");
  ChainResult out;
  VerificationReport& rep = out.report;
  rep.check = "dominance_chain";
  rep.region = "[" + Num(floor) + ", " + Num(x0) + "]";
  rep.slack = kInf;
  double x = x0;
  out.points.push_back(x);
  std::int64_t i = 0;
  for (; i < max_iters; ++i) {
    if (x < floor) break;
    const TailValue t = tail(x + 1.0);
    const double next = t.log_lower == -kInf ? kInf : StepUp(-Lambda * t.log_lower);
    if (!(next < x)) {
      rep.status = Status::kFalsified;
      rep.chain_length = static_cast<std::uint64_t>(i);
      rep.witness = Witness{"chain does not decrease",
                            {{"index", static_cast<double>(i)},
                             {"x_i", x},
                             {"x_next", next},
                             {"log_tail_lower", t.log_lower}}};
      rep.metrics = {{"Lambda", Lambda}, {"x0", x0}, {"floor", floor}};
      return out;
    }
    rep.slack = std::min(rep.slack, x - next);
    x = next;
    out.points.push_back(x);
  }
  rep.chain_length = static_cast<std::uint64_t>(i);
  rep.metrics = {{"Lambda", Lambda}, {"x0", x0}, {"floor", floor}, {"x_last", x}};
  if (x < floor) {
    rep.status = Status::kVerified;
  } else {
    rep.status = Status::kInconclusive;
    rep.notes.push_back("iteration budget exhausted");
  }
  if (i == 0) rep.slack = std::numeric_limits<double>::quiet_NaN();
  return out;
}

namespace {

// Smallest integer k with k >= 2x / (a + b), never too small.
double HalfBoundIndex(double a, double b, double x) {
  double s = a + b;
  if (s - a != b || s - b != a) s = StepDown(s);
  const double twice = 2.0 * x;
  const double r = twice / s;
  return std::fma(r, s, -twice) >= 0 ? std::ceil(r) : std::ceil(StepUp(r));
}

void CheckHalfBoundArgs(double p, double a, double b) {
  if (!(p > 0 && p <= 1) || !(a >= 0 && a < b)) {
    throw Error(ErrorCode::kInvalidArgument, "need 0 < p <= 1 and 0 <= a < b");
  }
}

}  // namespace

double GeomHalfLogBound(double p, double a, double b, double x) {
  CheckHalfBoundArgs(p, a, b);
  const double half = -std::log(2.0);
  if (x <= 0.5 * (a + b) || p == 1) return half;
  const double k = HalfBoundIndex(a, b, x);
  return StepDown(StepDown(half) + (k - 1.0) * StepUp(std::log(p)));
}

double GeomHalfBound(double p, double a, double b, double x) {
  CheckHalfBoundArgs(p, a, b);
  if (x <= 0.5 * (a + b) || p == 1) return 0.5;
  const double k = HalfBoundIndex(a, b, x);
  if (k - 1.0 > 1e6) return std::max(0.0, StepDown(std::exp(GeomHalfLogBound(p, a, b, x))));
  // Square-and-multiply, exact whenever every product is.
  auto e = static_cast<std::uint64_t>(k - 1.0);
  double base = p, acc = 1.0;
  bool exact = true;
  auto mul = [&exact](double u, double v) {
    const double w = u * v;
    if (std::fma(u, v, -w) != 0) exact = false;
    return w;
  };
  while (e > 0) {
    if (e & 1) acc = mul(acc, base);
    e >>= 1;
    if (e > 0) base = mul(base, base);
  }
  if (!exact) acc = acc < 1e-290 ? 0.0 : StepDown(acc, 64);
  return 0.5 * std::max(acc, 0.0);
}

VerificationReport VerifyDominance(const DistSpec& x, const DistSpec& y,
                                   const DominanceOptions& o) {
  if (o.samples < 2) throw Error(ErrorCode::kInvalidArgument, "need at least 2 samples");
  if (!(o.alpha > 0 && o.alpha < 1)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must lie in (0, 1)");
  }
  const auto n = static_cast<std::size_t>(o.samples);
  std::vector<double> sx(n), sy(n);
  const int threads = ResolveThreads(o.threads);
  ParallelFor(n, threads, [&](std::size_t i) {
    Stream a(o.seed, i, 0);
    sx[i] = Sample(x, a);
    Stream b(o.seed, i, 1);
    sy[i] = Sample(y, b);
  });
  std::sort(sx.begin(), sx.end());
  std::sort(sy.begin(), sy.end());
  // sup_t P(Y >= t) - P(X >= t); only sample points of Y can be maximisers.
  double worst = -1.0, at = 0.0;
  std::size_t jx = 0;
  for (std::size_t jy = 0; jy < n; ++jy) {
    if (jy > 0 && sy[jy] == sy[jy - 1]) continue;
    const double t = sy[jy];
    while (jx < n && sx[jx] < t) ++jx;
    const double ty = static_cast<double>(n - jy) / static_cast<double>(n);
    const double tx = static_cast<double>(n - jx) / static_cast<double>(n);
    if (ty - tx > worst) {
      worst = ty - tx;
      at = t;
    }
  }
  const double band = std::sqrt(std::log(2.0 / o.alpha) / (2.0 * static_cast<double>(n)));
  VerificationReport rep;
  rep.check = "dominance_empirical";
  rep.region = x.ToString() + " >= " + y.ToString();
  rep.metrics = {{"samples", static_cast<double>(n)},
                 {"alpha", o.alpha},
                 {"dkw_band", band},
                 {"max_violation", worst},
                 {"argmax", at}};
  rep.slack = 2.0 * band - worst;
  rep.notes.push_back(
      "statistical check: each empirical tail lies within the DKW band with "
      "probability at least 1 - alpha");
  if (worst > 2.0 * band) {
    rep.status = Status::kFalsified;
    rep.witness = Witness{"empirical tail of Y exceeds that of X beyond both DKW bands",
                          {{"t", at}, {"excess", worst}, {"threshold", 2.0 * band}}};
  } else {
    rep.status = Status::kVerified;
  }
  return rep;
}

}  // namespace coalesce
