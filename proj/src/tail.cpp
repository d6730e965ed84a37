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

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>

#include "coalesce/dist.hpp"
#include "coalesce/error.hpp"
#include "coalesce/special.hpp"

namespace coalesce {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct LogEnc {
  double lo;
  double hi;
  TailMethod method;
};

TailMethod Worse(TailMethod a, TailMethod b) {
  return static_cast<int>(a) > static_cast<int>(b) ? a : b;
}

LogEnc Sure(bool reached) {
  return reached ? LogEnc{0.0, 0.0, TailMethod::kExact}
                 : LogEnc{-kInf, -kInf, TailMethod::kExact};
}

double LogDown(double v) {
  if (!std::isfinite(v)) return v;
  return v - (std::fabs(v) * 1e-14 + 1e-15);
}

double LogUp(double v) {
  if (!std::isfinite(v)) return v;
  return std::min(0.0, v + (std::fabs(v) * 1e-14 + 1e-15));
}

LogEnc Widened(double lo, double hi, TailMethod m) {
  return {LogDown(lo), LogUp(hi), m};
}

LogEnc Point(double log_value, TailMethod m) {
  return Widened(log_value, log_value, m);
}

bool ExactSub(double x, double c, double* r) {
  *r = x - c;
  const double bv = *r - x;
  return (x - (*r - bv)) + (-c - bv) == 0.0;
}

bool ExactMul(double a, double b, double* r) {
  *r = a * b;
  return std::fma(a, b, -*r) == 0.0;
}

bool ExactDiv(double x, double c, double* r) {
  *r = x / c;
  return std::fma(*r, c, -x) == 0.0;
}

LogEnc TailRec(const DistSpec& d, double x, const TailOptions& o);

// Evaluates f at y when y is exact; otherwise brackets the rounding with
// the monotone tail.
template <class F>
LogEnc Monotone(bool exact, double y, F f) {
  if (exact) return f(y);
  const LogEnc a = f(StepUp(y));
  const LogEnc b = f(StepDown(y));
  return {a.lo, b.hi, Worse(a.method, b.method)};
}

LogEnc GammaTail(double k, double y) {
  // P(Gamma(k, 1) >= y).
  if (y <= 0) return Sure(true);
  const double q = boost::math::gamma_q(k, y);
  if (q > 0 && std::isfinite(std::log(q))) {
    const double lq = std::log(q);
    return {LogDown(lq) - 1e-13, LogUp(lq + 1e-13), TailMethod::kExact};
  }
  const double chernoff = y > k ? k * std::log(y / k) + k - y : 0.0;
  return {-kInf, LogUp(chernoff), TailMethod::kExact};
}

LogEnc UniformSum(std::int64_t k, double a, double b, double x,
                  const TailOptions& o) {
  if (k <= o.irwin_hall_max_k) {
    double ka = 0, diff = 0, t = 0;
    const bool exact = ExactMul(static_cast<double>(k), a, &ka) &&
                       ExactSub(x, ka, &diff) && ExactDiv(diff, b - a, &t) &&
                       (b - a) == std::ldexp(1.0, std::ilogb(b - a));
    const int kk = static_cast<int>(k);
    return Monotone(exact, t, [kk](double tt) {
      const double v = IrwinHallLogSf(kk, tt);
      return Point(v, TailMethod::kIrwinHall);
    });
  }
  const auto [lo, hi] = UniformSumLogSfBounds(k, a, b, x);
  return {lo, hi, TailMethod::kBerryEsseen};
}

LogEnc SumKTail(std::int64_t k, const DistSpec& child, double x,
                const TailOptions& o) {
  const auto& p = child.params();
  const double kd = static_cast<double>(k);
  switch (child.kind()) {
    case DistKind::kConst: {
      double v = 0;
      ExactMul(kd, p[0], &v);
      return Sure(x <= v);
    }
    case DistKind::kUniform:
      return UniformSum(k, p[0], p[1], x, o);
    case DistKind::kExp: {
      double y = 0;
      const bool exact = ExactDiv(x, p[0], &y);
      return Monotone(exact, y, [kd](double yy) { return GammaTail(kd, yy); });
    }
    case DistKind::kShiftedExp: {
      double y = 0;
      const bool exact = ExactSub(x, kd, &y);
      return Monotone(exact, y, [&](double yy) {
        return SumKTail(k, DistSpec::Exp(p[0]), yy, o);
      });
    }
    case DistKind::kShift: {
      double kc = 0, y = 0;
      const bool exact = ExactMul(kd, p[0], &kc) && ExactSub(x, kc, &y);
      const DistSpec& inner = child.children()[0];
      return Monotone(exact, y,
                      [&](double yy) { return SumKTail(k, inner, yy, o); });
    }
    case DistKind::kScale: {
      double y = 0;
      const bool exact = ExactDiv(x, p[0], &y);
      const DistSpec& inner = child.children()[0];
      return Monotone(exact, y,
                      [&](double yy) { return SumKTail(k, inner, yy, o); });
    }
    case DistKind::kSumK:
      return SumKTail(k * child.count(), child.children()[0], x, o);
    default:
      if (k == 1) return TailRec(child, x, o);
      throw Error(ErrorCode::kUnsupported,
                  "no analytic tail for sum(" + std::to_string(k) + "," +
                      child.ToString() + ")");
  }
}

LogEnc CompoundTail(const DistSpec& count, const DistSpec& child, double x,
                    const TailOptions& o) {
  const auto& cp = count.params();
  switch (count.kind()) {
    case DistKind::kConst: {
      const auto n = static_cast<std::int64_t>(cp[0]);
      return n == 0 ? Sure(x <= 0) : SumKTail(n, child, x, o);
    }
    case DistKind::kGeom:
    case DistKind::kPoisson:
      break;
    default:
      throw Error(ErrorCode::kUnsupported,
                  "no analytic tail for compound count " + count.ToString());
  }
  const bool geom = count.kind() == DistKind::kGeom;
  const double par = cp[0];
  if (geom && par == 0) return TailRec(child, x, o);
  const std::int64_t n_min = geom ? 1 : 0;
  std::int64_t n = n_min;
  const double top = child.SupportMax();
  if (std::isfinite(top) && top > 0 && x > 0) {
    n = std::max<std::int64_t>(n_min, static_cast<std::int64_t>(x / top) - 1);
  }
  const double log_p = geom ? std::log(par) : 0.0;
  const double log_q = geom ? std::log1p(-par) : 0.0;
  const double log_lambda = geom ? 0.0 : std::log(par);
  auto log_weight = [&](std::int64_t m) {
    if (geom) return static_cast<double>(m - 1) * log_p + log_q;
    return -par + static_cast<double>(m) * log_lambda -
           std::lgamma(static_cast<double>(m) + 1.0);
  };
  // log P(N > m).
  auto log_rest = [&](std::int64_t m) {
    if (geom) return static_cast<double>(m) * log_p;
    const double r = boost::math::gamma_p(static_cast<double>(m) + 1.0, par);
    return r > 0 ? std::log(r) : -kInf;
  };
  const double log_trunc = std::log(o.truncation);
  double acc_lo = -kInf, acc_hi = -kInf;
  TailMethod method = TailMethod::kExact;
  auto term = [&](std::int64_t m) {
    const LogEnc t = m == 0 ? Sure(x <= 0) : SumKTail(m, child, x, o);
    const double lw = log_weight(m);
    method = Worse(method, t.method);
    if (t.lo > -kInf) acc_lo = LogAddExp(acc_lo, LogDown(lw) + t.lo);
    if (t.hi > -kInf) acc_hi = LogAddExp(acc_hi, LogUp(lw) + t.hi);
    return t;
  };
  // With a non-negative child, P(S_m >= x) increases in m, so everything
  // below a term is bounded by that term's tail times P(N < m) <= 1. Start
  // near x / E[child] and walk both ways.
  std::int64_t start = n;
  if (child.SupportMin() >= 0 && x > 0) {
    double mean = 0;
    try {
      mean = Mean(child);
    } catch (const Error&) {
      mean = 0;
    }
    if (mean > 0 && std::isfinite(mean) && x / mean < 1e15) {
      start = std::max(n, static_cast<std::int64_t>(std::ceil(x / mean)));
    }
  }
  std::int64_t iter = 0;
  auto budget = [&] {
    if (++iter > 50'000'000) {
      throw Error(ErrorCode::kUnsupported, "compound tail did not converge");
    }
  };
  double rest = 0;
  for (n = start;; ++n) {
    budget();
    term(n);
    rest = log_rest(n);
    if (rest == -kInf) break;
    if (acc_hi > -kInf && rest < log_trunc + acc_hi) break;
  }
  for (std::int64_t m = start - 1; m >= n_min && m >= 0; --m) {
    budget();
    const LogEnc t = term(m);
    if (t.hi == -kInf) break;
    if (m > n_min && t.hi < log_trunc + acc_hi) {
      acc_hi = LogAddExp(acc_hi, LogUp(t.hi));
      break;
    }
  }
  const double hi = rest == -kInf ? acc_hi : LogAddExp(acc_hi, LogUp(rest));
  return Widened(acc_lo, hi, method);
}

LogEnc TailRec(const DistSpec& d, double x, const TailOptions& o) {
  const auto& p = d.params();
  switch (d.kind()) {
    case DistKind::kConst:
      return Sure(x <= p[0]);
    case DistKind::kUniform:
      if (x <= p[0]) return Sure(true);
      if (x >= p[1]) return Sure(false);
      return Point(std::log((p[1] - x) / (p[1] - p[0])), TailMethod::kExact);
    case DistKind::kExp:
      if (x <= 0) return Sure(true);
      return Point(-x / p[0], TailMethod::kExact);
    case DistKind::kShiftedExp:
      if (x <= 1) return Sure(true);
      return Point(-(x - 1.0) / p[0], TailMethod::kExact);
    case DistKind::kPareto:
      if (x <= 1) return Sure(true);
      return Point(2.0 * (std::log(p[0] + 1.0) - std::log(p[0] + x)),
                   TailMethod::kExact);
    case DistKind::kPoisson: {
      const double m = std::ceil(x);
      if (m <= 0) return Sure(true);
      const double v = boost::math::gamma_p(m, p[0]);
      if (v > 0) {
        const double lv = std::log(v);
        return {LogDown(lv) - 1e-13, LogUp(lv + 1e-13), TailMethod::kExact};
      }
      const double chernoff = m > p[0] ? m * std::log(p[0] / m) + m - p[0] : 0.0;
      return {-kInf, LogUp(chernoff), TailMethod::kExact};
    }
    case DistKind::kGeom: {
      if (x <= 1) return Sure(true);
      if (p[0] == 0) return Sure(false);
      return Point((std::ceil(x) - 1.0) * std::log(p[0]), TailMethod::kExact);
    }
    case DistKind::kSumK:
      return SumKTail(d.count(), d.children()[0], x, o);
    case DistKind::kSum:
      throw Error(ErrorCode::kUnsupported,
                  "no analytic tail for a heterogeneous sum; use Monte Carlo");
    case DistKind::kCompound:
      return CompoundTail(d.children()[0], d.children()[1], x, o);
    case DistKind::kShift: {
      double y = 0;
      const bool exact = ExactSub(x, p[0], &y);
      const DistSpec& inner = d.children()[0];
      return Monotone(exact, y, [&](double yy) { return TailRec(inner, yy, o); });
    }
    case DistKind::kScale: {
      double y = 0;
      const bool exact = ExactDiv(x, p[0], &y);
      const DistSpec& inner = d.children()[0];
      return Monotone(exact, y, [&](double yy) { return TailRec(inner, yy, o); });
    }
    case DistKind::kMixture: {
      double lo = -kInf, hi = -kInf;
      TailMethod m = TailMethod::kExact;
      for (std::size_t i = 0; i < p.size(); ++i) {
        const LogEnc t = TailRec(d.children()[i], x, o);
        const double lw = std::log(p[i]);
        if (t.lo > -kInf) lo = LogAddExp(lo, LogDown(lw) + t.lo);
        if (t.hi > -kInf) hi = LogAddExp(hi, LogUp(lw) + t.hi);
        m = Worse(m, t.method);
      }
      return Widened(lo, hi, m);
    }
  }
  return Sure(false);
}

}  // namespace

const char* TailMethodName(TailMethod m) {
  switch (m) {
    case TailMethod::kExact: return "Exact";
    case TailMethod::kIrwinHall: return "IrwinHall";
    case TailMethod::kBerryEsseen: return "BerryEsseen";
    case TailMethod::kMonteCarloOnly: return "MonteCarloOnly";
  }
  return "Unknown";
}

TailValue Tail(const DistSpec& spec, double x, const TailOptions& opts) {
  if (std::isnan(x)) throw Error(ErrorCode::kDomain, "tail evaluated at NaN");
  const LogEnc e = TailRec(spec, x, opts);
  TailValue v;
  v.log_lower = std::min(0.0, e.lo);
  v.log_upper = std::min(0.0, std::max(e.hi, v.log_lower));
  // exp is exact at 0 and -inf.
  auto down = [](double l) { return std::isinf(l) || l == 0 ? std::exp(l) : StepDown(std::exp(l)); };
  auto up = [](double l) { return std::isinf(l) || l == 0 ? std::exp(l) : StepUp(std::exp(l)); };
  v.lower = std::clamp(down(v.log_lower), 0.0, 1.0);
  v.upper = std::clamp(up(v.log_upper), 0.0, 1.0);
  v.method = e.method;
  return v;
}

TailValue EmpiricalTail(const DistSpec& spec, double x, std::int64_t samples,
                        std::uint64_t seed, double level) {
  if (samples <= 0) throw Error(ErrorCode::kInvalidArgument, "samples must be positive");
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < samples; ++i) {
    Stream s(seed, static_cast<std::uint64_t>(i), 0);
    if (Sample(spec, s) >= x) ++hits;
  }
  const auto [lo, hi] = BinomialConfidence(samples, hits, level);
  return {lo, hi, lo > 0 ? std::log(lo) : -kInf, hi > 0 ? std::log(hi) : -kInf,
          TailMethod::kMonteCarloOnly};
}

}  // namespace coalesce
