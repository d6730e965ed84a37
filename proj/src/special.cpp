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

#include "coalesce/special.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <vector>

#include "coalesce/colored_interval.hpp"
#include "coalesce/error.hpp"

namespace coalesce {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.69314718055994530942;

// t = a / 2^d exactly, with a >= 0.
struct Dyadic {
  mpz_class a;
  unsigned long d;
};

Dyadic ToDyadic(double t) {
  int e = 0;
  const double f = std::frexp(t, &e);
  auto m = static_cast<std::int64_t>(std::ldexp(f, 53));
  long exp2 = static_cast<long>(e) - 53;
  while (exp2 < 0 && m % 2 == 0) {
    m /= 2;
    ++exp2;
  }
  Dyadic out;
  out.a = mpz_class(static_cast<long>(m));
  if (exp2 >= 0) {
    out.a <<= static_cast<unsigned long>(exp2);
    out.d = 0;
  } else {
    out.d = static_cast<unsigned long>(-exp2);
  }
  return out;
}

double LogOf(const mpz_class& z) {
  if (z <= 0) return -kInf;
  long e = 0;
  const double m = mpz_get_d_2exp(&e, z.get_mpz_t());
  return std::log(m) + static_cast<double>(e) * kLn2;
}

// P(S_k <= s) as num/den with s = a/2^d, 0 <= s <= k/2 (so at most k/2 + 1
// terms).
void IrwinHallSmallSide(int k, const mpz_class& a, unsigned long d,
                        mpz_class* num, mpz_class* den) {
  const mpz_class step = mpz_class(1) << d;
  mpz_class fl = a >> d;
  const long last = std::min<long>(fl.get_si(), k);
  mpz_class binom = 1;
  mpz_class term;
  mpz_class base;
  *num = 0;
  for (long j = 0; j <= last; ++j) {
    base = a - step * j;
    mpz_pow_ui(term.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(k));
    term *= binom;
    if (j % 2 == 0) {
      *num += term;
    } else {
      *num -= term;
    }
    binom *= (k - j);
    mpz_divexact_ui(binom.get_mpz_t(), binom.get_mpz_t(),
                    static_cast<unsigned long>(j + 1));
  }
  mpz_class fact;
  mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(k));
  *den = fact << (d * static_cast<unsigned long>(k));
}

// P(S_k <= t) as an exact fraction.
void IrwinHallExact(int k, double t, mpz_class* num, mpz_class* den) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be positive");
  if (std::isnan(t)) throw Error(ErrorCode::kDomain, "t is NaN");
  if (t <= 0) {
    *num = 0;
    *den = 1;
    return;
  }
  if (t >= k) {
    *num = 1;
    *den = 1;
    return;
  }
  const Dyadic s = ToDyadic(t);
  const mpz_class kk = mpz_class(k) << s.d;
  if (2 * s.a <= kk) {
    IrwinHallSmallSide(k, s.a, s.d, num, den);
  } else {
    mpz_class n2;
    IrwinHallSmallSide(k, kk - s.a, s.d, &n2, den);
    *num = *den - n2;
  }
}

double RatioToDouble(const mpz_class& num, const mpz_class& den) {
  mpq_class q(num, den);
  q.canonicalize();
  return q.get_d();
}

}  // namespace

double StepDown(double v, int ulps) {
  if (std::isinf(v) || std::isnan(v)) return v;
  for (int i = 0; i < ulps; ++i) v = std::nextafter(v, -kInf);
  return v;
}

double StepUp(double v, int ulps) {
  if (std::isinf(v) || std::isnan(v)) return v;
  for (int i = 0; i < ulps; ++i) v = std::nextafter(v, kInf);
  return v;
}

Enclosure operator+(Enclosure a, Enclosure b) {
  return {StepDown(a.lo + b.lo), StepUp(a.hi + b.hi)};
}

Enclosure operator-(Enclosure a, Enclosure b) {
  return {StepDown(a.lo - b.hi), StepUp(a.hi - b.lo)};
}

Enclosure operator*(Enclosure a, Enclosure b) {
  const double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {StepDown(*std::min_element(p, p + 4)),
          StepUp(*std::max_element(p, p + 4))};
}

Enclosure operator/(Enclosure a, Enclosure b) {
  if (b.lo <= 0 && b.hi >= 0) {
    throw Error(ErrorCode::kDomain, "enclosure division by an interval containing 0");
  }
  const double p[4] = {a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi};
  return {StepDown(*std::min_element(p, p + 4)),
          StepUp(*std::max_element(p, p + 4))};
}

Enclosure Log(Enclosure a) {
  if (!(a.lo > 0)) throw Error(ErrorCode::kDomain, "log of a non-positive enclosure");
  return {StepDown(std::log(a.lo)), StepUp(std::log(a.hi))};
}

Enclosure Exp(Enclosure a) {
  return {std::max(0.0, StepDown(std::exp(a.lo))), StepUp(std::exp(a.hi))};
}

Enclosure Sqrt(Enclosure a) {
  if (a.hi < 0) throw Error(ErrorCode::kDomain, "sqrt of a negative enclosure");
  return {std::max(0.0, StepDown(std::sqrt(std::max(0.0, a.lo)))),
          StepUp(std::sqrt(a.hi))};
}

Enclosure Square(Enclosure a) {
  const double l = std::fabs(a.lo), h = std::fabs(a.hi);
  const double top = StepUp(std::max(l, h) * std::max(l, h));
  if (a.lo <= 0 && a.hi >= 0) return {0.0, top};
  return {StepDown(std::min(l, h) * std::min(l, h)), top};
}

double LogAddExp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

double LogSubExp(double a, double b) {
  if (b == -kInf) return a;
  if (b >= a) return -kInf;
  return a + Log1mExp(b - a);
}

double Log1mExp(double a) {
  if (a >= 0) return -kInf;
  return a > -kLn2 ? std::log(-std::expm1(a)) : std::log1p(-std::exp(a));
}

double NormalSf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double NormalLogSf(double z) {
  if (z < 30.0) return std::log(NormalSf(z));
  // Asymptotic series; relative error below 1e-12 for z >= 30.
  const double z2 = z * z;
  const double series = 1.0 - 1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2);
  return -0.5 * z2 - std::log(z) - 0.5 * std::log(2.0 * M_PI) +
         std::log(series);
}

double IrwinHallCdf(int k, double t) {
  mpz_class num, den;
  IrwinHallExact(k, t, &num, &den);
  return RatioToDouble(num, den);
}

double IrwinHallSf(int k, double t) {
  mpz_class num, den;
  IrwinHallExact(k, t, &num, &den);
  return RatioToDouble(den - num, den);
}

double IrwinHallLogCdf(int k, double t) {
  mpz_class num, den;
  IrwinHallExact(k, t, &num, &den);
  return LogOf(num) - LogOf(den);
}

double IrwinHallLogSf(int k, double t) {
  mpz_class num, den;
  IrwinHallExact(k, t, &num, &den);
  return LogOf(den - num) - LogOf(den);
}

Enclosure NormalCdf(double z) {
  const double v = 0.5 * std::erfc(-z / std::sqrt(2.0));
  const double slack = 1e-14 * v + 1e-300;
  return {std::max(0.0, StepDown(v - slack)), std::min(1.0, StepUp(v + slack))};
}

TiltedUniformMoments TiltedUniform(double phi) {
  if (!(phi >= 1e-3) || !(phi <= 700)) {
    throw Error(ErrorCode::kDomain, "tilt must lie in [1e-3, 700]");
  }
  const Enclosure f = Enclosure::Point(phi);
  const Enclosure one = Enclosure::Point(1.0);
  const Enclosure em1 = Exp(f) - one;
  TiltedUniformMoments m;
  m.log_mgf = Log(em1 / f);
  // mean = 1/(1 - e^-phi) - 1/phi
  m.mean = one / (one - Exp(Enclosure::Point(-phi))) - one / f;
  // var = 1/phi^2 - 1/(4 sinh^2(phi/2)) = 1/phi^2 - e^phi/(e^phi - 1)^2
  const Enclosure var = one / Square(f) - Exp(f) / Square(em1);
  m.sd = Sqrt({std::max(var.lo, 0.0), var.hi});
  if (!(m.sd.lo > 0)) {
    m.beta = kInf;
    return m;
  }
  // Upper Riemann sum for E|V - mean|^3 in y = 1 - v, where the density
  // phi e^(-phi y) / (1 - e^-phi) decreases; mass beyond y = span is bounded
  // crudely.
  const double span = std::min(1.0, 40.0 / phi);
  constexpr int kCells = 512;
  const double h = span / kCells;
  const double norm = StepUp(phi / -std::expm1(-phi), 4);
  auto cube_dev = [&](double y) {
    const double v = 1.0 - y;
    const double d = std::max(std::abs(v - m.mean.lo), std::abs(v - m.mean.hi));
    return d * d * d;
  };
  double third = 0.0;
  for (int i = 0; i < kCells; ++i) {
    const double y0 = i * h, y1 = (i + 1) * h;
    const double dens = norm * std::exp(-phi * y0);
    third += h * dens * std::max(cube_dev(y0), cube_dev(y1));
  }
  const double far = std::max(m.mean.hi, 1.0 - m.mean.lo);
  if (span < 1.0) {
    const double rest = (std::exp(-phi * span) - std::exp(-phi)) / -std::expm1(-phi);
    third += rest * far * far * far;
  }
  third = StepUp(third * (1.0 + 1e-9), 4);
  const double s3 = m.sd.lo * m.sd.lo * m.sd.lo;
  m.beta = StepUp(std::min(third / StepDown(s3, 4), far / m.sd.lo), 4);
  return m;
}

std::pair<double, double> TiltedUniformSumLogSf(std::int64_t k, double t_lo,
                                                double t_hi) {
  const double kd = static_cast<double>(k);
  const double tau = 0.5 * (t_lo + t_hi) / kd;
  if (!(tau > 0.5) || !(tau < 1.0)) return {-kInf, 0.0};
  // Solve mean(phi) = tau; any phi gives valid bounds, this only makes them
  // tight.
  auto mean_of = [](double p) { return 1.0 / -std::expm1(-p) - 1.0 / p; };
  double lo = 1e-3, hi = 1.0;
  while (mean_of(hi) < tau && hi < 600) hi *= 2;
  if (mean_of(lo) >= tau) return {-kInf, 0.0};
  for (int i = 0; i < 56 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mean_of(mid) < tau ? lo : hi) = mid;
  }
  const double phi = std::min(hi, 600.0);
  const TiltedUniformMoments m = TiltedUniform(phi);
  const Enclosure K = Enclosure::Point(kd);
  const Enclosure F = Enclosure::Point(phi);
  const Enclosure rk = Sqrt(K);
  const Enclosure spread = m.sd * rk;
  const Enclosure kmgf = K * m.log_mgf;
  // P(S >= t) <= M^k e^(-phi t).
  const double upper = std::min(0.0, (kmgf - F * Enclosure::Point(t_lo)).hi);
  // P(S >= t) >= M^k e^(-phi (t + h)) P~(t <= S <= t + h), h = delta sd
  // sqrt(k), and P~ is bounded by Berry-Esseen under the tilted law.
  const Enclosure z1 = (Enclosure::Point(t_hi) - K * m.mean) / spread;
  const double eps = StepUp(kBerryEsseenIid * m.beta / rk.lo);
  const double base = (kmgf - F * Enclosure::Point(t_hi)).lo;
  const double below = NormalCdf(z1.hi).hi + 2.0 * eps;
  double best = -kInf;
  static constexpr double kDeltas[] = {0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5, 0.7,
                                       1.0,  1.3, 1.7, 2.2, 3.0, 4.0};
  for (double delta : kDeltas) {
    const double p = StepDown(NormalCdf(StepDown(z1.lo + delta)).lo - below);
    if (!(p > 0)) continue;
    const double cost = (F * spread * Enclosure::Point(delta)).hi;
    best = std::max(best, StepDown(base - cost + StepDown(std::log(p))));
  }
  return {std::min(best, upper), upper};
}

std::pair<double, double> UniformSumLogSfBounds(std::int64_t k, double a,
                                                double b, double t) {
  if (k < 1 || !(a < b)) {
    throw Error(ErrorCode::kInvalidArgument, "need k >= 1 and a < b");
  }
  const double kd = static_cast<double>(k);
  if (t <= StepDown(kd * a)) return {0.0, 0.0};
  if (t >= StepUp(kd * b)) return {-kInf, -kInf};
  const double w = b - a;
  const double mean = kd * 0.5 * (a + b);
  const double sd = w * std::sqrt(kd / 12.0);
  const double z = (t - mean) / sd;
  const double be = kBerryEsseenUniform / std::sqrt(kd);
  const double phi = NormalSf(z);
  double log_lo = -kInf;
  double log_hi = 0.0;
  const double be_lo = StepDown(StepDown(phi) - be);
  if (be_lo > 0) log_lo = StepDown(std::log(be_lo));
  const double be_hi = StepUp(StepUp(phi) + be);
  if (be_hi < 1) log_hi = StepUp(std::log(be_hi));
  const double d = t - mean;
  const double hoeff = -2.0 * d * d / (kd * w * w);
  if (d > 0) {
    log_hi = std::min(log_hi, StepUp(hoeff * (1 - 1e-12)));
  } else if (d < 0) {
    log_lo = std::max(log_lo, StepDown(Log1mExp(hoeff * (1 - 1e-12))));
  }
  if (d > 0) {
    // Work in V = (U - a)/w; a larger threshold only lowers the bound.
    const double tv_hi = StepUp(StepUp(t - StepDown(kd * a)) / StepDown(w));
    const double tv_lo = StepDown(StepDown(t - StepUp(kd * a)) / StepUp(w));
    const auto [tl, th] = TiltedUniformSumLogSf(k, tv_lo, tv_hi);
    log_lo = std::max(log_lo, tl);
    log_hi = std::min(log_hi, th);
  }
  if (log_lo > log_hi) log_lo = log_hi;
  return {log_lo, log_hi};
}

PoissonTailBounds PoissonChernoff(double lambda, double x) {
  if (!(lambda > 0)) throw Error(ErrorCode::kDomain, "lambda must be positive");
  if (!(x >= 0)) throw Error(ErrorCode::kDomain, "x must be non-negative");
  return {std::exp(-x * x / (2.0 * lambda)),
          std::exp(-x * x / (2.0 * lambda + 2.0 * x / 3.0))};
}

double Log10BinomialCdf(std::int64_t n, std::int64_t k, double q) {
  if (n < 0) throw Error(ErrorCode::kInvalidArgument, "n must be non-negative");
  if (!(q >= 0 && q <= 1)) throw Error(ErrorCode::kDomain, "q must lie in [0, 1]");
  if (k < 0) return -kInf;
  if (k >= n || q == 0) return 0.0;
  if (q == 1) return -kInf;
  const double lr = std::log(q) - std::log1p(-q);
  std::vector<double> lt(static_cast<std::size_t>(k) + 1);
  internal::Accumulator<double> acc;
  acc.Add(static_cast<double>(n) * std::log1p(-q));
  lt[0] = acc.Value();
  for (std::int64_t j = 0; j < k; ++j) {
    acc.Add(std::log(static_cast<double>(n - j) / static_cast<double>(j + 1)));
    acc.Add(lr);
    lt[static_cast<std::size_t>(j) + 1] = acc.Value();
  }
  const double m = *std::max_element(lt.begin(), lt.end());
  internal::Accumulator<double> s;
  for (double v : lt) s.Add(std::exp(v - m));
  return (m + std::log(s.Value())) / std::log(10.0);
}

std::pair<double, double> BinomialConfidence(std::int64_t n, std::int64_t k,
                                             double level) {
  if (n <= 0 || k < 0 || k > n || !(level > 0 && level < 1)) {
    throw Error(ErrorCode::kInvalidArgument, "bad binomial confidence request");
  }
  const double tail = 0.5 * (1.0 - level);
  const double nd = static_cast<double>(n), kd = static_cast<double>(k);
  const double lo = k == 0 ? 0.0 : boost::math::ibeta_inv(kd, nd - kd + 1, tail);
  const double hi = k == n ? 1.0 : boost::math::ibeta_inv(kd + 1, nd - kd, 1 - tail);
  return {lo, hi};
}

}  // namespace coalesce
