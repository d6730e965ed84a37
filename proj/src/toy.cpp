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

// Case analysis for the toy model: red segments of length 1, blue segments
// uniform on [0, 1 + gamma], after the first two rounds of recolouring.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "coalesce/error.hpp"
#include "coalesce/presets.hpp"
#include "coalesce/verify.hpp"

namespace coalesce {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Enclosure P(double v) { return Enclosure::Point(v); }

std::string Num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

VerificationReport Leaf(const std::string& check, const std::string& region,
                        bool ok, double slack, Metrics metrics) {
  VerificationReport r;
  r.check = check;
  r.region = region;
  r.status = ok ? Status::kVerified : Status::kInconclusive;
  r.rectangles_processed = 1;
  r.slack = slack;
  r.metrics = std::move(metrics);
  if (!ok) r.witness = Witness{"sufficient inequality fails", r.metrics};
  return r;
}

// X = shift + W_1 + ... + W_N with N ~ Geom(r) on {1, 2, ...} and W_i ~
// U[wa, wb]. P(X >= x + 1) = P(W_1 + ... + W_N >= x + off), off = 1 - shift.
struct CompoundUniform {
  double shift;
  double r;
  double wa;
  double wb;
};

struct BaseSearch {
  bool found = false;
  double base = kInf;
  std::string method;
  Metrics metrics;
};

// 1/2 P(N >= t/m) >= 1/2 r^(t/m), m = (wa+wb)/2, so with
// G(x) = log(1/2) + (x + off) log(r)/m + x/Lambda, G(x) >= 0 on [xb, inf)
// iff G is non-decreasing and G(xb) >= 0.
bool HalfBoundHolds(const CompoundUniform& cu, double Lambda, double xb,
                    Enclosure* value) {
  const double off = 1.0 - cu.shift;
  const Enclosure m = (P(cu.wa) + P(cu.wb)) / P(2.0);
  const Enclosure lr = Log(P(cu.r));
  const Enclosure slope = lr / m + P(1.0) / P(Lambda);
  *value = Log(P(0.5)) + (P(xb) + P(off)) * lr / m + P(xb) / P(Lambda);
  return slope.lo >= 0 && value->lo >= 0;
}

// Log M_W(theta) for W ~ U[wa, wb].
Enclosure LogMgf(const CompoundUniform& cu, double theta) {
  return P(theta) * P(cu.wa) + TiltedUniform(theta * (cu.wb - cu.wa)).log_mgf;
}

// Tilting W by theta and keeping only N = k with k = ceil(t/mu):
//   P(S_N >= t) >= (1-r) r^(k-1) M^k e^(-theta (t + mu + z sd sqrt(k)))
//                  (Phi(z) - 1/2 - 2 C beta / sqrt(k)).
// With L = log r + log M and t = x + off this is at least
//   C0 + g x - B sqrt(t/mu + 1),  B = theta z sd,
// whose derivative increases in x; so G >= 0 and G' >= 0 at xb suffice.
bool TiltedBoundHolds(const CompoundUniform& cu, double Lambda, double xb,
                      double theta, double z, Enclosure* value) {
  const double off = 1.0 - cu.shift;
  const double w = cu.wb - cu.wa;
  const TiltedUniformMoments tm = TiltedUniform(theta * w);
  const Enclosure W = P(w);
  const Enclosure mu = P(cu.wa) + W * tm.mean;
  const Enclosure sd = W * tm.sd;
  const Enclosure th = P(theta);
  const Enclosure L = Log(P(cu.r)) + P(theta) * P(cu.wa) + tm.log_mgf;
  const Enclosure t = P(xb) + P(off);
  const Enclosure kmin = t / mu;
  const double be = StepUp(2.0 * kBerryEsseenIid * tm.beta / Sqrt(kmin).lo);
  const double prob = StepDown(NormalCdf(z).lo - 0.5 - be);
  if (!(prob > 0) || kmin.lo < 1) return false;
  const Enclosure Lneg = {std::min(L.lo, 0.0), std::min(L.hi, 0.0)};
  const Enclosure root = Sqrt(t / mu + P(1.0));
  const Enclosure B = th * P(z) * sd;
  *value = Log(P(1.0) - P(cu.r)) - Log(P(cu.r)) + Lneg + t * L / mu -
           th * (t + mu) - B * root + Log(P(prob)) + P(xb) / P(Lambda);
  const Enclosure deriv =
      L / mu - th + P(1.0) / P(Lambda) - B / (P(2.0) * mu * root);
  return value->lo >= 0 && deriv.lo >= 0;
}

BaseSearch FindBase(const CompoundUniform& cu, double Lambda, double x0) {
  BaseSearch out;
  const double off = 1.0 - cu.shift;
  const double m = 0.5 * (cu.wa + cu.wb);
  const double lr = std::log(cu.r);
  const double slope = lr / m + 1.0 / Lambda;
  out.metrics.push_back({"half_bound_rate", -lr / m});
  out.metrics.push_back({"target_rate", 1.0 / Lambda});
  Enclosure v{};
  if (slope > 0) {
    double xb = std::max(x0, -(std::log(0.5) + off * lr / m) / slope);
    for (int i = 0; i < 200 && !HalfBoundHolds(cu, Lambda, xb, &v); ++i) {
      xb = StepUp(xb * (1 + 1e-12), 64);
    }
    if (HalfBoundHolds(cu, Lambda, xb, &v)) {
      out.found = true;
      out.base = xb;
      out.method = "geometric half bound";
    }
  }
  // Tilted bound: theta solves log r + log M(theta) = 0.
  const double w = cu.wb - cu.wa;
  const double tmin = 1e-3 / w;
  auto excess = [&](double th) { return std::log(cu.r) + LogMgf(cu, th).mid(); };
  if (1.0 / Lambda > tmin && excess(1.0 / Lambda) > 0) {
    double lo = tmin, hi = 1.0 / Lambda;
    if (excess(lo) < 0) {
      for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) < 0 ? lo : hi) = mid;
      }
      const double theta = hi;
      out.metrics.push_back({"tilt_theta", theta});
      const double limit = std::isfinite(out.base) ? out.base : 1e12;
      for (double xb = x0; xb < limit; xb *= 1.02) {
        bool ok = false;
        for (double z = 0.25; z <= 3.0 && !ok; z += 0.25) {
          ok = TiltedBoundHolds(cu, Lambda, xb, theta, z, &v);
          if (ok) out.metrics.push_back({"tilt_z", z});
        }
        if (ok) {
          out.found = true;
          out.base = xb;
          out.method = "exponentially tilted Berry-Esseen bound";
          break;
        }
      }
    }
  }
  out.metrics.push_back({"base_point", out.found ? out.base : kNaN});
  return out;
}

VerificationReport LargeX(const std::string& check, const CompoundUniform& cu,
                          double Lambda, double x0, BaseSearch* found) {
  *found = FindBase(cu, Lambda, x0);
  VerificationReport r;
  r.check = check;
  r.rectangles_processed = 1;
  r.metrics = found->metrics;
  if (found->found) {
    r.status = Status::kVerified;
    r.region = "[" + Num(found->base) + ", inf)";
    r.notes.push_back("P(X >= x+1) >= exp(-x/Lambda) via the " + found->method);
    if (found->base > x0) {
      r.notes.push_back("the bound only holds from " + Num(found->base) +
                        " on; the chain starts there and passes x0 = " + Num(x0));
    }
  } else {
    r.status = Status::kInconclusive;
    r.region = "[" + Num(x0) + ", inf)";
    r.witness = Witness{"no closed-form lower bound reaches exp(-x/Lambda)", r.metrics};
  }
  r.slack = kNaN;
  return r;
}

// Checks log_lhs(k) <= log_rhs(k) for k = 1..K, where K is large enough that
// the difference is provably increasing beyond it.
template <class Lhs, class Rhs>
VerificationReport Bands(const std::string& check, const std::string& region,
                         std::int64_t K, Lhs lhs, Rhs rhs) {
  VerificationReport r;
  r.check = check;
  r.region = region;
  r.slack = kInf;
  r.status = Status::kVerified;
  for (std::int64_t k = 1; k <= K; ++k) {
    const Enclosure l = lhs(static_cast<double>(k));
    const Enclosure h = rhs(static_cast<double>(k));
    ++r.rectangles_processed;
    if (!(l.hi <= h.lo)) {
      r.status = Status::kInconclusive;
      r.witness = Witness{"band inequality fails",
                          {{"k", static_cast<double>(k)},
                           {"log_tail_upper", l.hi},
                           {"log_pareto_lower", h.lo}}};
      break;
    }
    r.slack = std::min(r.slack, h.lo - l.hi);
  }
  r.metrics = {{"bands_checked", static_cast<double>(r.rectangles_processed)}};
  return r;
}

void Attach(VerificationReport* parent, VerificationReport child) {
  parent->rectangles_processed += child.rectangles_processed;
  parent->chain_length += child.chain_length;
  parent->sub_checks.push_back(std::move(child));
}

}  // namespace

ToyResult VerifyToy(const ToyOptions& o) {
  const double g = o.gamma;
  if (!(g > 0)) throw Error(ErrorCode::kInvalidArgument, "gamma must be positive");
  if (!(o.a >= 0 && o.a < 1)) throw Error(ErrorCode::kInvalidArgument, "a must lie in [0, 1)");
  if (!(o.Lambda > 0)) throw Error(ErrorCode::kInvalidArgument, "Lambda must be positive");
  const bool red = o.side == ToySide::kRed;
  if (!red && !(o.c > 1.25)) {
    throw Error(ErrorCode::kPreconditionFailed, "blue side needs c > 5/4");
  }
  if (!red && !(g > o.c)) {
    throw Error(ErrorCode::kPreconditionFailed, "blue side needs gamma > c");
  }
  const double x0 = o.x0 > 0 ? o.x0 : (red ? 2000.0 : 1e6);
  const Preset preset =
      red ? MakePreset("toy", {{"gamma", g}, {"p", 1.0}})
          : MakePreset("toy", {{"gamma", g}, {"c", o.c}});
  const Enclosure G = P(g), A = P(o.a), one = P(1.0);
  const Enclosure a1 = A + one;

  ToyResult out;
  VerificationReport& rep = out.report;
  rep.check = red ? "toy_red_wins" : "toy_blue_wins";
  rep.region = "gamma = " + Num(g);
  rep.metrics = {{"gamma", g}, {"a", o.a}, {"Lambda", o.Lambda}, {"x0", x0}};
  if (!red) rep.metrics.push_back({"c", o.c});

  TailOptions topts;
  topts.irwin_hall_max_k = o.irwin_hall_max_k;
  CompoundUniform cu{};
  DistSpec chain_dist = preset.red;
  double floor = 1.0;

  if (red) {
    // Pareto(a) dominates the blue law B(gamma).
    const Enclosure dens_b = one / (G * (one + G));
    const Enclosure dens_g = P(2.0) / a1;
    Attach(&rep, Leaf("blue_density", "[1, 1+gamma]", dens_b.lo >= dens_g.hi,
                      dens_b.lo - dens_g.hi,
                      {{"blue_density", dens_b.lo}, {"pareto_density_max", dens_g.hi}}));
    // P(X >= 2k-1+k gamma) <= (gamma/(1+gamma))^k against the Pareto tail at
    // 2k+1+(k+1)gamma. The difference of logs has derivative at least
    // -2(2+g)/((k+1)(2+g)-1) - log r, positive once k >= K.
    const Enclosure lr = Log(G / (one + G));
    std::int64_t K = 64;
    while (K < 100'000'000 &&
           !((P(2.0) * (P(2.0) + G) / (P(K + 1.0) * (P(2.0) + G) - one)).hi < -lr.hi)) {
      K *= 2;
    }
    Attach(&rep, Bands("blue_bands", "[1+gamma, inf)", K,
                       [&](double k) { return P(k) * lr; },
                       [&](double k) {
                         return P(2.0) * Log(a1) -
                                P(2.0) * Log(A + P(2 * k + 1) + P(k + 1) * G);
                       }));
    cu = {1.0, 1.0 / (1.0 + g), 1.0, 2.0};
    chain_dist = preset.red;
    floor = 1.0;
  } else {
    const Enclosure C = P(o.c);
    const Enclosure atom = one / (C + one);
    const Enclosure par2 = Square(a1 / (A + P(2.0)));
    Attach(&rep, Leaf("red_atom", "[1, 2]", atom.hi <= par2.lo, par2.lo - atom.hi,
                      {{"red_tail_above_1", atom.hi}, {"pareto_tail_at_2", par2.lo}}));
    const Enclosure dens_r = G / ((C + one) * (one + G));
    const Enclosure dens_g = P(2.0) * Square(a1) / (Square(A + P(2.0)) * (A + P(2.0)));
    Attach(&rep, Leaf("red_density", "[2, 3]", dens_r.lo >= dens_g.hi,
                      dens_r.lo - dens_g.hi,
                      {{"red_density", dens_r.lo}, {"pareto_density_max", dens_g.hi}}));
    // P(X >= 2k+1) <= (1/(c+1)) (1+gamma)^-k against the Pareto tail at
    // 2k+3; the log difference has derivative >= log(1+g) - 4/(2k+3).
    const Enclosure l1g = Log(one + G);
    std::int64_t K = 64;
    while (K < 100'000'000 && !((P(4.0) / P(2.0 * K + 3.0)).hi < l1g.lo)) K *= 2;
    Attach(&rep, Bands("red_bands", "[3, inf)", K,
                       [&](double k) { return P(0.0) - Log(C + one) - P(k) * l1g; },
                       [&](double k) {
                         return P(2.0) * Log(a1) - P(2.0) * Log(A + P(2 * k + 3));
                       }));
    const double p = 1.0 - o.c / g;
    cu = {-1.0, p * g / (1.0 + g), 2.0, 2.0 + g};
    chain_dist = preset.blue;
    floor = 2.0;
  }

  BaseSearch base;
  Attach(&rep, LargeX(red ? "red_large_x" : "blue_large_x", cu, o.Lambda, x0, &base));
  if (base.found) {
    const TailFn tail = [&](double x) { return Tail(chain_dist, x, topts); };
    ChainResult chain =
        DominanceChain(tail, o.Lambda, std::max(base.base, x0), floor, o.max_iters);
    chain.report.check = red ? "red_chain" : "blue_chain";
    if (o.keep_chain) out.chain = chain.points;
    Attach(&rep, std::move(chain.report));
  }
  if (red) {
    const double smin = chain_dist.SupportMin();
    Attach(&rep, Leaf("red_support", "[0, 1]", smin >= floor + 1.0, smin - floor - 1.0,
                      {{"support_min", smin}}));
  } else {
    // On [1, 3] only the N = 1 component 1 + U[0, gamma] has mass.
    const Enclosure dens_b = (one - P(cu.r)) / G;
    const Enclosure dens_f = Exp(P(-2.0) / P(o.Lambda)) / P(o.Lambda);
    Attach(&rep, Leaf("blue_density", "[0, 2]", g >= 2.0 && dens_b.hi <= dens_f.lo,
                      dens_f.lo - dens_b.hi,
                      {{"blue_density", dens_b.hi}, {"exp_density_min", dens_f.lo}}));
  }

  rep.notes.push_back(red ? "R(gamma) decreases stochastically in gamma, so the red "
                            "chain also covers every smaller gamma"
                          : "B(gamma) increases stochastically in gamma for fixed c, "
                            "so the blue chain also covers every larger gamma");
  rep.status = Status::kVerified;
  rep.slack = kNaN;
  for (const auto& s : rep.sub_checks) {
    if (s.status != Status::kVerified) {
      rep.status = Status::kInconclusive;
      if (!rep.witness) {
        rep.witness = Witness{"sub-check " + s.check + " is " + StatusName(s.status),
                              s.witness ? s.witness->values : Metrics{}};
      }
    }
  }
  return out;
}

}  // namespace coalesce
