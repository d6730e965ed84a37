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

// Special functions with error control: Irwin-Hall exact CDF, Berry-Esseen
// enclosures, Poisson Chernoff bounds, binomial tails in log space, and a
// small outward-widened enclosure arithmetic.

#ifndef COALESCE_SPECIAL_HPP_
#define COALESCE_SPECIAL_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

namespace coalesce {

inline constexpr double kBerryEsseenUniform = 0.5751;
// Berry-Esseen constant for iid summands with finite third moment.
inline constexpr double kBerryEsseenIid = 0.4748;
inline constexpr int kEnclosureUlps = 4;

// Moves v outward by `ulps` units in the last place.
double StepDown(double v, int ulps = kEnclosureUlps);
double StepUp(double v, int ulps = kEnclosureUlps);

// Closed interval [lo, hi] containing a real quantity. Every operation
// widens its result outward, which stands in for directed rounding.
struct Enclosure {
  double lo;
  double hi;

  static Enclosure Point(double v) { return {v, v}; }
  static Enclosure Around(double v) { return {StepDown(v), StepUp(v)}; }
  double mid() const { return 0.5 * (lo + hi); }
  bool Contains(double v) const { return lo <= v && v <= hi; }
};

Enclosure operator+(Enclosure a, Enclosure b);
Enclosure operator-(Enclosure a, Enclosure b);
Enclosure operator*(Enclosure a, Enclosure b);
Enclosure operator/(Enclosure a, Enclosure b);
Enclosure Log(Enclosure a);
Enclosure Exp(Enclosure a);
Enclosure Sqrt(Enclosure a);
Enclosure Square(Enclosure a);

// log(exp(a) + exp(b)) without overflow; -inf is the additive identity.
double LogAddExp(double a, double b);
// log(exp(a) - exp(b)) for a >= b.
double LogSubExp(double a, double b);
// log(1 - exp(a)) for a <= 0.
double Log1mExp(double a);

double NormalSf(double z);
double NormalLogSf(double z);
// Enclosure of the standard normal CDF.
Enclosure NormalCdf(double z);

// U[0,1] tilted by e^{phi v}, phi >= 1e-3. beta bounds E|V-mean|^3 / sd^3.
struct TiltedUniformMoments {
  Enclosure log_mgf;
  Enclosure mean;
  Enclosure sd;
  double beta;
};
TiltedUniformMoments TiltedUniform(double phi);

// Enclosure of log P(V_1 + ... + V_k >= t), V_i ~ U[0,1], for t in [t_lo,
// t_hi] with k/2 < t < k: the Chernoff bound above, exponential tilting plus
// Berry-Esseen under the tilted law below (-inf when that gives nothing).
std::pair<double, double> TiltedUniformSumLogSf(std::int64_t k, double t_lo,
                                                double t_hi);

// P(U_1 + ... + U_k <= t) for U_i ~ U[0,1], evaluated exactly in integer
// arithmetic on the binary value of t, then rounded to double.
double IrwinHallCdf(int k, double t);
// P(U_1 + ... + U_k >= t), same method, no cancellation.
double IrwinHallSf(int k, double t);
// Natural logs of the above; finite even where the double would underflow.
double IrwinHallLogCdf(int k, double t);
double IrwinHallLogSf(int k, double t);

// Two-sided enclosure of P(S_k >= t) for S_k a sum of k iid U[a,b], from the
// Berry-Esseen bound (0.5751/sqrt(k)) tightened with Hoeffding's inequality,
// the support, and the tilted lower bound above the mean. Returned in log space: {log lower, log upper}.
std::pair<double, double> UniformSumLogSfBounds(std::int64_t k, double a,
                                                double b, double t);

struct PoissonTailBounds {
  // P(X <= lambda - x) <= lower_tail; P(X >= lambda + x) <= upper_tail.
  double lower_tail;
  double upper_tail;
};
PoissonTailBounds PoissonChernoff(double lambda, double x);

// log10 P(Bin(n, q) <= k).
double Log10BinomialCdf(std::int64_t n, std::int64_t k, double q);

// Exact Clopper-Pearson style bounds for a binomial proportion at two-sided
// confidence `level`.
std::pair<double, double> BinomialConfidence(std::int64_t n, std::int64_t k,
                                             double level);

}  // namespace coalesce

#endif  // COALESCE_SPECIAL_HPP_
