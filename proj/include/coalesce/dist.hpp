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

// Length distributions: an immutable expression tree, a small DSL, sampling,
// moments and analytic tail enclosures.
//
//   const(v) uniform(a,b) exp(mean) sexp(mean) pareto(a) poisson(lambda)
//   geom(p) sum(k,d) sum(d,d,...) compound(count,d) shift(c,d) scale(c,d)
//   mix(w:d, w:d, ...)
//
// exp(m) has mean m; sexp(m) is 1 + exp(m); pareto(a) has P(X >= x) =
// (a+1)^2/(a+x)^2 on [1, inf); geom(p) lives on {1, 2, ...} with
// P(X >= k) = p^(k-1).

#ifndef COALESCE_DIST_HPP_
#define COALESCE_DIST_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coalesce/rng.hpp"

namespace coalesce {

enum class DistKind {
  kConst,
  kUniform,
  kExp,
  kShiftedExp,
  kPareto,
  kPoisson,
  kGeom,
  kSumK,
  kSum,
  kCompound,
  kShift,
  kScale,
  kMixture,
};

class DistSpec {
 public:
  static DistSpec Const(double v);
  static DistSpec Uniform(double a, double b);
  static DistSpec Exp(double mean);
  static DistSpec ShiftedExp(double mean);
  static DistSpec Pareto(double a);
  static DistSpec Poisson(double lambda);
  static DistSpec Geom(double p);
  static DistSpec SumK(std::int64_t k, DistSpec child);
  static DistSpec Sum(std::vector<DistSpec> children);
  static DistSpec Compound(DistSpec count, DistSpec child);
  static DistSpec Shift(double c, DistSpec child);
  static DistSpec Scale(double c, DistSpec child);
  static DistSpec Mixture(std::vector<std::pair<double, DistSpec>> parts);

  DistKind kind() const;
  // Numeric parameters in DSL order; mixture weights for kMixture; the count
  // k (as a double) for kSumK.
  const std::vector<double>& params() const;
  const std::vector<DistSpec>& children() const;
  std::int64_t count() const;

  // Canonical DSL text; ParseDist(ToString()) reproduces the tree.
  std::string ToString() const;
  bool IntegerValued() const;
  // Supremum of the support (+inf when unbounded).
  double SupportMax() const;
  double SupportMin() const;

  friend bool operator==(const DistSpec& a, const DistSpec& b);

 private:
  struct Node;
  explicit DistSpec(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

DistSpec ParseDist(std::string_view text);

double Sample(const DistSpec& spec, Stream& stream);

struct Moments {
  double mean;
  double variance;
};
// Throws InfiniteMoment when the mean or variance diverges.
Moments ComputeMoments(const DistSpec& spec);
double Mean(const DistSpec& spec);

enum class TailMethod { kExact, kIrwinHall, kBerryEsseen, kMonteCarloOnly };
const char* TailMethodName(TailMethod m);

// Enclosure of P(X >= x). The log fields stay finite where the linear ones
// underflow.
struct TailValue {
  double lower;
  double upper;
  double log_lower;
  double log_upper;
  TailMethod method;
};

struct TailOptions {
  // Largest k for which sums of uniforms use the exact Irwin-Hall CDF.
  int irwin_hall_max_k = 64;
  // Compound sums stop once the remaining count mass falls below this
  // fraction of the accumulated tail; the remainder goes to the upper bound.
  double truncation = 1e-15;
};

TailValue Tail(const DistSpec& spec, double x, const TailOptions& opts = {});

// Monte Carlo estimate with an exact binomial confidence interval at the
// given two-sided level.
TailValue EmpiricalTail(const DistSpec& spec, double x, std::int64_t samples,
                        std::uint64_t seed, double level = 1 - 1e-9);

}  // namespace coalesce

#endif  // COALESCE_DIST_HPP_
