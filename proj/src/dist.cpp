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

#include "coalesce/dist.hpp"

#include <boost/random/poisson_distribution.hpp>
#include <charconv>
#include <cmath>
#include <limits>

#include "coalesce/error.hpp"

namespace coalesce {

struct DistSpec::Node {
  DistKind kind;
  std::vector<double> params;
  std::vector<DistSpec> children;
  std::int64_t k = 0;
};

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void Invalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, what);
}

void RequireFinite(double v, const char* what) {
  if (!std::isfinite(v)) Invalid(std::string(what) + " must be finite");
}

bool IsInteger(double v) { return std::isfinite(v) && v == std::floor(v); }

std::string FormatNumber(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

DistSpec DistSpec::Const(double v) {
  RequireFinite(v, "const value");
  if (v < 0) Invalid("const value must be non-negative");
  return DistSpec(std::make_shared<Node>(Node{DistKind::kConst, {v}, {}}));
}

DistSpec DistSpec::Uniform(double a, double b) {
  RequireFinite(a, "uniform bound");
  RequireFinite(b, "uniform bound");
  if (!(a < b)) Invalid("uniform(a,b) needs a < b");
  if (a < 0) Invalid("uniform(a,b) needs a >= 0");
  return DistSpec(std::make_shared<Node>(Node{DistKind::kUniform, {a, b}, {}}));
}

DistSpec DistSpec::Exp(double mean) {
  RequireFinite(mean, "exp mean");
  if (!(mean > 0)) Invalid("exp mean must be positive");
  return DistSpec(std::make_shared<Node>(Node{DistKind::kExp, {mean}, {}}));
}

DistSpec DistSpec::ShiftedExp(double mean) {
  RequireFinite(mean, "sexp mean");
  if (!(mean > 0)) Invalid("sexp mean must be positive");
  return DistSpec(
      std::make_shared<Node>(Node{DistKind::kShiftedExp, {mean}, {}}));
}

DistSpec DistSpec::Pareto(double a) {
  RequireFinite(a, "pareto parameter");
  if (!(a >= 0)) Invalid("pareto parameter must be non-negative");
  return DistSpec(std::make_shared<Node>(Node{DistKind::kPareto, {a}, {}}));
}

DistSpec DistSpec::Poisson(double lambda) {
  RequireFinite(lambda, "poisson mean");
  if (!(lambda > 0)) Invalid("poisson mean must be positive");
  return DistSpec(std::make_shared<Node>(Node{DistKind::kPoisson, {lambda}, {}}));
}

DistSpec DistSpec::Geom(double p) {
  if (!(p >= 0 && p < 1)) Invalid("geom parameter must lie in [0, 1)");
  return DistSpec(std::make_shared<Node>(Node{DistKind::kGeom, {p}, {}}));
}

DistSpec DistSpec::SumK(std::int64_t k, DistSpec child) {
  if (k < 1) Invalid("sum count must be at least 1");
  Node n{DistKind::kSumK, {static_cast<double>(k)}, {std::move(child)}};
  n.k = k;
  return DistSpec(std::make_shared<Node>(std::move(n)));
}

DistSpec DistSpec::Sum(std::vector<DistSpec> children) {
  if (children.size() < 2) Invalid("sum of distributions needs two or more terms");
  return DistSpec(
      std::make_shared<Node>(Node{DistKind::kSum, {}, std::move(children)}));
}

DistSpec DistSpec::Compound(DistSpec count, DistSpec child) {
  if (!count.IntegerValued()) Invalid("compound count must be integer-valued");
  return DistSpec(std::make_shared<Node>(
      Node{DistKind::kCompound, {}, {std::move(count), std::move(child)}}));
}

DistSpec DistSpec::Shift(double c, DistSpec child) {
  RequireFinite(c, "shift");
  if (child.SupportMin() + c < 0) Invalid("shift would produce negative lengths");
  return DistSpec(
      std::make_shared<Node>(Node{DistKind::kShift, {c}, {std::move(child)}}));
}

DistSpec DistSpec::Scale(double c, DistSpec child) {
  RequireFinite(c, "scale");
  if (!(c > 0)) Invalid("scale must be positive");
  return DistSpec(
      std::make_shared<Node>(Node{DistKind::kScale, {c}, {std::move(child)}}));
}

DistSpec DistSpec::Mixture(std::vector<std::pair<double, DistSpec>> parts) {
  if (parts.empty()) Invalid("mixture needs at least one component");
  Node n{DistKind::kMixture, {}, {}};
  double total = 0;
  for (auto& [w, d] : parts) {
    if (!(w > 0) || !std::isfinite(w)) Invalid("mixture weights must be positive");
    total += w;
    n.params.push_back(w);
    n.children.push_back(std::move(d));
  }
  if (std::fabs(total - 1.0) > 1e-12) Invalid("mixture weights must sum to 1");
  return DistSpec(std::make_shared<Node>(std::move(n)));
}

DistKind DistSpec::kind() const { return node_->kind; }
const std::vector<double>& DistSpec::params() const { return node_->params; }
const std::vector<DistSpec>& DistSpec::children() const {
  return node_->children;
}
std::int64_t DistSpec::count() const { return node_->k; }

std::string DistSpec::ToString() const {
  const Node& n = *node_;
  auto num = [&](std::size_t i) { return FormatNumber(n.params[i]); };
  switch (n.kind) {
    case DistKind::kConst: return "const(" + num(0) + ")";
    case DistKind::kUniform: return "uniform(" + num(0) + "," + num(1) + ")";
    case DistKind::kExp: return "exp(" + num(0) + ")";
    case DistKind::kShiftedExp: return "sexp(" + num(0) + ")";
    case DistKind::kPareto: return "pareto(" + num(0) + ")";
    case DistKind::kPoisson: return "poisson(" + num(0) + ")";
    case DistKind::kGeom: return "geom(" + num(0) + ")";
    case DistKind::kSumK:
      return "sum(" + std::to_string(n.k) + "," + n.children[0].ToString() + ")";
    case DistKind::kCompound:
      return "compound(" + n.children[0].ToString() + "," +
             n.children[1].ToString() + ")";
    case DistKind::kShift:
      return "shift(" + num(0) + "," + n.children[0].ToString() + ")";
    case DistKind::kScale:
      return "scale(" + num(0) + "," + n.children[0].ToString() + ")";
    case DistKind::kSum:
    case DistKind::kMixture: {
      std::string s = n.kind == DistKind::kSum ? "sum(" : "mix(";
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) s += ",";
        if (n.kind == DistKind::kMixture) s += num(i) + ":";
        s += n.children[i].ToString();
      }
      return s + ")";
    }
  }
  return {};
}

bool DistSpec::IntegerValued() const {
  const Node& n = *node_;
  switch (n.kind) {
    case DistKind::kConst: return IsInteger(n.params[0]);
    case DistKind::kPoisson:
    case DistKind::kGeom: return true;
    case DistKind::kSumK: return n.children[0].IntegerValued();
    case DistKind::kCompound: return n.children[1].IntegerValued();
    case DistKind::kShift:
    case DistKind::kScale:
      return IsInteger(n.params[0]) && n.children[0].IntegerValued();
    case DistKind::kSum:
    case DistKind::kMixture:
      for (const auto& c : n.children) {
        if (!c.IntegerValued()) return false;
      }
      return true;
    default: return false;
  }
}

double DistSpec::SupportMax() const {
  const Node& n = *node_;
  switch (n.kind) {
    case DistKind::kConst: return n.params[0];
    case DistKind::kUniform: return n.params[1];
    case DistKind::kSumK:
      return static_cast<double>(n.k) * n.children[0].SupportMax();
    case DistKind::kShift: return n.params[0] + n.children[0].SupportMax();
    case DistKind::kScale: return n.params[0] * n.children[0].SupportMax();
    case DistKind::kSum: {
      double s = 0;
      for (const auto& c : n.children) s += c.SupportMax();
      return s;
    }
    case DistKind::kMixture: {
      double s = 0;
      for (const auto& c : n.children) s = std::max(s, c.SupportMax());
      return s;
    }
    case DistKind::kCompound: {
      const double cm = n.children[0].SupportMax();
      const double dm = n.children[1].SupportMax();
      return dm == 0 ? 0 : cm * dm;
    }
    default: return kInf;
  }
}

double DistSpec::SupportMin() const {
  const Node& n = *node_;
  switch (n.kind) {
    case DistKind::kConst: return n.params[0];
    case DistKind::kUniform: return n.params[0];
    case DistKind::kShiftedExp:
    case DistKind::kPareto:
    case DistKind::kGeom: return 1;
    case DistKind::kSumK:
      return static_cast<double>(n.k) * n.children[0].SupportMin();
    case DistKind::kShift: return n.params[0] + n.children[0].SupportMin();
    case DistKind::kScale: return n.params[0] * n.children[0].SupportMin();
    case DistKind::kSum: {
      double s = 0;
      for (const auto& c : n.children) s += c.SupportMin();
      return s;
    }
    case DistKind::kMixture: {
      double s = kInf;
      for (const auto& c : n.children) s = std::min(s, c.SupportMin());
      return s;
    }
    case DistKind::kCompound:
      return n.children[0].SupportMin() * n.children[1].SupportMin();
    default: return 0;
  }
}

bool operator==(const DistSpec& a, const DistSpec& b) {
  if (a.node_ == b.node_) return true;
  return a.kind() == b.kind() && a.params() == b.params() &&
         a.children() == b.children();
}

double Sample(const DistSpec& spec, Stream& s) {
  const auto& p = spec.params();
  const auto& ch = spec.children();
  switch (spec.kind()) {
    case DistKind::kConst: return p[0];
    case DistKind::kUniform: return p[0] + (p[1] - p[0]) * s.Uniform01();
    case DistKind::kExp: return -p[0] * std::log(s.Uniform01());
    case DistKind::kShiftedExp: return 1.0 - p[0] * std::log(s.Uniform01());
    case DistKind::kPareto: return (p[0] + 1.0) / std::sqrt(s.Uniform01()) - p[0];
    case DistKind::kPoisson: {
      boost::random::poisson_distribution<std::int64_t, double> pd(p[0]);
      return static_cast<double>(pd(s));
    }
    case DistKind::kGeom: {
      if (p[0] == 0) return 1.0;
      return 1.0 + std::floor(std::log(s.Uniform01()) / std::log(p[0]));
    }
    case DistKind::kSumK: {
      double t = 0;
      for (std::int64_t i = 0; i < spec.count(); ++i) t += Sample(ch[0], s);
      return t;
    }
    case DistKind::kSum: {
      double t = 0;
      for (const auto& c : ch) t += Sample(c, s);
      return t;
    }
    case DistKind::kCompound: {
      const double n = Sample(ch[0], s);
      if (n > 1e12) throw Error(ErrorCode::kDomain, "compound count too large to sample");
      double t = 0;
      for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        t += Sample(ch[1], s);
      }
      return t;
    }
    case DistKind::kShift: return p[0] + Sample(ch[0], s);
    case DistKind::kScale: return p[0] * Sample(ch[0], s);
    case DistKind::kMixture: {
      const double u = s.Uniform01();
      double acc = 0;
      for (std::size_t i = 0; i + 1 < ch.size(); ++i) {
        acc += p[i];
        if (u < acc) return Sample(ch[i], s);
      }
      return Sample(ch.back(), s);
    }
  }
  return 0;
}

Moments ComputeMoments(const DistSpec& spec) {
  const auto& p = spec.params();
  const auto& ch = spec.children();
  switch (spec.kind()) {
    case DistKind::kConst: return {p[0], 0};
    case DistKind::kUniform: {
      const double w = p[1] - p[0];
      return {0.5 * (p[0] + p[1]), w * w / 12.0};
    }
    case DistKind::kExp: return {p[0], p[0] * p[0]};
    case DistKind::kShiftedExp: return {1.0 + p[0], p[0] * p[0]};
    case DistKind::kPareto:
      throw Error(ErrorCode::kInfiniteMoment,
                  "pareto(" + FormatNumber(p[0]) + ") has infinite variance");
    case DistKind::kPoisson: return {p[0], p[0]};
    case DistKind::kGeom: {
      const double q = 1.0 - p[0];
      return {1.0 / q, p[0] / (q * q)};
    }
    case DistKind::kSumK: {
      const Moments m = ComputeMoments(ch[0]);
      const double k = static_cast<double>(spec.count());
      return {k * m.mean, k * m.variance};
    }
    case DistKind::kSum: {
      Moments t{0, 0};
      for (const auto& c : ch) {
        const Moments m = ComputeMoments(c);
        t.mean += m.mean;
        t.variance += m.variance;
      }
      return t;
    }
    case DistKind::kCompound: {
      const Moments n = ComputeMoments(ch[0]);
      const Moments x = ComputeMoments(ch[1]);
      return {n.mean * x.mean, n.mean * x.variance + n.variance * x.mean * x.mean};
    }
    case DistKind::kShift: {
      const Moments m = ComputeMoments(ch[0]);
      return {m.mean + p[0], m.variance};
    }
    case DistKind::kScale: {
      const Moments m = ComputeMoments(ch[0]);
      return {p[0] * m.mean, p[0] * p[0] * m.variance};
    }
    case DistKind::kMixture: {
      double mean = 0, second = 0;
      for (std::size_t i = 0; i < ch.size(); ++i) {
        const Moments m = ComputeMoments(ch[i]);
        mean += p[i] * m.mean;
        second += p[i] * (m.variance + m.mean * m.mean);
      }
      return {mean, std::max(0.0, second - mean * mean)};
    }
  }
  return {0, 0};
}

double Mean(const DistSpec& spec) {
  const auto& p = spec.params();
  const auto& ch = spec.children();
  switch (spec.kind()) {
    case DistKind::kPareto: return p[0] + 2.0;
    case DistKind::kSumK: return static_cast<double>(spec.count()) * Mean(ch[0]);
    case DistKind::kSum: {
      double t = 0;
      for (const auto& c : ch) t += Mean(c);
      return t;
    }
    case DistKind::kCompound: return Mean(ch[0]) * Mean(ch[1]);
    case DistKind::kShift: return p[0] + Mean(ch[0]);
    case DistKind::kScale: return p[0] * Mean(ch[0]);
    case DistKind::kMixture: {
      double t = 0;
      for (std::size_t i = 0; i < ch.size(); ++i) t += p[i] * Mean(ch[i]);
      return t;
    }
    default: return ComputeMoments(spec).mean;
  }
}

}  // namespace coalesce
