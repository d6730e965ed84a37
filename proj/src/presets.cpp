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

#include "coalesce/presets.hpp"

#include <cmath>
#include <limits>

#include "coalesce/error.hpp"

namespace coalesce {

namespace {

constexpr double kRequired = std::numeric_limits<double>::quiet_NaN();
constexpr double kNone = std::numeric_limits<double>::quiet_NaN();

std::map<std::string, double> Resolve(const PresetInfo& info,
                                      const std::map<std::string, double>& given) {
  std::map<std::string, double> out;
  for (const auto& [k, v] : given) {
    bool known = false;
    for (const auto& p : info.params) known = known || p.name == k;
    if (!known) {
      throw Error(ErrorCode::kInvalidArgument,
                  "preset " + info.name + " has no parameter '" + k + "'");
    }
  }
  for (const auto& p : info.params) {
    auto it = given.find(p.name);
    if (it != given.end()) {
      out[p.name] = it->second;
    } else if (!std::isnan(p.default_value)) {
      out[p.name] = p.default_value;
    }
  }
  return out;
}

double Need(const std::map<std::string, double>& m, const std::string& preset,
            const std::string& key) {
  auto it = m.find(key);
  if (it == m.end()) {
    throw Error(ErrorCode::kMissingParam,
                "preset " + preset + " requires parameter '" + key + "'");
  }
  return it->second;
}

DistSpec CounterBlue(double c1, double c2) {
  return DistSpec::Mixture({{c1, DistSpec::Uniform(0, c1 * c2)},
                            {1 - c1, DistSpec::Uniform(1 + c1 * c2, 1 + c2)}});
}

// sum_{i=lo}^{hi} k^i Po(rate(i)), plus an optional leading term.
DistSpec PoissonLadder(double k, long lo, long hi, double numerator, double n,
                       std::vector<DistSpec> terms) {
  for (long i = lo; i <= hi; ++i) {
    const double scale = std::pow(k, static_cast<double>(i));
    const double rate = numerator / (scale * n);
    if (!std::isfinite(scale) || !(rate > 0)) {
      throw Error(ErrorCode::kDomain,
                  "k^i overflows double precision at i = " + std::to_string(i) +
                      "; reduce n, K or k");
    }
    terms.push_back(DistSpec::Scale(scale, DistSpec::Poisson(rate)));
  }
  if (terms.size() == 1) return terms.front();
  return DistSpec::Sum(std::move(terms));
}

}  // namespace

const std::vector<PresetInfo>& PresetCatalogue() {
  static const std::vector<PresetInfo> cat = {
      {"mean_theorem",
       "red 1 + sum_i k^i Po(eps k^-i) with eps = 1/n^2, N = 2K/eps; blue "
       "U[1, 1+eps]. Red mean exceeds blue mean by a factor near 1 + 2K",
       {{"n", kRequired, "scale parameter (eps = 1/n^2)"},
        {"K", 1.0, "mean ratio parameter"},
        {"k", 10.0, "block ratio"}}},
      {"counter",
       "red U[1, 1+c2]; blue U[0, c1 c2] (weight c1) mixed with "
       "U[1+c1 c2, 1+c2]. Red dominates blue yet blue wins",
       {{"c1", 0.08, "weight of the short blue component"},
        {"c2", 0.01, "width parameter"}}},
      {"counter_blownup",
       "red sum_{i=0}^{2Kn} k^i X_i with X_0 ~ U[1, 1+c2] and X_i ~ "
       "Po(1/(k^i n)); blue as in counter",
       {{"n", kRequired, "blow-up index"},
        {"K", 1.0, "mean ratio parameter"},
        {"k", 10.0, "block ratio"},
        {"c1", 0.08, "weight of the short blue component"},
        {"c2", 0.01, "width parameter"}}},
      {"trans_RG", "red Const(1) against blue Exp(1.22); red expected to win", {}},
      {"trans_GB", "red Exp(1.22) against blue U[0, 2.19]; red expected to win", {}},
      {"trans_BR", "red Const(1) against blue U[0, 2.19]; blue expected to win", {}},
      {"toy",
       "interval distributions after two rounds of recolouring Const(1) red "
       "against U[0, 1+gamma] blue, with red unit intervals recoloured with "
       "probability p (or p = 1 - c/gamma when c is given)",
       {{"gamma", kRequired, "blue width excess"},
        {"p", 1.0, "recolouring probability of unit red intervals"},
        {"c", kNone, "sets p = 1 - c/gamma"}}},
      {"main_theorem",
       "red Pareto(a) against blue 1 + Exp(lambda); blue expected to win for "
       "lambda above the critical constant",
       {{"a", 0.5, "Pareto parameter in [0, 1)"},
        {"lambda", 14.0, "blue exponential mean"}}},
  };
  return cat;
}

Preset MakePreset(const std::string& name,
                  const std::map<std::string, double>& given) {
  const PresetInfo* info = nullptr;
  for (const auto& p : PresetCatalogue()) {
    if (p.name == name) info = &p;
  }
  if (!info) throw Error(ErrorCode::kUnknownPreset, "unknown preset '" + name + "'");
  const auto params = Resolve(*info, given);
  auto get = [&](const std::string& key) { return Need(params, name, key); };
  Preset out{name, params, DistSpec::Const(1), DistSpec::Const(1), Colour::kBlue, kNone};

  if (name == "mean_theorem") {
    const double n = get("n"), K = get("K"), k = get("k");
    if (!(n >= 1) || !(K > 0) || !(k > 1)) {
      throw Error(ErrorCode::kInvalidArgument, "need n >= 1, K > 0, k > 1");
    }
    const double eps = 1.0 / (n * n);
    const long N = std::lround(std::ceil(2.0 * K / eps));
    // eps k^-i = 1/(k^i n^2).
    out.red = DistSpec::Shift(1.0, PoissonLadder(k, 1, N, 1.0, n * n, {}));
    out.blue = DistSpec::Uniform(1.0, 1.0 + eps);
    out.target = Colour::kBlue;
  } else if (name == "counter") {
    const double c1 = get("c1"), c2 = get("c2");
    out.red = DistSpec::Uniform(1.0, 1.0 + c2);
    out.blue = CounterBlue(c1, c2);
    out.target = Colour::kBlue;
    out.q_threshold = 0.058;
  } else if (name == "counter_blownup") {
    const double n = get("n"), K = get("K"), k = get("k");
    const double c1 = get("c1"), c2 = get("c2");
    if (!(n >= 1) || !(K > 0) || !(k > 1)) {
      throw Error(ErrorCode::kInvalidArgument, "need n >= 1, K > 0, k > 1");
    }
    const long N = std::lround(std::ceil(2.0 * K * n));
    out.red = PoissonLadder(k, 1, N, 1.0, n, {DistSpec::Uniform(1.0, 1.0 + c2)});
    out.blue = CounterBlue(c1, c2);
    out.target = Colour::kBlue;
  } else if (name == "trans_RG") {
    out.red = DistSpec::Const(1.0);
    out.blue = DistSpec::Exp(1.22);
    out.target = Colour::kRed;
    out.q_threshold = 0.0625;
  } else if (name == "trans_GB") {
    out.red = DistSpec::Exp(1.22);
    out.blue = DistSpec::Uniform(0.0, 2.19);
    out.target = Colour::kRed;
    out.q_threshold = 0.063;
  } else if (name == "trans_BR") {
    out.red = DistSpec::Const(1.0);
    out.blue = DistSpec::Uniform(0.0, 2.19);
    out.target = Colour::kBlue;
    out.q_threshold = 0.0599;
  } else if (name == "toy") {
    const double g = get("gamma");
    double p = get("p");
    if (params.count("c")) {
      if (given.count("p")) {
        throw Error(ErrorCode::kInvalidArgument, "give p or c, not both");
      }
      p = 1.0 - params.at("c") / g;
    }
    if (!(g > 0) || !(p >= 0 && p <= 1)) {
      throw Error(ErrorCode::kInvalidArgument, "need gamma > 0 and p in [0, 1]");
    }
    const double qg = (1.0 - p) * g;
    const DistSpec long_red = DistSpec::Shift(
        1.0, DistSpec::Compound(DistSpec::Geom(1.0 / (1.0 + g)),
                                DistSpec::Uniform(1.0, 2.0)));
    out.red = qg > 0 ? DistSpec::Mixture({{qg / (qg + 1.0), DistSpec::Const(1.0)},
                                          {1.0 / (qg + 1.0), long_red}})
                     : long_red;
    out.blue = DistSpec::Shift(
        -1.0, DistSpec::Compound(DistSpec::Geom(p * g / (1.0 + g)),
                                 DistSpec::Uniform(2.0, 2.0 + g)));
    out.target = g > 1.0 ? Colour::kBlue : Colour::kRed;
    out.params["p"] = p;
  } else {
    const double a = get("a"), lambda = get("lambda");
    out.red = DistSpec::Pareto(a);
    out.blue = DistSpec::ShiftedExp(lambda);
    out.target = Colour::kBlue;
  }
  return out;
}

}  // namespace coalesce
