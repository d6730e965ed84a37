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

#include "coalesce/coalesce.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <map>
#include <new>
#include <string>
#include <vector>

#include "coalesce/colored_interval.hpp"
#include "coalesce/dist.hpp"
#include "coalesce/error.hpp"
#include "coalesce/lbound.hpp"
#include "coalesce/montecarlo.hpp"
#include "coalesce/presets.hpp"
#include "coalesce/renorm.hpp"
#include "coalesce/report.hpp"
#include "coalesce/rng.hpp"
#include "coalesce/svg.hpp"
#include "coalesce/verify.hpp"

struct coal_interval {
  coalesce::ColoredInterval value;
};

struct coal_dist {
  coalesce::DistSpec value;
};

namespace {

using coalesce::Colour;
using coalesce::Error;
using coalesce::ErrorCode;
using coalesce::Json;

thread_local std::string g_last_error;
thread_local long g_parse_offset = -1;

coal_status Fail(coal_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Runs fn, translating exceptions into status codes.
template <class F>
coal_status Guard(F&& fn) {
  g_last_error.clear();
  g_parse_offset = -1;
  try {
    fn();
    return COAL_OK;
  } catch (const coalesce::ParseError& e) {
    g_parse_offset = static_cast<long>(e.offset());
    return Fail(COAL_E_PARSE, e.what());
  } catch (const Error& e) {
    return Fail(static_cast<coal_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(COAL_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(COAL_E_INTERNAL, e.what());
  } catch (...) {
    return Fail(COAL_E_INTERNAL, "unknown failure");
  }
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void Need(const void* p, const char* what) {
  if (!p) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

Colour ToColour(coal_colour c) {
  if (c != COAL_RED && c != COAL_BLUE) {
    throw Error(ErrorCode::kInvalidArgument, "unknown colour");
  }
  return c == COAL_RED ? Colour::kRed : Colour::kBlue;
}

coal_verdict ToVerdict(coalesce::Status s) {
  switch (s) {
    case coalesce::Status::kVerified: return COAL_VERIFIED;
    case coalesce::Status::kFalsified: return COAL_FALSIFIED;
    default: return COAL_INCONCLUSIVE;
  }
}

std::string Dump(const Json& j) { return j.dump(2) + "\n"; }

void Emit(char** out, const std::string& s) {
  if (out) *out = Dup(s);
}

// "R:2 B:1.5,R:3"
coalesce::ColoredInterval ParseInterval(const char* text) {
  std::vector<coalesce::Segment<double>> segs;
  const std::string s(text);
  std::size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && (s[i] == ' ' || s[i] == ',' || s[i] == '\t' ||
                            s[i] == '\n')) {
      ++i;
    }
  };
  for (skip(); i < s.size(); skip()) {
    Colour c;
    if (s[i] == 'R' || s[i] == 'r') {
      c = Colour::kRed;
    } else if (s[i] == 'B' || s[i] == 'b') {
      c = Colour::kBlue;
    } else {
      throw coalesce::ParseError(i, {"R", "B"}, "expected a colour letter");
    }
    ++i;
    if (i >= s.size() || s[i] != ':') {
      throw coalesce::ParseError(i, {":"}, "expected ':' after colour");
    }
    ++i;
    const char* begin = s.c_str() + i;
    char* end = nullptr;
    const double len = std::strtod(begin, &end);
    if (end == begin) {
      throw coalesce::ParseError(i, {"number"}, "expected a segment length");
    }
    i += static_cast<std::size_t>(end - begin);
    segs.push_back({c, len});
  }
  return coalesce::ColoredInterval(std::move(segs));
}

std::map<std::string, double> ParseParams(const char* json) {
  std::map<std::string, double> out;
  if (!json || !*json) return out;
  Json j;
  try {
    j = Json::parse(json);
  } catch (const nlohmann::json::parse_error& e) {
    throw coalesce::ParseError(e.byte > 0 ? e.byte - 1 : 0, {"JSON object"},
                               "preset parameters are not valid JSON");
  }
  if (!j.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "preset parameters must be a JSON object");
  }
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number()) {
      throw Error(ErrorCode::kInvalidArgument, "preset parameter '" + k + "' is not a number");
    }
    out[k] = v.get<double>();
  }
  return out;
}

}  // namespace

extern "C" {

const char* coal_version(void) { return COALESCE_VERSION; }

const char* coal_status_name(coal_status s) {
  if (s == COAL_OK) return "Ok";
  if (s == COAL_E_INTERNAL) return "InternalError";
  if (s >= COAL_E_INVALID_ARGUMENT && s <= COAL_E_IO) {
    return coalesce::ErrorCodeName(static_cast<ErrorCode>(static_cast<int>(s)));
  }
  return "Unknown";
}

const char* coal_last_error(void) { return g_last_error.c_str(); }

long coal_last_parse_offset(void) { return g_parse_offset; }

void coal_string_free(char* s) { std::free(s); }

coal_status coal_interval_create(coal_colour first, const double* lengths, size_t n,
                                 coal_interval** out) {
  return Guard([&] {
    Need(out, "out");
    if (n > 0) Need(lengths, "lengths");
    std::vector<double> v(lengths, lengths + n);
    *out = new coal_interval{coalesce::ColoredInterval::Alternating(ToColour(first), v)};
  });
}

coal_status coal_interval_parse(const char* text, coal_interval** out) {
  return Guard([&] {
    Need(text, "text");
    Need(out, "out");
    *out = new coal_interval{ParseInterval(text)};
  });
}

void coal_interval_free(coal_interval* c) { delete c; }

size_t coal_interval_size(const coal_interval* c) { return c ? c->value.size() : 0; }

coal_status coal_interval_segment(const coal_interval* c, size_t i, coal_colour* colour,
                                  double* length) {
  return Guard([&] {
    Need(c, "interval");
    if (i >= c->value.size()) {
      throw Error(ErrorCode::kInvalidArgument, "segment index out of range");
    }
    if (colour) *colour = c->value[i].colour == Colour::kRed ? COAL_RED : COAL_BLUE;
    if (length) *length = c->value[i].length;
  });
}

coal_status coal_interval_closure(const coal_interval* c, coal_interval** out,
                                  uint32_t* recolour_counts) {
  return Guard([&] {
    Need(c, "interval");
    Need(out, "out");
    auto r = coalesce::Closure(c->value, recolour_counts ? coalesce::TraceMode::kCounts
                                                         : coalesce::TraceMode::kNone);
    if (recolour_counts) {
      std::copy(r.trace.recolour_counts.begin(), r.trace.recolour_counts.end(),
                recolour_counts);
    }
    *out = new coal_interval{std::move(r.interval)};
  });
}

coal_status coal_interval_goodness_json(const coal_interval* c, double alpha,
                                        coal_colour target, char** json) {
  return Guard([&] {
    Need(c, "interval");
    Need(json, "json");
    const auto g = coalesce::Goodness(c->value, alpha, ToColour(target));
    Json j;
    j["good"] = g.good;
    j["alpha"] = alpha;
    j["target"] = coalesce::ColourName(ToColour(target));
    j["segment"] = g.good ? Json(g.segment) : Json(nullptr);
    j["left"] = g.good ? coalesce::Number(g.left) : Json(nullptr);
    j["right"] = g.good ? coalesce::Number(g.right) : Json(nullptr);
    j["total_length"] = coalesce::Number(g.total);
    j["closure_segments"] = g.closure_segments;
    *json = Dup(Dump(j));
  });
}

coal_status coal_interval_json(const coal_interval* c, char** json) {
  return Guard([&] {
    Need(c, "interval");
    Need(json, "json");
    *json = Dup(Dump(coalesce::IntervalJson(c->value)));
  });
}

coal_status coal_render_snapshots(const coal_interval* c, const double* thresholds,
                                  size_t n, const char* path) {
  return Guard([&] {
    Need(c, "interval");
    Need(path, "path");
    if (n > 0) Need(thresholds, "thresholds");
    coalesce::WriteSnapshots(c->value, std::vector<double>(thresholds, thresholds + n),
                             path);
  });
}

coal_status coal_dist_parse(const char* text, coal_dist** out) {
  return Guard([&] {
    Need(text, "text");
    Need(out, "out");
    *out = new coal_dist{coalesce::ParseDist(text)};
  });
}

void coal_dist_free(coal_dist* d) { delete d; }

coal_status coal_dist_string(const coal_dist* d, char** out) {
  return Guard([&] {
    Need(d, "dist");
    Need(out, "out");
    *out = Dup(d->value.ToString());
  });
}

coal_status coal_dist_tail(const coal_dist* d, double x, int ih_max_k, double* lower,
                           double* upper) {
  return Guard([&] {
    Need(d, "dist");
    coalesce::TailOptions opts;
    if (ih_max_k > 0) opts.irwin_hall_max_k = ih_max_k;
    const auto t = coalesce::Tail(d->value, x, opts);
    if (lower) *lower = t.lower;
    if (upper) *upper = t.upper;
  });
}

coal_status coal_dist_sample(const coal_dist* d, uint64_t seed, uint64_t trial,
                             uint32_t slot, double* out) {
  return Guard([&] {
    Need(d, "dist");
    Need(out, "out");
    coalesce::Stream s(seed, trial, slot);
    *out = coalesce::Sample(d->value, s);
  });
}

coal_status coal_preset_list_json(char** json) {
  return Guard([&] {
    Need(json, "json");
    Json arr = Json::array();
    for (const auto& p : coalesce::PresetCatalogue()) {
      Json e;
      e["name"] = p.name;
      e["description"] = p.description;
      Json ps = Json::array();
      for (const auto& q : p.params) {
        Json pj;
        pj["name"] = q.name;
        pj["default"] = coalesce::Number(q.default_value);
        pj["help"] = q.help;
        ps.push_back(pj);
      }
      e["parameters"] = ps;
      arr.push_back(e);
    }
    Json body;
    body["presets"] = arr;
    *json = Dup(Dump(coalesce::Document("preset_list", body)));
  });
}

coal_status coal_preset_get(const char* name, const char* params_json, coal_dist** red,
                            coal_dist** blue, char** info_json) {
  return Guard([&] {
    Need(name, "name");
    const auto p = coalesce::MakePreset(name, ParseParams(params_json));
    if (info_json) {
      Json j;
      j["name"] = p.name;
      Json ps = Json::object();
      for (const auto& [k, v] : p.params) ps[k] = coalesce::Number(v);
      j["parameters"] = ps;
      j["red"] = p.red.ToString();
      j["blue"] = p.blue.ToString();
      j["target"] = coalesce::ColourName(p.target);
      j["q_threshold"] = coalesce::Number(p.q_threshold);
      *info_json = Dup(Dump(j));
    }
    if (red) *red = new coal_dist{p.red};
    if (blue) *blue = new coal_dist{p.blue};
  });
}

coal_status coal_sample_window(const coal_dist* red, const coal_dist* blue, size_t n,
                               uint64_t seed, uint64_t trial, coal_interval** out) {
  return Guard([&] {
    Need(red, "red");
    Need(blue, "blue");
    Need(out, "out");
    *out = new coal_interval{
        coalesce::SampleWindow(red->value, blue->value, n, seed, trial)};
  });
}

coal_status coal_estimate_q(const coal_dist* red, const coal_dist* blue,
                            const coal_estimate_config* cfg, char** json,
                            char** trials_csv) {
  return Guard([&] {
    Need(red, "red");
    Need(blue, "blue");
    Need(cfg, "config");
    coalesce::EstimateConfig c;
    c.n = cfg->n;
    c.alpha = cfg->alpha;
    c.trials = cfg->trials;
    c.seed = cfg->seed;
    c.target = ToColour(cfg->target);
    c.threads = cfg->threads;
    if (cfg->has_q_star) c.q_star = cfg->q_star;
    c.keep_reports = trials_csv != nullptr;
    const auto q = coalesce::EstimateQ(red->value, blue->value, c);
    Json body;
    Json conf;
    conf["red"] = red->value.ToString();
    conf["blue"] = blue->value.ToString();
    conf["n"] = cfg->n;
    conf["alpha"] = cfg->alpha;
    conf["seed"] = cfg->seed;
    conf["target"] = coalesce::ColourName(c.target);
    body["config"] = conf;
    body["estimate"] = coalesce::ToJson(q);
    const std::string doc = Dump(coalesce::Document("q_estimate", body));
    const std::string csv = trials_csv ? coalesce::TrialsCsv(q.reports) : std::string();
    Emit(json, doc);
    if (trials_csv) *trials_csv = Dup(csv);
  });
}

coal_status coal_is_renormalisable(double alpha, double beta, int64_t k, int* out) {
  return Guard([&] {
    Need(out, "out");
    *out = coalesce::IsRenormalisable(alpha, beta, k) ? 1 : 0;
  });
}

coal_status coal_certify_renorm(const coal_dist* red, const coal_dist* blue,
                                const coal_renorm_config* cfg, char** json,
                                int* certified) {
  return Guard([&] {
    Need(red, "red");
    Need(blue, "blue");
    Need(cfg, "config");
    coalesce::RenormParams p{cfg->alpha, cfg->beta, cfg->k, cfg->n};
    std::optional<double> conf;
    if (cfg->has_confidence) conf = cfg->confidence_log10;
    const auto cert = coalesce::Certify(p, red->value, blue->value, cfg->q_input, conf,
                                        cfg->max_steps > 0 ? cfg->max_steps : 200);
    if (certified) *certified = cert.certified ? 1 : 0;
    Emit(json, Dump(coalesce::Document("renorm_certificate", coalesce::ToJson(cert))));
  });
}

coal_status coal_evolve_lbound(const coal_lbound_config* cfg, char** json, char** csv,
                               coal_verdict* verdict) {
  return Guard([&] {
    Need(cfg, "config");
    coalesce::LBoundState s;
    s.a = cfg->a;
    s.lambda = cfg->lambda;
    s.eps = cfg->eps;
    s.Lambda = cfg->Lambda;
    const auto r = coalesce::CertifyTrajectory(s, cfg->delta, cfg->max_steps, cfg->eps0,
                                               cfg->record_every);
    if (verdict) *verdict = ToVerdict(r.report.status);
    Emit(json, Dump(coalesce::Document("lbound_trajectory", coalesce::ToJson(r, false))));
    if (csv) *csv = Dup(coalesce::TrajectoryCsv(r.rows));
  });
}

coal_status coal_reddom_empirical(double a, double eps, double Lambda, int64_t samples,
                                  const double* grid, size_t grid_n, uint64_t seed,
                                  int threads, char** json) {
  return Guard([&] {
    Need(json, "json");
    if (grid_n > 0) Need(grid, "grid");
    const auto r = coalesce::RedDomEmpirical(a, eps, Lambda, samples,
                                             std::vector<double>(grid, grid + grid_n),
                                             seed, threads);
    Json body = coalesce::ToJson(r);
    Json conf;
    conf["a"] = a;
    conf["eps"] = eps;
    conf["Lambda"] = Lambda;
    conf["seed"] = seed;
    Json doc;
    doc["config"] = conf;
    doc["result"] = body;
    *json = Dup(Dump(coalesce::Document("reddom_empirical", doc)));
  });
}

void coal_e1_defaults(coal_e1_config* cfg) {
  if (!cfg) return;
  const coalesce::E1Options o;
  cfg->Lambda = o.Lambda;
  cfg->delta = o.delta;
  cfg->a_lo = o.a_lo;
  cfg->a_hi = o.a_hi;
  cfg->x_lo = o.x_lo;
  cfg->x_hi = o.x_hi;
  cfg->max_depth = o.max_depth;
  cfg->min_width = o.min_width;
  cfg->threads = o.threads;
  cfg->keep_leaves = 0;
}

coal_status coal_verify_e1(const coal_e1_config* cfg, char** json, coal_verdict* verdict) {
  return Guard([&] {
    Need(cfg, "config");
    coalesce::E1Options o;
    o.Lambda = cfg->Lambda;
    o.delta = cfg->delta;
    o.a_lo = cfg->a_lo;
    o.a_hi = cfg->a_hi;
    o.x_lo = cfg->x_lo;
    o.x_hi = cfg->x_hi;
    o.max_depth = cfg->max_depth;
    o.min_width = cfg->min_width;
    o.threads = cfg->threads;
    o.keep_leaves = cfg->keep_leaves != 0;
    const auto r = coalesce::VerifyE1(o);
    if (verdict) *verdict = ToVerdict(r.report.status);
    if (json) {
      Json body = coalesce::ToJson(r.report);
      if (o.keep_leaves) {
        Json leaves = Json::array();
        for (const auto& l : r.leaves) leaves.push_back(coalesce::ToJson(l));
        body["leaves"] = leaves;
      }
      *json = Dup(Dump(coalesce::Document("verification", body)));
    }
  });
}

coal_status coal_verify_e1_largex(double Lambda, double x0, char** json,
                                  coal_verdict* verdict) {
  return Guard([&] {
    const auto r = coalesce::VerifyE1LargeX(Lambda, x0);
    if (verdict) *verdict = ToVerdict(r.status);
    Emit(json, Dump(coalesce::Document("verification", coalesce::ToJson(r))));
  });
}

void coal_toy_defaults(coal_toy_config* cfg) {
  if (!cfg) return;
  const coalesce::ToyOptions o;
  cfg->gamma = o.gamma;
  cfg->side = COAL_RED;
  cfg->c = o.c;
  cfg->a = o.a;
  cfg->Lambda = o.Lambda;
  cfg->x0 = o.x0;
  cfg->irwin_hall_max_k = o.irwin_hall_max_k;
  cfg->keep_chain = 0;
}

coal_status coal_verify_toy(const coal_toy_config* cfg, char** json,
                            coal_verdict* verdict) {
  return Guard([&] {
    Need(cfg, "config");
    coalesce::ToyOptions o;
    o.gamma = cfg->gamma;
    o.side = ToColour(cfg->side) == Colour::kRed ? coalesce::ToySide::kRed
                                                 : coalesce::ToySide::kBlue;
    o.c = cfg->c;
    o.a = cfg->a;
    o.Lambda = cfg->Lambda;
    o.x0 = cfg->x0;
    if (cfg->irwin_hall_max_k > 0) o.irwin_hall_max_k = cfg->irwin_hall_max_k;
    o.keep_chain = cfg->keep_chain != 0;
    const auto r = coalesce::VerifyToy(o);
    if (verdict) *verdict = ToVerdict(r.report.status);
    if (json) {
      Json body = coalesce::ToJson(r.report);
      if (o.keep_chain) {
        Json chain = Json::array();
        for (double x : r.chain) chain.push_back(coalesce::Number(x));
        body["chain"] = chain;
      }
      *json = Dup(Dump(coalesce::Document("verification", body)));
    }
  });
}

coal_status coal_verify_dominance(const coal_dist* x, const coal_dist* y, int64_t samples,
                                  uint64_t seed, double alpha, int threads, char** json,
                                  coal_verdict* verdict) {
  return Guard([&] {
    Need(x, "x");
    Need(y, "y");
    coalesce::DominanceOptions o;
    o.samples = samples;
    o.seed = seed;
    o.alpha = alpha;
    o.threads = threads;
    const auto r = coalesce::VerifyDominance(x->value, y->value, o);
    if (verdict) *verdict = ToVerdict(r.status);
    Emit(json, Dump(coalesce::Document("verification", coalesce::ToJson(r))));
  });
}

}  // extern "C"
