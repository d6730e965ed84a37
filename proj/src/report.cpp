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

#include "coalesce/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace coalesce {

std::string Fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json Number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::string FormatDouble(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

Json MetricsJson(const Metrics& m) {
  Json j = Json::object();
  for (const auto& [k, v] : m) j[k] = Number(v);
  return j;
}

}  // namespace

Json ToJson(const QEstimate& q) {
  Json j;
  j["trials"] = q.trials;
  j["bad"] = q.bad;
  j["degenerate"] = q.degenerate;
  j["q_hat"] = Number(q.q_hat);
  j["q_star"] = q.q_star ? Number(*q.q_star) : Json(nullptr);
  if (q.log10_prob) {
    j["log10_prob"] = Number(*q.log10_prob);
    j["log10_prob_saturated"] = std::isinf(*q.log10_prob);
  } else {
    j["log10_prob"] = nullptr;
    j["log10_prob_saturated"] = false;
  }
  return j;
}

Json ToJson(const Certificate& c) {
  Json j;
  j["tool_version"] = COALESCE_VERSION;
  Json p;
  p["alpha"] = c.params.alpha;
  p["beta"] = c.params.beta;
  p["k"] = c.params.k;
  p["n"] = c.params.n;
  j["params"] = p;
  j["red"] = c.red;
  j["blue"] = c.blue;
  Json h;
  h["red"] = Fnv1a64(c.red);
  h["blue"] = Fnv1a64(c.blue);
  j["input_hashes"] = h;
  j["c"] = Number(c.c);
  j["Q"] = c.Q ? Number(*c.Q) : Json(nullptr);
  j["q_input"] = Number(c.q_input);
  j["eta_model"] = c.eta_model;
  Json rec;
  Json qs = Json::array();
  for (double v : c.recursion.q) qs.push_back(Number(v));
  rec["q"] = qs;
  rec["converged"] = c.recursion.converged;
  rec["partial_sum"] = Number(c.recursion.partial_sum);
  rec["tail_bound"] =
      c.recursion.tail_bound ? Number(*c.recursion.tail_bound) : Json(nullptr);
  j["recursion"] = rec;
  j["certified"] = c.certified;
  j["confidence_log10"] = c.confidence_log10 ? Number(*c.confidence_log10) : Json(nullptr);
  j["reason"] = c.reason;
  return j;
}

Json ToJson(const VerificationReport& r) {
  Json j;
  j["check"] = r.check;
  j["status"] = StatusName(r.status);
  j["region"] = r.region;
  j["rectangles_processed"] = r.rectangles_processed;
  j["chain_length"] = r.chain_length;
  if (r.witness) {
    Json w;
    w["description"] = r.witness->description;
    w["values"] = MetricsJson(r.witness->values);
    j["witness"] = w;
  } else {
    j["witness"] = nullptr;
  }
  j["slack"] = Number(r.slack);
  j["metrics"] = MetricsJson(r.metrics);
  j["notes"] = r.notes;
  Json subs = Json::array();
  for (const auto& s : r.sub_checks) subs.push_back(ToJson(s));
  j["sub_checks"] = subs;
  return j;
}

Json ToJson(const RedDomResult& r) {
  Json j;
  j["samples"] = r.samples;
  Json pts = Json::array();
  for (const auto& p : r.points) {
    Json q;
    q["x"] = p.x;
    q["empirical"] = Number(p.empirical);
    q["analytic"] = Number(p.analytic);
    q["excess"] = Number(p.excess);
    q["std_error"] = Number(p.std_error);
    q["sigmas"] = Number(p.sigmas);
    pts.push_back(q);
  }
  j["points"] = pts;
  j["max_excess"] = Number(r.max_excess);
  j["max_sigmas"] = Number(r.max_sigmas);
  return j;
}

Json ToJson(const TrajectoryResult& r, bool rows) {
  Json j;
  j["report"] = ToJson(r.report);
  if (rows) {
    Json a = Json::array();
    for (const auto& row : r.rows) {
      a.push_back(Json::array({row.t, Number(row.a), Number(row.lambda),
                               Number(row.zeta), Number(row.xi)}));
    }
    j["rows"] = a;
  }
  return j;
}

Json ToJson(const Rectangle& r) {
  return Json::array({r.a1, r.a2, r.x1, r.x2, r.depth});
}

Json IntervalJson(const ColoredInterval& c) {
  Json segs = Json::array();
  for (const auto& s : c.segments()) {
    segs.push_back(Json::array({std::string(ColourLetter(s.colour)), s.length}));
  }
  Json j;
  j["segments"] = segs;
  j["total_length"] = c.total_length();
  return j;
}

Json Document(const std::string& kind, Json body) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = kind;
  for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
  return j;
}

std::string TrialsCsv(const std::vector<TrialReport>& reports) {
  std::string out = "trial_index,good,window_length,segments,degenerate\n";
  for (const auto& r : reports) {
    out += std::to_string(r.trial_index) + "," + (r.good ? "1" : "0") + "," +
           FormatDouble(r.window_length) + "," + std::to_string(r.segments) + "," +
           (r.degenerate ? "1" : "0") + "\n";
  }
  return out;
}

std::string TrajectoryCsv(const std::vector<TrajectoryRow>& rows) {
  std::string out = "t,a,lambda,zeta,xi\n";
  for (const auto& r : rows) {
    out += std::to_string(r.t) + "," + FormatDouble(r.a) + "," +
           FormatDouble(r.lambda) + "," + FormatDouble(r.zeta) + "," +
           FormatDouble(r.xi) + "\n";
  }
  return out;
}

}  // namespace coalesce
