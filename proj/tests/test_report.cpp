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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "coalesce/colored_interval.hpp"
#include "coalesce/error.hpp"
#include "coalesce/montecarlo.hpp"
#include "coalesce/report.hpp"
#include "coalesce/svg.hpp"
#include "doctest.h"

using coalesce::Colour;
using coalesce::ColoredInterval;

namespace {

ColoredInterval Six() {
  return ColoredInterval::Alternating(Colour::kRed, {2, 1.5, 3, 10, 1, 4});
}

int Count(const std::string& s, const std::string& what) {
  int n = 0;
  for (auto p = s.find(what); p != std::string::npos; p = s.find(what, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("partial closure thresholds") {
  const auto c = Six();
  CHECK(coalesce::PartialClosure(c, 0) == c);
  CHECK(coalesce::PartialClosure(c, 1e9) == coalesce::Closure(c).interval);
  // Only segments shorter than 1.2 move: R:1 merges, B:1.5 stays.
  const auto mid = coalesce::PartialClosure(c, 1.2);
  CHECK(mid == ColoredInterval::Alternating(Colour::kRed, {2, 1.5, 3, 15}));
}

TEST_CASE("snapshot SVG is deterministic and well formed") {
  const auto c = Six();
  const auto a = coalesce::RenderSnapshots(c, {0, 1.2, 100});
  const auto b = coalesce::RenderSnapshots(c, {0, 1.2, 100});
  CHECK(a == b);
  CHECK(a.rfind("<?xml", 0) == 0);
  CHECK(a.find("version=\"1.1\"") != std::string::npos);
  CHECK(a.find("</svg>") != std::string::npos);
  // 6 + 4 + 2 coloured bars.
  CHECK(Count(a, "fill=\"#d62728\"") + Count(a, "fill=\"#1f77b4\"") == 12);
  CHECK_THROWS_AS(coalesce::RenderSnapshots(c, {2, 1}), coalesce::Error);

  const std::string path = "snapshot_test.svg";
  coalesce::WriteSnapshots(c, {0, 100}, path);
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == coalesce::RenderSnapshots(c, {0, 100}));
  std::remove(path.c_str());
  try {
    coalesce::WriteSnapshots(c, {0}, "/nonexistent-dir/x.svg");
    FAIL("write to a missing directory succeeded");
  } catch (const coalesce::Error& e) {
    CHECK(e.code() == coalesce::ErrorCode::kIo);
  }
}

TEST_CASE("json documents") {
  const auto doc = coalesce::Document("thing", coalesce::Json{{"x", 1}});
  CHECK(doc.begin().key() == "schema_version");
  CHECK(doc["schema_version"] == coalesce::kSchemaVersion);
  CHECK(doc["kind"] == "thing");
  CHECK(coalesce::Number(std::numeric_limits<double>::quiet_NaN()).is_null());
  CHECK(coalesce::Number(-std::numeric_limits<double>::infinity()).is_null());
  const auto j = coalesce::IntervalJson(ColoredInterval::Alternating(Colour::kBlue, {1, 2}));
  CHECK(j["segments"][0][0] == "B");
  CHECK(j["total_length"] == 3.0);
  CHECK(coalesce::Fnv1a64("") == "cbf29ce484222325");
  CHECK(coalesce::Fnv1a64("a") == "af63dc4c8601ec8c");
  CHECK(coalesce::FormatDouble(0.1) == "0.1");
}

TEST_CASE("trial csv") {
  std::vector<coalesce::TrialReport> r(2);
  r[0] = {0, true, 12.5, 3, false};
  r[1] = {1, false, 7, 5, true};
  const auto csv = coalesce::TrialsCsv(r);
  CHECK(csv == "trial_index,good,window_length,segments,degenerate\n0,1,12.5,3,0\n1,0,7,5,1\n");
}
