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

// JSON and CSV serialisation of results. Output depends only on the inputs,
// never on the thread count.

#ifndef COALESCE_REPORT_HPP_
#define COALESCE_REPORT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "coalesce/colored_interval.hpp"
#include "coalesce/lbound.hpp"
#include "coalesce/montecarlo.hpp"
#include "coalesce/renorm.hpp"
#include "coalesce/verification.hpp"
#include "coalesce/verify.hpp"
#include "json.hpp"

namespace coalesce {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string Fnv1a64(const std::string& text);

// Finite doubles as numbers; NaN and infinities as null.
Json Number(double v);

Json ToJson(const QEstimate& q);
Json ToJson(const Certificate& c);
Json ToJson(const VerificationReport& r);
Json ToJson(const RedDomResult& r);
Json ToJson(const TrajectoryResult& r, bool rows);
Json ToJson(const Rectangle& r);
Json IntervalJson(const ColoredInterval& c);

// Adds "schema_version" and "kind" in front of the body.
Json Document(const std::string& kind, Json body);

std::string TrialsCsv(const std::vector<TrialReport>& reports);
std::string TrajectoryCsv(const std::vector<TrajectoryRow>& rows);

// Shortest round-trip text for a double.
std::string FormatDouble(double v);

}  // namespace coalesce

#endif  // COALESCE_REPORT_HPP_
