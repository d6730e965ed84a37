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

#ifndef COALESCE_VERIFICATION_HPP_
#define COALESCE_VERIFICATION_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace coalesce {

enum class Status { kVerified, kFalsified, kInconclusive };

const char* StatusName(Status s);

using Metrics = std::vector<std::pair<std::string, double>>;

struct Witness {
  std::string description;
  Metrics values;
};

struct VerificationReport {
  std::string check;
  Status status = Status::kInconclusive;
  std::string region;
  std::uint64_t rectangles_processed = 0;
  std::uint64_t chain_length = 0;
  std::optional<Witness> witness;
  // Smallest certified margin observed (NaN when not applicable).
  double slack = 0;
  Metrics metrics;
  std::vector<std::string> notes;
  std::vector<VerificationReport> sub_checks;
};

}  // namespace coalesce

#endif  // COALESCE_VERIFICATION_HPP_
