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

#include "coalesce/error.hpp"

#include <utility>

namespace coalesce {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kDegenerateTie: return "DegenerateTie";
    case ErrorCode::kNotRedEnded: return "NotRedEnded";
    case ErrorCode::kUnsupported: return "Unsupported";
    case ErrorCode::kInfiniteMoment: return "InfiniteMoment";
    case ErrorCode::kDomain: return "DomainError";
    case ErrorCode::kMalformedAlternation: return "MalformedAlternation";
    case ErrorCode::kUnknownPreset: return "UnknownPreset";
    case ErrorCode::kMissingParam: return "MissingParam";
    case ErrorCode::kPreconditionFailed: return "PreconditionFailed";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected,
                       const std::string& what)
    : Error(ErrorCode::kParse, what),
      offset_(offset),
      expected_(std::move(expected)) {}

}  // namespace coalesce
