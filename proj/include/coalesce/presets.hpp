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

// Named red/blue distribution pairs.

#ifndef COALESCE_PRESETS_HPP_
#define COALESCE_PRESETS_HPP_

#include <map>
#include <string>
#include <vector>

#include "coalesce/colored_interval.hpp"
#include "coalesce/dist.hpp"

namespace coalesce {

struct PresetParam {
  std::string name;
  double default_value;  // NaN when required
  std::string help;
};

struct PresetInfo {
  std::string name;
  std::string description;
  std::vector<PresetParam> params;
};

struct Preset {
  std::string name;
  std::map<std::string, double> params;
  DistSpec red;
  DistSpec blue;
  // Colour expected to win, and the bad-window probability that suffices
  // for the renormalisation argument (NaN when none applies).
  Colour target;
  double q_threshold;
};

const std::vector<PresetInfo>& PresetCatalogue();

// Throws UnknownPreset or MissingParam.
Preset MakePreset(const std::string& name,
                  const std::map<std::string, double>& params = {});

}  // namespace coalesce

#endif  // COALESCE_PRESETS_HPP_
