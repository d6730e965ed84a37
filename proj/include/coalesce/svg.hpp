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

// Static SVG snapshots of the coalescence: one bar per length threshold.

#ifndef COALESCE_SVG_HPP_
#define COALESCE_SVG_HPP_

#include <string>
#include <vector>

#include "coalesce/colored_interval.hpp"

namespace coalesce {

// State after repeatedly recolouring interior segments that are strictly
// shorter than both neighbours and shorter than `threshold`, shortest
// first (leftmost on ties).
ColoredInterval PartialClosure(const ColoredInterval& c, double threshold);

// SVG 1.1 document; thresholds must be non-decreasing.
std::string RenderSnapshots(const ColoredInterval& c,
                            const std::vector<double>& thresholds);

// Throws Io when the file cannot be written.
void WriteSnapshots(const ColoredInterval& c,
                    const std::vector<double>& thresholds,
                    const std::string& path);

}  // namespace coalesce

#endif  // COALESCE_SVG_HPP_
