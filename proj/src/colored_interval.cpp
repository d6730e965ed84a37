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

#include "coalesce/colored_interval.hpp"

#include <functional>

namespace coalesce {

ColoredInterval CantorConstruction(int depth, double eps) {
  if (depth < 0 || depth > 24) {
    throw Error(ErrorCode::kInvalidArgument, "depth must lie in [0, 24]");
  }
  if (!(eps >= 0.0 && eps < 1.0 / 3.0)) {
    throw Error(ErrorCode::kInvalidArgument, "eps must lie in [0, 1/3)");
  }
  const double gap = 1.0 / 3.0 - eps;
  std::vector<double> lengths;
  std::function<void(int, double)> build = [&](int d, double width) {
    if (d == 0) {
      lengths.push_back(width);
      return;
    }
    const double side = width * (1.0 - gap) / 2.0;
    build(d - 1, side);
    lengths.push_back(width * gap);
    build(d - 1, side);
  };
  build(depth, 1.0);
  return ColoredInterval::Alternating(Colour::kRed, lengths);
}

}  // namespace coalesce
