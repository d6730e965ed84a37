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

#include "coalesce/svg.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <queue>
#include <tuple>

#include "coalesce/error.hpp"

namespace coalesce {

namespace {

constexpr double kLeft = 90;
constexpr double kWidth = 900;
constexpr double kBar = 18;
constexpr double kGap = 10;

std::string Fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string Label(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

ColoredInterval PartialClosure(const ColoredInterval& c, double threshold) {
  const std::size_t m = c.size();
  if (m < 3) return c;
  std::vector<double> len(m);
  std::vector<Colour> col(m);
  std::vector<std::size_t> prev(m), next(m);
  std::vector<bool> alive(m, true);
  constexpr std::size_t kNil = static_cast<std::size_t>(-1);
  for (std::size_t i = 0; i < m; ++i) {
    len[i] = c[i].length;
    col[i] = c[i].colour;
    prev[i] = i == 0 ? kNil : i - 1;
    next[i] = i + 1 == m ? kNil : i + 1;
  }
  using Item = std::tuple<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  auto recolourable = [&](std::size_t i) {
    return alive[i] && prev[i] != kNil && next[i] != kNil &&
           len[i] < len[prev[i]] && len[i] < len[next[i]] && len[i] < threshold;
  };
  auto offer = [&](std::size_t i) {
    if (i != kNil && recolourable(i)) heap.emplace(len[i], i);
  };
  for (std::size_t i = 0; i < m; ++i) offer(i);
  while (!heap.empty()) {
    const auto [l, i] = heap.top();
    heap.pop();
    if (!alive[i] || len[i] != l || !recolourable(i)) continue;
    const std::size_t p = prev[i], q = next[i];
    len[p] += len[i] + len[q];
    alive[i] = alive[q] = false;
    next[p] = next[q];
    if (next[q] != kNil) prev[next[q]] = p;
    offer(p);
    if (prev[p] != kNil) offer(prev[p]);
    if (next[p] != kNil) offer(next[p]);
  }
  std::vector<Segment<double>> segs;
  for (std::size_t i = 0; i != kNil; i = next[i]) segs.push_back({col[i], len[i]});
  return ColoredInterval(std::move(segs));
}

std::string RenderSnapshots(const ColoredInterval& c,
                            const std::vector<double>& thresholds) {
  for (std::size_t i = 1; i < thresholds.size(); ++i) {
    if (thresholds[i] < thresholds[i - 1]) {
      throw Error(ErrorCode::kInvalidArgument, "thresholds must be non-decreasing");
    }
  }
  const double total = c.total_length();
  const double height = kGap + thresholds.size() * (kBar + kGap);
  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
       Fixed(kLeft + kWidth + kGap) + "\" height=\"" + Fixed(height) + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  double y = kGap;
  for (double t : thresholds) {
    const ColoredInterval state = PartialClosure(c, t);
    s += "<text x=\"4\" y=\"" + Fixed(y + kBar - 4) +
         "\" font-family=\"sans-serif\" font-size=\"12\">l = " + Label(t) + "</text>\n";
    double pos = 0;
    for (const auto& seg : state.segments()) {
      const double x = kLeft + kWidth * pos / total;
      const double w = kWidth * seg.length / total;
      s += "<rect x=\"" + Fixed(x) + "\" y=\"" + Fixed(y) + "\" width=\"" + Fixed(w) +
           "\" height=\"" + Fixed(kBar) + "\" fill=\"" +
           (seg.colour == Colour::kRed ? "#d62728" : "#1f77b4") + "\"/>\n";
      pos += seg.length;
    }
    y += kBar + kGap;
  }
  s += "</svg>\n";
  return s;
}

void WriteSnapshots(const ColoredInterval& c, const std::vector<double>& thresholds,
                    const std::string& path) {
  const std::string doc = RenderSnapshots(c, thresholds);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot open " + path + " for writing");
  f << doc;
  if (!f) throw Error(ErrorCode::kIo, "failed writing " + path);
}

}  // namespace coalesce
