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

// Coloured intervals and the linear coalescence closure.
//
// A coloured interval is a finite run of alternating red and blue segments.
// A segment is recolourable when it is interior and strictly shorter than
// both neighbours; recolouring merges it with its neighbours. The closure is
// the state reached once no segment is recolourable, and does not depend on
// the order in which recolourings are applied.

#ifndef COALESCE_COLORED_INTERVAL_HPP_
#define COALESCE_COLORED_INTERVAL_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "coalesce/error.hpp"

namespace coalesce {

enum class Colour : std::uint8_t { kRed = 0, kBlue = 1 };

inline Colour Opposite(Colour c) {
  return c == Colour::kRed ? Colour::kBlue : Colour::kRed;
}
inline const char* ColourLetter(Colour c) {
  return c == Colour::kRed ? "R" : "B";
}
inline const char* ColourName(Colour c) {
  return c == Colour::kRed ? "red" : "blue";
}

namespace internal {

// Neumaier-compensated accumulation for floating point, plain sums otherwise.
template <class L>
class Accumulator {
 public:
  void Add(const L& v) {
    if constexpr (std::is_floating_point_v<L>) {
      L t = sum_ + v;
      if (std::fabs(sum_) >= std::fabs(v)) {
        comp_ += (sum_ - t) + v;
      } else {
        comp_ += (v - t) + sum_;
      }
      sum_ = t;
    } else {
      sum_ += v;
    }
  }
  L Value() const {
    if constexpr (std::is_floating_point_v<L>) {
      return sum_ + comp_;
    } else {
      return sum_;
    }
  }

 private:
  L sum_ = L(0);
  L comp_ = L(0);
};

}  // namespace internal

template <class L>
struct Segment {
  Colour colour;
  L length;
  friend bool operator==(const Segment& a, const Segment& b) {
    return a.colour == b.colour && a.length == b.length;
  }
};

template <class L>
class BasicColoredInterval {
 public:
  using Length = L;

  BasicColoredInterval() = default;
  explicit BasicColoredInterval(std::vector<Segment<L>> segments)
      : segments_(std::move(segments)) {
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      const L& len = segments_[i].length;
      if (!(len > L(0))) {
        throw Error(ErrorCode::kInvalidArgument,
                    "segment " + std::to_string(i) + " has non-positive length");
      }
      if constexpr (std::is_floating_point_v<L>) {
        if (!std::isfinite(len)) {
          throw Error(ErrorCode::kInvalidArgument,
                      "segment " + std::to_string(i) + " has non-finite length");
        }
      }
      if (i > 0 && segments_[i].colour == segments_[i - 1].colour) {
        throw Error(ErrorCode::kInvalidArgument,
                    "segments " + std::to_string(i - 1) + " and " +
                        std::to_string(i) + " share a colour");
      }
    }
  }

  static BasicColoredInterval Alternating(Colour first,
                                          const std::vector<L>& lengths) {
    std::vector<Segment<L>> segs;
    segs.reserve(lengths.size());
    Colour c = first;
    for (const L& len : lengths) {
      segs.push_back({c, len});
      c = Opposite(c);
    }
    return BasicColoredInterval(std::move(segs));
  }

  const std::vector<Segment<L>>& segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }
  bool empty() const { return segments_.empty(); }
  const Segment<L>& operator[](std::size_t i) const { return segments_[i]; }
  const Segment<L>& front() const { return segments_.front(); }
  const Segment<L>& back() const { return segments_.back(); }

  L total_length() const {
    internal::Accumulator<L> acc;
    for (const auto& s : segments_) acc.Add(s.length);
    return acc.Value();
  }

  L colour_length(Colour c) const {
    internal::Accumulator<L> acc;
    for (const auto& s : segments_) {
      if (s.colour == c) acc.Add(s.length);
    }
    return acc.Value();
  }

  bool red_ended() const {
    return !segments_.empty() && segments_.front().colour == Colour::kRed &&
           segments_.back().colour == Colour::kRed;
  }

  friend bool operator==(const BasicColoredInterval& a,
                         const BasicColoredInterval& b) {
    return a.segments_ == b.segments_;
  }

 private:
  std::vector<Segment<L>> segments_;
};

using ColoredInterval = BasicColoredInterval<double>;

// One recolouring: original segments [first, last] changed colour to
// `colour`; the merged segment now spans original segments [span_first,
// span_last].
struct MergeRecord {
  std::size_t first;
  std::size_t last;
  std::size_t span_first;
  std::size_t span_last;
  Colour colour;
};

enum class TraceMode { kNone, kCounts, kFull };

struct ClosureTrace {
  // Number of times each original segment was recoloured.
  std::vector<std::uint32_t> recolour_counts;
  std::vector<MergeRecord> merges;
};

template <class L>
struct ClosureResult {
  BasicColoredInterval<L> interval;
  ClosureTrace trace;
};

namespace internal {

[[noreturn]] inline void ThrowTie(std::size_t original_index) {
  throw Error(ErrorCode::kDegenerateTie,
              "segment starting at original index " +
                  std::to_string(original_index) +
                  " ties with an adjacent segment");
}

}  // namespace internal

// Shortest-recolourable-first closure using a doubly linked list and a
// min-heap with lazy deletion. Among equal lengths the leftmost goes first.
template <class L>
ClosureResult<L> Closure(const BasicColoredInterval<L>& c,
                         TraceMode mode = TraceMode::kNone) {
  using Index = std::uint32_t;
  constexpr Index kNil = std::numeric_limits<Index>::max();
  const std::size_t m = c.size();
  if (m >= kNil) {
    throw Error(ErrorCode::kInvalidArgument, "interval has too many segments");
  }
  ClosureResult<L> out;
  if (mode != TraceMode::kNone) out.trace.recolour_counts.assign(m, 0);
  if (m < 3) {
    out.interval = c;
    return out;
  }

  std::vector<L> len(m);
  std::vector<Index> prev(m), next(m), hi(m);
  std::vector<std::uint8_t> alive(m, 1);
  for (std::size_t i = 0; i < m; ++i) {
    len[i] = c[i].length;
    prev[i] = i == 0 ? kNil : static_cast<Index>(i - 1);
    next[i] = i + 1 == m ? kNil : static_cast<Index>(i + 1);
    hi[i] = static_cast<Index>(i);
  }
  // Node ids equal the original index of their leftmost segment, so the id
  // doubles as the positional tie-break.
  std::vector<Colour> colour(m);
  for (std::size_t i = 0; i < m; ++i) colour[i] = c[i].colour;
  std::vector<std::int64_t> diff;
  if (mode != TraceMode::kNone) diff.assign(m + 1, 0);

  struct Entry {
    L len;
    Index node;
  };
  auto later = [](const Entry& a, const Entry& b) {
    if (a.len != b.len) return b.len < a.len;
    return a.node > b.node;
  };
  std::vector<Entry> heap;
  heap.reserve(m / 2 + 1);

  auto interior = [&](Index i) { return prev[i] != kNil && next[i] != kNil; };
  auto recolourable = [&](Index i) {
    return interior(i) && len[i] < len[prev[i]] && len[i] < len[next[i]];
  };
  auto check_tie = [&](Index i) {
    if (i == kNil || !interior(i)) return;
    const L& a = len[prev[i]];
    const L& b = len[next[i]];
    if (!(len[i] <= a && len[i] <= b)) return;
    if (len[i] == a || len[i] == b) internal::ThrowTie(i);
  };
  auto push = [&](Index i) {
    heap.push_back({len[i], i});
    std::push_heap(heap.begin(), heap.end(), later);
  };

  for (Index i = 1; i + 1 < m; ++i) {
    check_tie(i);
    if (recolourable(i)) heap.push_back({len[i], i});
  }
  std::make_heap(heap.begin(), heap.end(), later);

  while (!heap.empty()) {
    std::pop_heap(heap.begin(), heap.end(), later);
    const Entry e = heap.back();
    heap.pop_back();
    const Index i = e.node;
    if (!alive[i] || len[i] != e.len || !recolourable(i)) continue;
    const Index p = prev[i];
    const Index n = next[i];
    if (mode != TraceMode::kNone) {
      diff[i] += 1;
      diff[hi[i] + 1] -= 1;
    }
    if (mode == TraceMode::kFull) {
      out.trace.merges.push_back({i, hi[i], p, hi[n], colour[p]});
    }
    const L& small = len[i];
    len[p] = len[p] < len[n] ? (small + len[p]) + len[n]
                             : (small + len[n]) + len[p];
    hi[p] = hi[n];
    next[p] = next[n];
    if (next[n] != kNil) prev[next[n]] = p;
    alive[i] = 0;
    alive[n] = 0;
    check_tie(p);
    check_tie(prev[p]);
    check_tie(next[p]);
    if (prev[p] != kNil && recolourable(prev[p])) push(prev[p]);
    if (next[p] != kNil && recolourable(next[p])) push(next[p]);
    if (recolourable(p)) push(p);
  }

  std::vector<Segment<L>> segs;
  for (Index i = 0; i != kNil; i = next[i]) segs.push_back({colour[i], len[i]});
  out.interval = BasicColoredInterval<L>(std::move(segs));
  if (mode != TraceMode::kNone) {
    std::int64_t run = 0;
    for (std::size_t i = 0; i < m; ++i) {
      run += diff[i];
      out.trace.recolour_counts[i] = static_cast<std::uint32_t>(run);
    }
  }
  return out;
}

template <class L>
std::vector<std::uint32_t> RecolourCounts(const BasicColoredInterval<L>& c) {
  return Closure(c, TraceMode::kCounts).trace.recolour_counts;
}

// Segment lengths increase (weakly) and then decrease (weakly).
template <class L>
bool IsClosed(const BasicColoredInterval<L>& c) {
  const std::size_t m = c.size();
  std::size_t i = 0;
  while (i + 1 < m && !(c[i + 1].length < c[i].length)) ++i;
  while (i + 1 < m && !(c[i].length < c[i + 1].length)) ++i;
  return m == 0 || i + 1 == m;
}

template <class L>
BasicColoredInterval<L> Concat(const BasicColoredInterval<L>& a,
                               const BasicColoredInterval<L>& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  std::vector<Segment<L>> segs = a.segments();
  auto it = b.segments().begin();
  if (segs.back().colour == it->colour) {
    segs.back().length = segs.back().length + it->length;
    ++it;
  }
  segs.insert(segs.end(), it, b.segments().end());
  return BasicColoredInterval<L>(std::move(segs));
}

// r(C): red length of the closure of a red-ended interval.
template <class L>
L RedContent(const BasicColoredInterval<L>& c) {
  if (!c.red_ended()) {
    throw Error(ErrorCode::kNotRedEnded,
                "red content is defined for red-ended intervals only");
  }
  return Closure(c).interval.colour_length(Colour::kRed);
}

template <class L>
struct GoodnessReport {
  bool good = false;
  // Central segment of the target colour, when good.
  std::size_t segment = 0;
  L left = L(0);
  L right = L(0);
  L total = L(0);
  std::size_t closure_segments = 0;
};

// Whether the closure contains a `target`-coloured segment [s, e] with
// s <= alpha |C| and |C| - e <= alpha |C|.
template <class L>
GoodnessReport<L> Goodness(const BasicColoredInterval<L>& c, double alpha,
                           Colour target = Colour::kBlue) {
  if (!(alpha > 0.0 && alpha <= 0.25)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must lie in (0, 1/4]");
  }
  const BasicColoredInterval<L> closed = Closure(c).interval;
  GoodnessReport<L> rep;
  rep.closure_segments = closed.size();
  rep.total = closed.total_length();
  const L slack = L(alpha) * rep.total;
  internal::Accumulator<L> offset;
  for (std::size_t i = 0; i < closed.size(); ++i) {
    const L start = offset.Value();
    offset.Add(closed[i].length);
    const L end = offset.Value();
    if (closed[i].colour != target) continue;
    if (start <= slack && rep.total - end <= slack) {
      rep.good = true;
      rep.segment = i;
      rep.left = start;
      rep.right = end;
      break;
    }
  }
  return rep;
}

enum class EntryKind : std::uint8_t { kRedEnded, kBlue };

// One entry of an l-bounding state. For red-ended entries `bound` is an
// upper bound on the red content; for blue entries a lower bound on the
// length.
template <class L>
struct LBoundEntry {
  EntryKind kind;
  BasicColoredInterval<L> segment;
  L bound;
};

namespace internal {

template <class L>
void ValidateLBoundState(const std::vector<LBoundEntry<L>>& state) {
  for (std::size_t i = 0; i < state.size(); ++i) {
    const auto& e = state[i];
    if (i > 0 && state[i - 1].kind == e.kind) {
      throw Error(ErrorCode::kMalformedAlternation,
                  "entries " + std::to_string(i - 1) + " and " +
                      std::to_string(i) + " have the same kind");
    }
    if (e.kind == EntryKind::kRedEnded && !e.segment.red_ended()) {
      throw Error(ErrorCode::kMalformedAlternation,
                  "entry " + std::to_string(i) + " is not red-ended");
    }
    if (e.kind == EntryKind::kBlue &&
        (e.segment.size() != 1 || e.segment[0].colour != Colour::kBlue)) {
      throw Error(ErrorCode::kMalformedAlternation,
                  "entry " + std::to_string(i) + " is not a blue segment");
    }
  }
}

inline std::size_t CeilPow2(std::size_t m) {
  std::size_t p = 1;
  while (p < m) p <<= 1;
  return p;
}

}  // namespace internal

// One round of the l-bounding update at threshold ell0. Red-ended entries
// separated by short blues merge first (bound 2^ceil(log2 m) times the sum);
// blue entries separated by short red-ended entries merge second (bound the
// sum of blue bounds). End entries have a single neighbour and stay put.
template <class L>
std::vector<LBoundEntry<L>> LBoundUpdate(
    const std::vector<LBoundEntry<L>>& state, const L& ell0) {
  internal::ValidateLBoundState(state);
  const std::size_t n = state.size();

  std::vector<LBoundEntry<L>> reds;
  for (std::size_t i = 0; i < n;) {
    if (state[i].kind == EntryKind::kBlue) {
      reds.push_back(state[i]);
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 2 < n && !(ell0 < state[j + 1].bound)) j += 2;
    if (j == i) {
      reds.push_back(state[i]);
    } else {
      BasicColoredInterval<L> seg = state[i].segment;
      L sum = state[i].bound;
      for (std::size_t t = i + 1; t <= j; ++t) {
        seg = Concat(seg, state[t].segment);
        if (state[t].kind == EntryKind::kRedEnded) sum = sum + state[t].bound;
      }
      const std::size_t m = (j - i) / 2 + 1;
      reds.push_back({EntryKind::kRedEnded, std::move(seg),
                      L(static_cast<double>(internal::CeilPow2(m))) * sum});
    }
    i = j + 1;
  }

  std::vector<LBoundEntry<L>> out;
  const std::size_t r = reds.size();
  for (std::size_t i = 0; i < r;) {
    if (reds[i].kind == EntryKind::kRedEnded) {
      out.push_back(reds[i]);
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 2 < r && !(ell0 < reds[j + 1].bound)) j += 2;
    if (j == i) {
      out.push_back(reds[i]);
    } else {
      BasicColoredInterval<L> seg = reds[i].segment;
      L sum = reds[i].bound;
      for (std::size_t t = i + 1; t <= j; ++t) {
        seg = Concat(seg, reds[t].segment);
        if (reds[t].kind == EntryKind::kBlue) sum = sum + reds[t].bound;
      }
      BasicColoredInterval<L> closed = Closure(seg).interval;
      if (closed.size() != 1) {
        throw Error(ErrorCode::kInvalidArgument,
                    "merged blue run does not close to a single blue segment; "
                    "entry bounds violate the l-bounding invariants");
      }
      out.push_back({EntryKind::kBlue, std::move(closed), sum});
    }
    i = j + 1;
  }
  return out;
}

// Unit red interval whose middle (1/3 - eps) of every red piece is replaced
// by blue, recursively to the given depth.
ColoredInterval CantorConstruction(int depth, double eps);

}  // namespace coalesce

#endif  // COALESCE_COLORED_INTERVAL_HPP_
