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

// Hand-rolled generators and property predicates shared by the unit tests
// and the acceptance runner. Lengths are 64-bit integers so every sum is
// exact; instances that hit a length tie are redrawn.

#ifndef COALESCE_TESTS_PROPERTIES_HPP_
#define COALESCE_TESTS_PROPERTIES_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "coalesce/colored_interval.hpp"
#include "coalesce/error.hpp"
#include "oracles.hpp"

namespace props {

using coalesce::Colour;
using Int = std::int64_t;
using IntInterval = coalesce::BasicColoredInterval<Int>;

inline Int Draw(std::mt19937_64& rng, Int lo, Int hi) {
  return std::uniform_int_distribution<Int>(lo, hi)(rng);
}

// Lengths spread over several orders of magnitude so that both short and
// long segments occur in the same instance.
inline Int RandomLength(std::mt19937_64& rng) {
  const int decade = static_cast<int>(Draw(rng, 0, 5));
  Int scale = 1;
  for (int i = 0; i < decade; ++i) scale *= 10;
  return Draw(rng, scale * 100, scale * 1000);
}

inline IntInterval RandomRedEnded(std::mt19937_64& rng, int max_pairs) {
  const int pairs = static_cast<int>(Draw(rng, 0, max_pairs));
  std::vector<Int> l;
  for (int i = 0; i < 2 * pairs + 1; ++i) l.push_back(RandomLength(rng));
  return IntInterval::Alternating(Colour::kRed, l);
}

inline IntInterval Blue(Int len) { return IntInterval({{Colour::kBlue, len}}); }

// Runs `trial` until it completes without a length tie; returns its verdict.
template <class F>
bool Retry(F&& trial) {
  for (;;) {
    try {
      return trial();
    } catch (const coalesce::Error& e) {
      if (e.code() != coalesce::ErrorCode::kDegenerateTie) throw;
    }
  }
}

// r(C- + B + C+) <= 2 r(C-) + 2 r(C+).
inline bool Lemma62(std::mt19937_64& rng) {
  return Retry([&] {
    const auto a = RandomRedEnded(rng, 4);
    const auto b = RandomRedEnded(rng, 4);
    const auto whole = coalesce::Concat(coalesce::Concat(a, Blue(RandomLength(rng))), b);
    return coalesce::RedContent(whole) <=
           2 * coalesce::RedContent(a) + 2 * coalesce::RedContent(b);
  });
}

inline Int CeilPow2(Int k) {
  Int p = 1;
  while (p < k) p <<= 1;
  return p;
}

// r(C_1 + B_1 + ... + C_k) <= 2^ceil(log2 k) sum r(C_i), k <= 16.
inline bool Corollary63(std::mt19937_64& rng) {
  return Retry([&] {
    const Int k = Draw(rng, 1, 16);
    IntInterval whole;
    Int sum = 0;
    for (Int i = 0; i < k; ++i) {
      if (i > 0) whole = coalesce::Concat(whole, Blue(RandomLength(rng)));
      const auto c = RandomRedEnded(rng, 3);
      sum += coalesce::RedContent(c);
      whole = coalesce::Concat(whole, c);
    }
    return coalesce::RedContent(whole) <= CeilPow2(k) * sum;
  });
}

// |B-|, |B+| > r(C) forces closure(B- + C + B+) to be one blue segment.
inline bool Proposition64(std::mt19937_64& rng) {
  return Retry([&] {
    const auto c = RandomRedEnded(rng, 5);
    const Int r = coalesce::RedContent(c);
    const auto whole = coalesce::Concat(
        coalesce::Concat(Blue(r + Draw(rng, 1, r + 1)), c), Blue(r + Draw(rng, 1, r + 1)));
    const auto closed = coalesce::Closure(whole).interval;
    return closed.size() == 1 && closed[0].colour == Colour::kBlue;
  });
}

// Counts of c never exceed the counts of the same segments inside c- + c + c+.
inline bool EmbeddingMonotone(std::mt19937_64& rng) {
  return Retry([&] {
    auto side = [&](Colour touching) {
      const Int m = Draw(rng, 1, 4);
      std::vector<Int> l;
      for (Int i = 0; i < m; ++i) l.push_back(RandomLength(rng));
      // Alternating() starts with `first`; pick it so the last segment is `touching`.
      const Colour first = m % 2 == 1 ? touching : coalesce::Opposite(touching);
      return IntInterval::Alternating(first, l);
    };
    const Int m = Draw(rng, 1, 6);
    std::vector<Int> l;
    for (Int i = 0; i < m; ++i) l.push_back(RandomLength(rng));
    const auto c = IntInterval::Alternating(Draw(rng, 0, 1) ? Colour::kRed : Colour::kBlue, l);
    const auto left = side(coalesce::Opposite(c.front().colour));
    auto right_rev = side(coalesce::Opposite(c.back().colour));
    std::vector<coalesce::Segment<Int>> rs(right_rev.segments().rbegin(),
                                           right_rev.segments().rend());
    const IntInterval right(rs);
    const auto whole = coalesce::Concat(coalesce::Concat(left, c), right);
    const auto inner = coalesce::RecolourCounts(c);
    const auto outer = coalesce::RecolourCounts(whole);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (inner[i] > outer[left.size() + i]) return false;
    }
    return true;
  });
}

// Random l-bounding updates on true segments keep both bound invariants.
inline bool LBoundSound(std::mt19937_64& rng) {
  using Entry = coalesce::LBoundEntry<Int>;
  return Retry([&] {
    const Int m = Draw(rng, 1, 12);
    std::vector<Entry> state;
    for (Int i = 0; i < m; ++i) {
      if (i > 0) {
        const Int b = RandomLength(rng);
        state.push_back({coalesce::EntryKind::kBlue, Blue(b), b});
      }
      const auto c = RandomRedEnded(rng, 2);
      state.push_back({coalesce::EntryKind::kRedEnded, c, coalesce::RedContent(c)});
    }
    Int ell0 = 0;
    for (int step = 0; step < 6 && state.size() > 1; ++step) {
      ell0 += Draw(rng, 1, 200000);
      state = coalesce::LBoundUpdate(state, ell0);
      for (const auto& e : state) {
        if (e.kind == coalesce::EntryKind::kRedEnded) {
          if (e.bound < coalesce::RedContent(e.segment)) return false;
        } else if (e.bound > e.segment.total_length()) {
          return false;
        }
      }
    }
    return true;
  });
}

// closure() and RecolourCounts() agree with every complete recolouring order.
inline bool MatchesOracle(std::mt19937_64& rng, std::string* why = nullptr) {
  const auto c = oracle::RandomExact(rng, 8);
  const auto outcomes = oracle::AllOutcomes(c);
  if (outcomes.size() != 1) {
    if (why) *why = "oracle found " + std::to_string(outcomes.size()) + " outcomes";
    return false;
  }
  const auto res = coalesce::Closure(c, coalesce::TraceMode::kCounts);
  const auto& want = *outcomes.begin();
  if (res.interval.size() != want.segments.size()) {
    if (why) *why = "segment count differs";
    return false;
  }
  for (std::size_t i = 0; i < want.segments.size(); ++i) {
    if (static_cast<int>(res.interval[i].colour) != want.segments[i].first ||
        res.interval[i].length != want.segments[i].second) {
      if (why) *why = "segment " + std::to_string(i) + " differs";
      return false;
    }
  }
  if (res.trace.recolour_counts != want.counts) {
    if (why) *why = "recolour counts differ";
    return false;
  }
  return true;
}

}  // namespace props

#endif  // COALESCE_TESTS_PROPERTIES_HPP_
