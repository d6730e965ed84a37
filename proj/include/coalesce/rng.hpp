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

// Counter-based random streams. Every draw is a pure function of
// (seed, trial, slot, draw index), so results never depend on scheduling.

#ifndef COALESCE_RNG_HPP_
#define COALESCE_RNG_HPP_

#include <array>
#include <cstdint>
#include <limits>

namespace coalesce {

// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> Philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Stream of 64-bit words for one (trial, slot) pair. Satisfies
// UniformRandomBitGenerator.
class Stream {
 public:
  using result_type = std::uint64_t;

  Stream(std::uint64_t seed, std::uint64_t trial, std::uint32_t slot)
      : seed_(seed), trial_(trial), slot_(slot) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    if (pos_ == 2) Refill();
    return buf_[pos_++];
  }

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double Uniform01() {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  void Refill();

  std::uint64_t seed_;
  std::uint64_t trial_;
  std::uint32_t slot_;
  std::uint32_t block_ = 0;
  std::array<std::uint64_t, 2> buf_{};
  int pos_ = 2;
};

}  // namespace coalesce

#endif  // COALESCE_RNG_HPP_
