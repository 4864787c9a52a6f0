// Copyright 2026 The Privex Authors
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

#ifndef PRIVEX_RNG_HPP_
#define PRIVEX_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <vector>

namespace privex {

// Names one round's randomness. (master_seed, round, stream_id) uniquely
// determines every draw made for that round, so replays are exact and
// parallel runs never share streams.
struct RoundSeed {
  std::uint64_t master_seed = 0;
  std::uint64_t round = 0;
  std::string_view stream_id;
};

namespace detail {

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

// Derives a fresh master seed for a sub-experiment (per-run sharding and
// the like). Deterministic and label-separated.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                    std::string_view label) {
  std::uint64_t s = detail::mix64(master ^ 0x9e3779b97f4a7c15ULL);
  s = detail::mix64(s ^ detail::fnv1a64(label));
  return detail::mix64(s ^ index);
}

// Counter-based pseudo-random stream (splitmix64 core, Box-Muller normals).
// The state is a pure function of the RoundSeed, so any draw sequence is
// replayable and independent across (master, round, stream_id) triples.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t state) : state_(state) {}

  explicit CounterRng(const RoundSeed& seed)
      : CounterRng(detail::mix64(
            detail::mix64(detail::mix64(seed.master_seed ^
                                        0x9e3779b97f4a7c15ULL) ^
                          detail::fnv1a64(seed.stream_id)) ^
            seed.round)) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return detail::mix64(state_);
  }

  // Uniform on [0, 1), 53 bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1]; safe as a log argument.
  double next_unit_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; second member of each pair is cached.
  double next_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = next_unit_open();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  std::vector<double> normals(std::size_t count) {
    std::vector<double> out(count);
    for (auto& v : out) v = next_normal();
    return out;
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace privex

#endif  // PRIVEX_RNG_HPP_
