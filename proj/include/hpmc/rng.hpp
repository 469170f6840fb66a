// Copyright 2026 The HPMC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HPMC_RNG_HPP
#define HPMC_RNG_HPP

#include <cstdint>
#include <random>

namespace hpmc {

// Counter-derived random substreams.  Every consumer of randomness derives
// its own engine from (seed, tag, a, b); the derivation is a pure hash, so
// the stream a component sees does not depend on what any other component
// consumed before it.  This is what makes runs bit-reproducible regardless
// of execution order.

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

enum class StreamTag : std::uint64_t {
  population_init = 1,
  sampling = 2,
  local_resample = 3,
  chain_move = 4,
  cooperation = 5,
  adapt_resample = 6,
  amis = 7,
  replicate = 8,
  chain_burn_in = 9,
};

inline std::uint64_t stream_key(std::uint64_t seed, StreamTag tag,
                                std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t h = mix64(seed);
  h = hash_combine(h, static_cast<std::uint64_t>(tag));
  h = hash_combine(h, a);
  return hash_combine(h, b);
}

inline std::mt19937_64 substream(std::uint64_t seed, StreamTag tag,
                                 std::uint64_t a = 0, std::uint64_t b = 0) {
  return std::mt19937_64(stream_key(seed, tag, a, b));
}

// Seed for replicate r of an experiment; replicates are sub-streams of the
// base seed, never sequential reseedings.
inline std::uint64_t replicate_seed(std::uint64_t seed_base, std::uint64_t r) {
  return stream_key(seed_base, StreamTag::replicate, r);
}

}  // namespace hpmc

#endif  // HPMC_RNG_HPP
