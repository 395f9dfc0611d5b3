// include/asrpipe/util/hash.hpp

// Copyright 2026 asrpipe authors
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

#ifndef ASRPIPE_UTIL_HASH_HPP
#define ASRPIPE_UTIL_HASH_HPP

#include <cstdint>
#include <string_view>

namespace asrpipe {

// FNV-1a, 64 bit. Stable across platforms; used for content-keyed seeding.
inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

// splitmix64 finalizer; bijective 64-bit mixing.
inline std::uint64_t mix_bits(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Deterministic combination of a seed and a stream index, e.g. to derive
// a per-iteration RNG seed from a pipeline seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix_bits(seed ^ mix_bits(stream));
}

}  // namespace asrpipe

#endif  // ASRPIPE_UTIL_HASH_HPP
