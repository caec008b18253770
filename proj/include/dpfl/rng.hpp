// Copyright 2026 The DPFL Authors
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

#ifndef DPFL_RNG_HPP_
#define DPFL_RNG_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace dpfl {

// Deterministic random stream addressed by (seed, stream id). The same pair
// always reproduces the same draw sequence, independently of every other
// stream, so callers can key streams by logical position (client, round,
// step) instead of by call order.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();

  // Standard normal via Box-Muller. Consumes exactly two uniforms per call;
  // no state is cached between calls.
  double normal();

  std::uint64_t next_u64();

  // Collapses a tuple of logical coordinates into a stream id. Used to key
  // streams as (master seed, derive_stream({tag, client, round, step})).
  static std::uint64_t derive_stream(std::initializer_list<std::uint64_t> parts);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

}  // namespace dpfl

#endif  // DPFL_RNG_HPP_
