// Copyright 2026 The dpbandits Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPBANDITS_NOISE_HPP_
#define DPBANDITS_NOISE_HPP_

#include <cstdint>
#include <random>

namespace dpbandits {

// Zeroed mode turns every Laplace draw into an exact 0 while leaving reward
// draws untouched; the oracle-equivalence tests run private policies this way.
enum class NoiseMode { kLive, kZeroed };

// What a derived stream is used for. Part of the stream-id hash so that the
// reward stream and the noise stream of the same arm never coincide.
enum class StreamPurpose : std::uint64_t {
  kReward = 0x7265776172640000ULL,
  kNoise = 0x6e6f697365000000ULL,
};

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// stream-id = hash(run-index, arm-index, purpose-tag). Pure; thread safe.
std::uint64_t derive_stream_id(std::uint64_t run_index, std::uint64_t arm_index,
                               StreamPurpose purpose);

// Deterministic, splittable source of uniform bits. Every (seed, stream_id)
// pair maps to its own mt19937_64 engine, and all conversions to reals are
// done here bit by bit so the sequence is identical on every platform.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01();

  // Uniform on the open interval (-1/2, 1/2); never returns +-1/2.
  double uniform_centered();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

// Inverse CDF of Lap(scale) evaluated at u in (-1/2, 1/2):
// -scale * sign(u) * ln(1 - 2|u|).
double laplace_from_uniform(double u, double scale);

// One draw from Lap(scale). Throws InvalidParameter unless scale > 0.
// Zeroed mode returns 0 without touching the stream.
double laplace(double scale, RngStream& rng, NoiseMode mode = NoiseMode::kLive);

// Returns 1 with probability p. Throws InvalidParameter for p outside [0, 1].
int bernoulli(double p, RngStream& rng);

// A Laplace sampler bound to one stream and one mode. Owned by exactly one
// mechanism or policy.
class LaplaceSource {
 public:
  LaplaceSource(RngStream rng, NoiseMode mode) : rng_(rng), mode_(mode) {}

  // A scale of exactly 0 means "no privacy noise" (epsilon = infinity) and
  // returns 0; negative or non-finite scales are rejected.
  double draw(double scale);

  NoiseMode mode() const { return mode_; }
  RngStream& stream() { return rng_; }

 private:
  RngStream rng_;
  NoiseMode mode_;
};

}  // namespace dpbandits

#endif  // DPBANDITS_NOISE_HPP_
