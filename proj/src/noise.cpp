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

#include "dpbandits/noise.hpp"

#include <cmath>
#include <string>

#include "dpbandits/errors.hpp"

namespace dpbandits {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_stream_id(std::uint64_t run_index, std::uint64_t arm_index,
                               StreamPurpose purpose) {
  std::uint64_t h = mix64(run_index);
  h = mix64(h ^ arm_index);
  return mix64(h ^ static_cast<std::uint64_t>(purpose));
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed),
      stream_id_(stream_id),
      engine_(mix64(seed ^ mix64(stream_id))) {}

double RngStream::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_centered() {
  // (2k + 1) / 2^53 for k < 2^52 is exact and lies strictly inside (0, 1),
  // so the shift by 1/2 is exact too.
  const std::uint64_t k = engine_() >> 12;
  return static_cast<double>(2 * k + 1) * 0x1.0p-53 - 0.5;
}

double laplace_from_uniform(double u, double scale) {
  if (u == 0.0) return 0.0;
  const double magnitude = -scale * std::log1p(-2.0 * std::fabs(u));
  return u > 0.0 ? magnitude : -magnitude;
}

double laplace(double scale, RngStream& rng, NoiseMode mode) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InvalidParameter("laplace: scale must be positive and finite, got " +
                           std::to_string(scale));
  }
  if (mode == NoiseMode::kZeroed) return 0.0;
  return laplace_from_uniform(rng.uniform_centered(), scale);
}

int bernoulli(double p, RngStream& rng) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidParameter("bernoulli: mean must lie in [0, 1], got " +
                           std::to_string(p));
  }
  return rng.uniform01() < p ? 1 : 0;
}

double LaplaceSource::draw(double scale) {
  if (scale == 0.0) return 0.0;
  return laplace(scale, rng_, mode_);
}

}  // namespace dpbandits
