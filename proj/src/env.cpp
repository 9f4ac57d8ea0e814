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

#include "dpbandits/env.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dpbandits/errors.hpp"

namespace dpbandits {

EnvironmentSpec::EnvironmentSpec(std::vector<double> means, std::int64_t horizon,
                                 RewardFamily family)
    : means_(std::move(means)), horizon_(horizon), family_(family) {
  if (means_.size() < 2) {
    throw InvalidParameter("environment needs at least two arms");
  }
  for (double m : means_) {
    if (!(m >= 0.0 && m <= 1.0)) {
      throw InvalidParameter("arm mean " + std::to_string(m) +
                             " is outside [0, 1]");
    }
  }
  if (horizon_ < 1) throw InvalidParameter("horizon must be positive");
  best_ = *std::max_element(means_.begin(), means_.end());
}

void draw_round(const EnvironmentSpec& spec, std::span<RngStream> arm_streams,
                std::span<double> out) {
  const auto k = static_cast<std::size_t>(spec.arms());
  if (arm_streams.size() != k || out.size() != k) {
    throw InvalidParameter("draw_round: expected one stream and slot per arm");
  }
  for (std::size_t j = 0; j < k; ++j) {
    out[j] = static_cast<double>(bernoulli(spec.means()[j], arm_streams[j]));
  }
}

Environment::Environment(const EnvironmentSpec& spec, std::uint64_t seed,
                         std::uint64_t run_index)
    : spec_(spec) {
  streams_.reserve(static_cast<std::size_t>(spec.arms()));
  for (int j = 0; j < spec.arms(); ++j) {
    streams_.emplace_back(
        seed, derive_stream_id(run_index, static_cast<std::uint64_t>(j),
                               StreamPurpose::kReward));
  }
}

void Environment::draw(std::span<double> out) { draw_round(spec_, streams_, out); }

RewardVector Environment::draw() {
  RewardVector v(static_cast<std::size_t>(spec_.arms()));
  draw(v);
  return v;
}

double pseudo_regret_increment(const EnvironmentSpec& spec, int arm) {
  if (arm < 0 || arm >= spec.arms()) {
    throw InvalidParameter("arm index " + std::to_string(arm) + " out of range");
  }
  return spec.best_mean() - spec.means()[static_cast<std::size_t>(arm)];
}

double pseudo_regret_increment(const EnvironmentSpec& spec,
                               std::span<const double> weights) {
  if (weights.size() != static_cast<std::size_t>(spec.arms())) {
    throw InvalidParameter("weight vector has the wrong length");
  }
  double total = 0.0;
  double expected = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (!(weights[j] >= 0.0) || !std::isfinite(weights[j])) {
      throw InvalidParameter("weights must be nonnegative");
    }
    total += weights[j];
    expected += weights[j] * spec.means()[j];
  }
  if (std::fabs(total - 1.0) > 1e-9) {
    throw InvalidParameter("weights must sum to 1");
  }
  return std::max(0.0, spec.best_mean() - expected);
}

const std::vector<MeanSetting>& builtin_settings() {
  static const std::vector<MeanSetting> kSettings = {
      {1, "one close competitor gap (0.05) shared by four arms",
       {0.75, 0.70, 0.70, 0.70, 0.70}},
      {2, "evenly spaced means", {0.75, 0.625, 0.5, 0.375, 0.25}},
      {3, "one clearly best arm", {0.75, 0.15, 0.15, 0.15, 0.15}},
  };
  return kSettings;
}

const MeanSetting& builtin_setting(int id) {
  for (const MeanSetting& s : builtin_settings()) {
    if (s.id == id) return s;
  }
  throw InvalidParameter("unknown mean setting " + std::to_string(id));
}

}  // namespace dpbandits
