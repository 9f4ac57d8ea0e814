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

#ifndef DPBANDITS_ENV_HPP_
#define DPBANDITS_ENV_HPP_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "dpbandits/noise.hpp"

namespace dpbandits {

enum class RewardFamily { kBernoulli };

// Immutable description of a stochastic environment. The best mean and the
// gaps are derived on construction.
class EnvironmentSpec {
 public:
  // Throws InvalidParameter unless K >= 2, every mean is in [0, 1] and
  // horizon >= 1.
  EnvironmentSpec(std::vector<double> means, std::int64_t horizon,
                  RewardFamily family = RewardFamily::kBernoulli);

  int arms() const { return static_cast<int>(means_.size()); }
  std::span<const double> means() const { return means_; }
  double mean(int arm) const { return means_.at(static_cast<std::size_t>(arm)); }
  std::int64_t horizon() const { return horizon_; }
  RewardFamily family() const { return family_; }
  double best_mean() const { return best_; }
  double gap(int arm) const { return best_ - mean(arm); }

 private:
  std::vector<double> means_;
  std::int64_t horizon_;
  RewardFamily family_;
  double best_;
};

// One reward per arm for a single round.
using RewardVector = std::vector<double>;

// K independent draws into `out` (size K), arm j from `arm_streams[j]`.
void draw_round(const EnvironmentSpec& spec, std::span<RngStream> arm_streams,
                std::span<double> out);

// Owns the per-arm reward streams of one run.
class Environment {
 public:
  Environment(const EnvironmentSpec& spec, std::uint64_t seed,
              std::uint64_t run_index);

  const EnvironmentSpec& spec() const { return spec_; }

  // Fills `out` with this round's reward vector.
  void draw(std::span<double> out);
  RewardVector draw();

 private:
  EnvironmentSpec spec_;
  std::vector<RngStream> streams_;
};

// mu* - mu_arm. Throws InvalidParameter for an out-of-range arm.
double pseudo_regret_increment(const EnvironmentSpec& spec, int arm);

// mu* - <weights, mu>. Weights must be nonnegative and sum to 1 within 1e-9.
double pseudo_regret_increment(const EnvironmentSpec& spec,
                               std::span<const double> weights);

struct MeanSetting {
  int id;
  std::string_view description;
  std::vector<double> means;
};

// The three built-in K = 5 settings.
const std::vector<MeanSetting>& builtin_settings();
// Throws InvalidParameter for an unknown id.
const MeanSetting& builtin_setting(int id);

}  // namespace dpbandits

#endif  // DPBANDITS_ENV_HPP_
