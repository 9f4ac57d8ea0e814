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

#ifndef DPBANDITS_ALGORITHMS_HPP_
#define DPBANDITS_ALGORITHMS_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dpbandits/env.hpp"
#include "dpbandits/mechanisms.hpp"
#include "dpbandits/noise.hpp"

namespace dpbandits {

enum class FeedbackKind { kBandit, kFull };

// What the learner plays in one round: a single arm, or a weight
// distribution over arms. FTNL plays point masses, which are weight vectors
// with all mass on one action.
class Decision {
 public:
  enum class Kind { kArm, kPointMass, kWeights };

  static Decision arm(int a) { return Decision(Kind::kArm, a, {}); }
  static Decision point_mass(int a) { return Decision(Kind::kPointMass, a, {}); }
  // Throws InvalidParameter unless weights are nonnegative and sum to 1
  // within 1e-9.
  static Decision weights(std::vector<double> w);

  Kind kind() const { return kind_; }
  bool is_arm() const { return kind_ == Kind::kArm; }
  // The played arm for kArm and kPointMass; -1 for a spread distribution.
  int chosen_arm() const { return arm_; }
  // Dense weight vector of length `arms`.
  std::vector<double> weight_vector(int arms) const;

  bool operator==(const Decision&) const = default;

 private:
  Decision(Kind kind, int arm, std::vector<double> w)
      : kind_(kind), arm_(arm), weights_(std::move(w)) {}

  Kind kind_;
  int arm_;
  std::vector<double> weights_;
};

// Pseudo-regret of one decision against the true means.
double pseudo_regret_increment(const EnvironmentSpec& spec, const Decision& d);

// Constants of DP successive elimination. Epoch e uses the target gap
// Delta_e = 2^-e and pulls each surviving arm
//   R_e = ceil(max(hoeffding_coef * ln(hoeffding_log_mult * |S| * e^2 / beta) / Delta_e^2,
//                  privacy_coef * ln(privacy_log_mult * |S| * e^2 / beta) / (eps * Delta_e)))
// times; afterwards every arm whose private mean trails the leader by more
// than elimination_fraction * Delta_e is dropped. beta defaults to 1/T.
struct DpseConstants {
  double hoeffding_coef = 32.0;
  double hoeffding_log_mult = 8.0;
  double privacy_coef = 8.0;
  double privacy_log_mult = 4.0;
  double elimination_fraction = 0.5;
  std::optional<double> beta;
};

struct PolicyConfig {
  int arms = 2;
  // Privacy budget; +infinity selects the non-private limit (no noise, no
  // privacy bonus).
  double epsilon = 1.0;
  // Only DP-SE reads the horizon; it is a configuration error to build
  // DP-SE without one.
  std::optional<std::int64_t> horizon;
  NoiseMode noise = NoiseMode::kLive;
  std::uint64_t seed = 0;
  std::uint64_t run_index = 0;
  DpseConstants dpse;
};

// Common interface. The caller drives rounds t = 1, 2, ... in order: one
// decide(t) followed by one observe(...) per round. Bandit policies only
// ever see the reward of the arm they played.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::string_view name() const = 0;
  virtual FeedbackKind feedback_kind() const { return FeedbackKind::kBandit; }

  virtual Decision decide(std::int64_t t) = 0;
  virtual void observe(std::int64_t t, int arm, double reward);
  virtual void observe_full(std::int64_t t, std::span<const double> rewards);
};

// Maps the accepted spellings ("alucb", "anytime-lazy-ucb", "hybrid", ...)
// to the canonical name. Throws ConfigError for unknown names.
std::string canonical_policy_name(std::string_view name);
std::vector<std::string> policy_names();
bool policy_needs_horizon(std::string_view name);
FeedbackKind policy_feedback_kind(std::string_view name);

std::unique_ptr<Policy> make_policy(std::string_view name,
                                    const PolicyConfig& config);

// Rewards outside [0, 1] are clamped; a warning is logged once per process.
double clamp_reward(double x);

// ---------------------------------------------------------------------------
// Anytime-Lazy-UCB

// Per-arm state: the compressed active array plus the private mean released
// by the most recent full array. O(1) scalars, no per-observation storage.
struct ArmLedger {
  std::int64_t pulls = 0;
  // Index r of the most recent full array (capacity 2^r).
  int full_index = -1;
  std::int64_t last_full_size = 0;
  double private_mean = 0.0;
  ArraySum active{1, 0.0};
  // Number of arrays created so far, including the active one.
  int arrays_created = 0;

  bool initialized() const { return pulls > 0; }
};

// mu~ + sqrt(3 ln t / lambda) + 3 ln t / (eps * lambda). Throws
// std::logic_error for an uninitialized ledger.
double alucb_index(const ArmLedger& ledger, std::int64_t t, double epsilon);
// Same index with ln t supplied directly.
double alucb_index_from_log(const ArmLedger& ledger, double log_t,
                            double epsilon);

class AnytimeLazyUcb final : public Policy {
 public:
  explicit AnytimeLazyUcb(const PolicyConfig& config);

  std::string_view name() const override { return "anytime-lazy-ucb"; }
  Decision decide(std::int64_t t) override;
  void observe(std::int64_t t, int arm, double reward) override;

  const ArmLedger& ledger(int arm) const { return ledgers_.at(static_cast<std::size_t>(arm)); }
  double epsilon() const { return epsilon_; }

 private:
  void insert(int arm, double reward);

  int arms_;
  double epsilon_;
  std::vector<ArmLedger> ledgers_;
  std::vector<LaplaceSource> noise_;
  // Kernel inputs mirrored from the ledgers.
  std::vector<double> center_;
  std::vector<double> count_;
  std::vector<double> weight_;
  std::int64_t next_round_ = 1;
};

// ---------------------------------------------------------------------------
// Hybrid-UCB

struct HybridLedger {
  std::int64_t pulls = 0;
  // Index r of the live array/tree pair (capacity 2^r).
  int live_index = 0;
  // Sum of the cached noisy sums of the completed arrays.
  double completed_noisy_total = 0.0;
  std::int64_t completed_count = 0;
  ArraySum live_array{1, 0.0};
  BinaryTreeCounter live_tree{1, 0.0};
  double private_mean = 0.0;
};

// mu~_O + sqrt(3 log2 t / O) + 6 sqrt(8) log2 t floor(log2(O + 1)) / (O eps).
// Throws std::logic_error when O == 0.
double hybrid_index(const HybridLedger& ledger, std::int64_t t, double epsilon);

class HybridUcb final : public Policy {
 public:
  explicit HybridUcb(const PolicyConfig& config);

  std::string_view name() const override { return "hybrid-ucb"; }
  Decision decide(std::int64_t t) override;
  void observe(std::int64_t t, int arm, double reward) override;

  const HybridLedger& ledger(int arm) const { return ledgers_.at(static_cast<std::size_t>(arm)); }

 private:
  void open_live(HybridLedger& ledger, int index);

  int arms_;
  double epsilon_;
  std::vector<HybridLedger> ledgers_;
  // Arrays and trees of one arm share the arm's noise stream.
  std::vector<LaplaceSource> noise_;
  std::vector<double> center_;
  std::vector<double> count_;
  std::vector<double> weight_;
  std::int64_t next_round_ = 1;
};

// ---------------------------------------------------------------------------
// Follow-the-Noisy-Leader and Report Noisy Max

// argmax_j (sums[j] + Lap(1/eps)), one draw per action from noise[j]; ties go
// to the lowest index.
int report_noisy_max(std::span<const double> sums, double epsilon,
                     std::span<LaplaceSource> noise);

struct FtnlState {
  int epoch = 0;
  int action = 0;
  std::vector<double> epoch_sums;
  std::int64_t rounds_into_epoch = 0;
};

class Ftnl final : public Policy {
 public:
  explicit Ftnl(const PolicyConfig& config);

  std::string_view name() const override { return "ftnl"; }
  FeedbackKind feedback_kind() const override { return FeedbackKind::kFull; }
  Decision decide(std::int64_t t) override;
  void observe_full(std::int64_t t, std::span<const double> rewards) override;

  const FtnlState& state() const { return state_; }
  // Sums handed to the most recent RNM call and how many rounds they covered.
  const std::vector<double>& last_selection_sums() const { return last_sums_; }
  std::int64_t last_selection_rounds() const { return last_rounds_; }

 private:
  double epsilon_;
  FtnlState state_;
  std::vector<LaplaceSource> noise_;
  std::vector<double> last_sums_;
  std::int64_t last_rounds_ = 0;
  std::int64_t next_round_ = 1;
};

// ---------------------------------------------------------------------------
// Baselines

// Non-private UCB1 with index mean + sqrt(3 ln t / O), the epsilon -> infinity
// shape of the Anytime-Lazy-UCB index.
class Ucb1 final : public Policy {
 public:
  explicit Ucb1(const PolicyConfig& config);

  std::string_view name() const override { return "ucb1"; }
  Decision decide(std::int64_t t) override;
  void observe(std::int64_t t, int arm, double reward) override;

 private:
  int arms_;
  std::vector<double> sums_;
  std::vector<double> center_;
  std::vector<double> count_;
  std::vector<double> weight_;
  std::int64_t next_round_ = 1;
};

// DP successive elimination. Surviving arms are pulled round-robin, each
// R_e times per epoch on fresh samples; at the end of the epoch each arm's
// mean is released with Lap(1/eps) noise on its epoch sum.
class DpSuccessiveElimination final : public Policy {
 public:
  explicit DpSuccessiveElimination(const PolicyConfig& config);

  std::string_view name() const override { return "dp-se"; }
  Decision decide(std::int64_t t) override;
  void observe(std::int64_t t, int arm, double reward) override;

  const std::vector<int>& active_arms() const { return active_; }
  int epoch() const { return epoch_; }
  std::int64_t pulls_per_arm() const { return pulls_per_arm_; }

  // R_e for `surviving` arms in epoch `epoch` (1-based).
  static std::int64_t epoch_length(const DpseConstants& c, int surviving,
                                   int epoch, double epsilon, double beta);

 private:
  void start_epoch();
  void finish_epoch();

  double epsilon_;
  double beta_;
  DpseConstants constants_;
  std::vector<int> active_;
  std::vector<double> epoch_sums_;
  std::vector<LaplaceSource> noise_;
  int epoch_ = 0;
  std::int64_t pulls_per_arm_ = 0;
  std::int64_t position_ = 0;
  std::int64_t next_round_ = 1;
};

}  // namespace dpbandits

#endif  // DPBANDITS_ALGORITHMS_HPP_
