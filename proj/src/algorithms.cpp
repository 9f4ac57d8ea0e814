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

#include "dpbandits/algorithms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iostream>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "dpbandits/errors.hpp"
#include "dpbandits/kernels.hpp"

namespace dpbandits {
namespace {

// 6 * sqrt(8), the privacy-bonus constant of the hybrid index.
const double kHybridPrivacyConstant = 6.0 * std::sqrt(8.0);

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0)) {
    throw InvalidParameter("epsilon must be positive (or +inf)");
  }
}

void check_arms(int arms) {
  if (arms < 1) throw InvalidParameter("policy needs at least one arm");
}

std::vector<LaplaceSource> noise_streams(const PolicyConfig& config) {
  std::vector<LaplaceSource> out;
  out.reserve(static_cast<std::size_t>(config.arms));
  for (int j = 0; j < config.arms; ++j) {
    out.emplace_back(
        RngStream(config.seed,
                  derive_stream_id(config.run_index, static_cast<std::uint64_t>(j),
                                   StreamPurpose::kNoise)),
        config.noise);
  }
  return out;
}

// Scale b = sensitivity / budget; zero in the non-private limit.
double laplace_scale(double budget) {
  return std::isinf(budget) ? 0.0 : 1.0 / budget;
}

void expect_round(std::int64_t t, std::int64_t expected) {
  if (t != expected) {
    throw std::logic_error("policy driven out of order: expected round " +
                           std::to_string(expected) + ", got " +
                           std::to_string(t));
  }
}

double floor_log2(std::int64_t x) {
  return static_cast<double>(std::bit_width(static_cast<std::uint64_t>(x)) - 1);
}

}  // namespace

Decision Decision::weights(std::vector<double> w) {
  double total = 0.0;
  for (double x : w) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw InvalidParameter("decision weights must be nonnegative");
    }
    total += x;
  }
  if (w.empty() || std::fabs(total - 1.0) > 1e-9) {
    throw InvalidParameter("decision weights must sum to 1");
  }
  return Decision(Kind::kWeights, -1, std::move(w));
}

std::vector<double> Decision::weight_vector(int arms) const {
  if (kind_ == Kind::kWeights) {
    if (static_cast<int>(weights_.size()) != arms) {
      throw InvalidParameter("decision weight vector has the wrong length");
    }
    return weights_;
  }
  if (arm_ < 0 || arm_ >= arms) throw InvalidParameter("decision arm out of range");
  std::vector<double> w(static_cast<std::size_t>(arms), 0.0);
  w[static_cast<std::size_t>(arm_)] = 1.0;
  return w;
}

double pseudo_regret_increment(const EnvironmentSpec& spec, const Decision& d) {
  if (d.kind() == Decision::Kind::kWeights) {
    return pseudo_regret_increment(spec, std::span<const double>(d.weight_vector(spec.arms())));
  }
  return pseudo_regret_increment(spec, d.chosen_arm());
}

void Policy::observe(std::int64_t, int, double) {
  throw std::logic_error(std::string(name()) + " does not take bandit feedback");
}

void Policy::observe_full(std::int64_t, std::span<const double>) {
  throw std::logic_error(std::string(name()) +
                         " does not take full-information feedback");
}

double clamp_reward(double x) {
  if (x >= 0.0 && x <= 1.0) return x;
  static std::once_flag warned;
  std::call_once(warned, [x] {
    std::clog << "warning: reward " << x
              << " outside [0, 1] clamped; privacy calibration assumes "
                 "sensitivity 1\n";
  });
  if (std::isnan(x)) return 0.0;
  return std::clamp(x, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Anytime-Lazy-UCB

double alucb_index(const ArmLedger& ledger, std::int64_t t, double epsilon) {
  if (!ledger.initialized() || ledger.last_full_size < 1) {
    throw std::logic_error("alucb_index: ledger has no full array yet");
  }
  if (t < 1) throw InvalidParameter("alucb_index: round must be >= 1");
  return alucb_index_from_log(ledger, std::log(static_cast<double>(t)), epsilon);
}

double alucb_index_from_log(const ArmLedger& ledger, double log_t,
                            double epsilon) {
  if (!ledger.initialized() || ledger.last_full_size < 1) {
    throw std::logic_error("alucb_index: ledger has no full array yet");
  }
  const double lambda = static_cast<double>(ledger.last_full_size);
  return ledger.private_mean + std::sqrt(3.0 * log_t / lambda) +
         3.0 * log_t / (epsilon * lambda);
}

AnytimeLazyUcb::AnytimeLazyUcb(const PolicyConfig& config)
    : arms_(config.arms),
      epsilon_(config.epsilon),
      ledgers_(static_cast<std::size_t>(config.arms)),
      center_(static_cast<std::size_t>(config.arms), 0.0),
      count_(static_cast<std::size_t>(config.arms), 1.0),
      weight_(static_cast<std::size_t>(config.arms), 1.0) {
  check_arms(config.arms);
  check_epsilon(config.epsilon);
  noise_ = noise_streams(config);
}

Decision AnytimeLazyUcb::decide(std::int64_t t) {
  expect_round(t, next_round_);
  if (t <= arms_) return Decision::arm(static_cast<int>(t - 1));
  const double log_t = std::log(static_cast<double>(t));
  const kernels::IndexInputs in{center_, count_, weight_, 3.0 * log_t,
                                3.0 * log_t / epsilon_};
  return Decision::arm(static_cast<int>(kernels::argmax_index(in)));
}

void AnytimeLazyUcb::observe(std::int64_t t, int arm, double reward) {
  expect_round(t, next_round_);
  if (arm < 0 || arm >= arms_) throw InvalidParameter("arm out of range");
  ++next_round_;
  insert(arm, clamp_reward(reward));
}

void AnytimeLazyUcb::insert(int arm, double reward) {
  const auto j = static_cast<std::size_t>(arm);
  ArmLedger& l = ledgers_[j];
  const double scale = laplace_scale(epsilon_);
  if (!l.initialized()) {
    // Array 0 holds the initialization pull on its own.
    l.active = ArraySum(1, scale);
    l.arrays_created = 1;
  }
  ++l.pulls;
  l.active.insert(reward, noise_[j]);
  if (l.active.full()) {
    l.full_index += 1;
    l.last_full_size = l.active.capacity();
    l.private_mean = *l.active.noisy_sum() / static_cast<double>(l.last_full_size);
    l.active = ArraySum(l.last_full_size * 2, scale);
    l.arrays_created += 1;
    center_[j] = l.private_mean;
    count_[j] = static_cast<double>(l.last_full_size);
  }
}

// ---------------------------------------------------------------------------
// Hybrid-UCB

double hybrid_index(const HybridLedger& ledger, std::int64_t t, double epsilon) {
  if (ledger.pulls < 1) throw std::logic_error("hybrid_index: arm never pulled");
  if (t < 1) throw InvalidParameter("hybrid_index: round must be >= 1");
  const double log_t = std::log2(static_cast<double>(t));
  const double o = static_cast<double>(ledger.pulls);
  return ledger.private_mean + std::sqrt(3.0 * log_t / o) +
         kHybridPrivacyConstant * log_t * floor_log2(ledger.pulls + 1) /
             (o * epsilon);
}

HybridUcb::HybridUcb(const PolicyConfig& config)
    : arms_(config.arms),
      epsilon_(config.epsilon),
      ledgers_(static_cast<std::size_t>(config.arms)),
      center_(static_cast<std::size_t>(config.arms), 0.0),
      count_(static_cast<std::size_t>(config.arms), 1.0),
      weight_(static_cast<std::size_t>(config.arms), 1.0) {
  check_arms(config.arms);
  check_epsilon(config.epsilon);
  noise_ = noise_streams(config);
}

void HybridUcb::open_live(HybridLedger& ledger, int index) {
  // The array half and the tree half each spend eps / 2.
  const double half = epsilon_ / 2.0;
  const std::int64_t capacity = std::int64_t{1} << index;
  ledger.live_index = index;
  ledger.live_array = ArraySum(capacity, laplace_scale(half));
  ledger.live_tree = BinaryTreeCounter(
      capacity, std::isinf(half) ? 0.0
                                 : BinaryTreeCounter::node_scale_for(capacity, half));
}

Decision HybridUcb::decide(std::int64_t t) {
  expect_round(t, next_round_);
  if (t <= arms_) return Decision::arm(static_cast<int>(t - 1));
  const double log_t = std::log2(static_cast<double>(t));
  const kernels::IndexInputs in{center_, count_, weight_, 3.0 * log_t,
                                kHybridPrivacyConstant * log_t / epsilon_};
  return Decision::arm(static_cast<int>(kernels::argmax_index(in)));
}

void HybridUcb::observe(std::int64_t t, int arm, double reward) {
  expect_round(t, next_round_);
  if (arm < 0 || arm >= arms_) throw InvalidParameter("arm out of range");
  ++next_round_;
  reward = clamp_reward(reward);
  const auto j = static_cast<std::size_t>(arm);
  HybridLedger& l = ledgers_[j];
  LaplaceSource& noise = noise_[j];

  if (l.pulls == 0) {
    // Array 0: a single observation released through the array mechanism.
    ArraySum first(1, laplace_scale(epsilon_ / 2.0));
    first.insert(reward, noise);
    l.pulls = 1;
    l.completed_noisy_total = *first.noisy_sum();
    l.completed_count = 1;
    l.private_mean = l.completed_noisy_total;
    open_live(l, 1);
  } else {
    ++l.pulls;
    l.live_array.insert(reward, noise);
    l.live_tree.insert(reward, noise);
    l.private_mean = (l.completed_noisy_total + l.live_tree.noisy_sum()) /
                     static_cast<double>(l.pulls);
    if (l.live_array.full()) {
      l.completed_noisy_total += *l.live_array.noisy_sum();
      l.completed_count += l.live_array.capacity();
      open_live(l, l.live_index + 1);
    }
  }
  center_[j] = l.private_mean;
  count_[j] = static_cast<double>(l.pulls);
  weight_[j] = floor_log2(l.pulls + 1);
}

// ---------------------------------------------------------------------------
// FTNL

int report_noisy_max(std::span<const double> sums, double epsilon,
                     std::span<LaplaceSource> noise) {
  check_epsilon(epsilon);
  if (sums.empty() || noise.size() < sums.size()) {
    throw InvalidParameter("report_noisy_max: need one noise source per action");
  }
  const double scale = laplace_scale(epsilon);
  int best = 0;
  double best_value = 0.0;
  for (std::size_t j = 0; j < sums.size(); ++j) {
    const double v = sums[j] + noise[j].draw(scale);
    if (j == 0 || v > best_value) {
      best = static_cast<int>(j);
      best_value = v;
    }
  }
  return best;
}

Ftnl::Ftnl(const PolicyConfig& config) : epsilon_(config.epsilon) {
  check_arms(config.arms);
  check_epsilon(config.epsilon);
  state_.epoch_sums.assign(static_cast<std::size_t>(config.arms), 0.0);
  noise_ = noise_streams(config);
}

Decision Ftnl::decide(std::int64_t t) {
  expect_round(t, next_round_);
  return Decision::point_mass(state_.action);
}

void Ftnl::observe_full(std::int64_t t, std::span<const double> rewards) {
  expect_round(t, next_round_);
  if (rewards.size() != state_.epoch_sums.size()) {
    throw InvalidParameter("ftnl: reward vector has the wrong length");
  }
  ++next_round_;
  for (std::size_t j = 0; j < rewards.size(); ++j) {
    state_.epoch_sums[j] += clamp_reward(rewards[j]);
  }
  ++state_.rounds_into_epoch;
  if (state_.rounds_into_epoch == (std::int64_t{1} << state_.epoch)) {
    last_sums_ = state_.epoch_sums;
    last_rounds_ = state_.rounds_into_epoch;
    state_.action = report_noisy_max(state_.epoch_sums, epsilon_, noise_);
    std::fill(state_.epoch_sums.begin(), state_.epoch_sums.end(), 0.0);
    state_.rounds_into_epoch = 0;
    ++state_.epoch;
  }
}

// ---------------------------------------------------------------------------
// UCB1

Ucb1::Ucb1(const PolicyConfig& config)
    : arms_(config.arms),
      sums_(static_cast<std::size_t>(config.arms), 0.0),
      center_(static_cast<std::size_t>(config.arms), 0.0),
      count_(static_cast<std::size_t>(config.arms), 0.0),
      weight_(static_cast<std::size_t>(config.arms), 0.0) {
  check_arms(config.arms);
}

Decision Ucb1::decide(std::int64_t t) {
  expect_round(t, next_round_);
  if (t <= arms_) return Decision::arm(static_cast<int>(t - 1));
  const kernels::IndexInputs in{center_, count_, weight_,
                                3.0 * std::log(static_cast<double>(t)), 0.0};
  return Decision::arm(static_cast<int>(kernels::argmax_index(in)));
}

void Ucb1::observe(std::int64_t t, int arm, double reward) {
  expect_round(t, next_round_);
  if (arm < 0 || arm >= arms_) throw InvalidParameter("arm out of range");
  ++next_round_;
  const auto j = static_cast<std::size_t>(arm);
  sums_[j] += clamp_reward(reward);
  count_[j] += 1.0;
  center_[j] = sums_[j] / count_[j];
}

// ---------------------------------------------------------------------------
// DP-SE

std::int64_t DpSuccessiveElimination::epoch_length(const DpseConstants& c,
                                                   int surviving, int epoch,
                                                   double epsilon, double beta) {
  const double gap = std::ldexp(1.0, -epoch);
  const double s = static_cast<double>(surviving);
  const double e2 = static_cast<double>(epoch) * static_cast<double>(epoch);
  const double hoeffding =
      c.hoeffding_coef * std::log(c.hoeffding_log_mult * s * e2 / beta) / (gap * gap);
  const double privacy =
      std::isinf(epsilon)
          ? 0.0
          : c.privacy_coef * std::log(c.privacy_log_mult * s * e2 / beta) /
                (epsilon * gap);
  const double r = std::ceil(std::max({hoeffding, privacy, 1.0}));
  constexpr double kCap = 4.0e18;
  return static_cast<std::int64_t>(std::min(r, kCap));
}

DpSuccessiveElimination::DpSuccessiveElimination(const PolicyConfig& config)
    : epsilon_(config.epsilon), constants_(config.dpse) {
  check_arms(config.arms);
  check_epsilon(config.epsilon);
  if (!config.horizon) {
    throw ConfigError("dp-se needs a known horizon T (it is not anytime)");
  }
  if (*config.horizon < 1) throw ConfigError("dp-se: horizon must be positive");
  beta_ = constants_.beta.value_or(1.0 / static_cast<double>(*config.horizon));
  if (!(beta_ > 0.0 && beta_ < 1.0)) {
    throw ConfigError("dp-se: beta must lie in (0, 1)");
  }
  if (!(constants_.hoeffding_coef > 0.0 && constants_.hoeffding_log_mult > 0.0 &&
        constants_.privacy_coef >= 0.0 && constants_.privacy_log_mult > 0.0 &&
        constants_.elimination_fraction > 0.0)) {
    throw ConfigError("dp-se: constants must be positive");
  }
  for (int j = 0; j < config.arms; ++j) active_.push_back(j);
  epoch_sums_.assign(static_cast<std::size_t>(config.arms), 0.0);
  noise_ = noise_streams(config);
  start_epoch();
}

void DpSuccessiveElimination::start_epoch() {
  ++epoch_;
  position_ = 0;
  std::fill(epoch_sums_.begin(), epoch_sums_.end(), 0.0);
  pulls_per_arm_ = active_.size() > 1
                       ? epoch_length(constants_, static_cast<int>(active_.size()),
                                      epoch_, epsilon_, beta_)
                       : 0;
}

void DpSuccessiveElimination::finish_epoch() {
  const double scale = laplace_scale(epsilon_);
  const double r = static_cast<double>(pulls_per_arm_);
  std::vector<double> noisy(active_.size());
  double leader = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < active_.size(); ++i) {
    const auto j = static_cast<std::size_t>(active_[i]);
    noisy[i] = (epoch_sums_[j] + noise_[j].draw(scale)) / r;
    leader = std::max(leader, noisy[i]);
  }
  const double margin = constants_.elimination_fraction * std::ldexp(1.0, -epoch_);
  std::vector<int> survivors;
  for (std::size_t i = 0; i < active_.size(); ++i) {
    if (!(leader - noisy[i] > margin)) survivors.push_back(active_[i]);
  }
  active_ = std::move(survivors);
  start_epoch();
}

Decision DpSuccessiveElimination::decide(std::int64_t t) {
  expect_round(t, next_round_);
  if (active_.size() == 1) return Decision::arm(active_.front());
  const auto slot = static_cast<std::size_t>(
      position_ % static_cast<std::int64_t>(active_.size()));
  return Decision::arm(active_[slot]);
}

void DpSuccessiveElimination::observe(std::int64_t t, int arm, double reward) {
  expect_round(t, next_round_);
  ++next_round_;
  if (active_.size() == 1) return;
  const auto slot = static_cast<std::size_t>(
      position_ % static_cast<std::int64_t>(active_.size()));
  if (arm != active_[slot]) {
    throw std::logic_error("dp-se: feedback for an arm it did not play");
  }
  epoch_sums_[static_cast<std::size_t>(arm)] += clamp_reward(reward);
  ++position_;
  if (position_ == pulls_per_arm_ * static_cast<std::int64_t>(active_.size())) {
    finish_epoch();
  }
}

// ---------------------------------------------------------------------------
// Registry

namespace {

struct PolicyInfo {
  std::string_view canonical;
  std::vector<std::string_view> aliases;
  bool needs_horizon;
  FeedbackKind feedback;
};

const std::vector<PolicyInfo>& registry() {
  static const std::vector<PolicyInfo> kInfo = {
      {"anytime-lazy-ucb", {"alucb", "lazy-ucb"}, false, FeedbackKind::kBandit},
      {"hybrid-ucb", {"hybrid"}, false, FeedbackKind::kBandit},
      {"dp-se", {"dpse"}, true, FeedbackKind::kBandit},
      {"ucb1", {}, false, FeedbackKind::kBandit},
      {"ftnl", {}, false, FeedbackKind::kFull},
  };
  return kInfo;
}

const PolicyInfo& lookup(std::string_view name) {
  for (const PolicyInfo& info : registry()) {
    if (info.canonical == name) return info;
    for (std::string_view alias : info.aliases) {
      if (alias == name) return info;
    }
  }
  throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

}  // namespace

std::string canonical_policy_name(std::string_view name) {
  return std::string(lookup(name).canonical);
}

std::vector<std::string> policy_names() {
  std::vector<std::string> out;
  for (const PolicyInfo& info : registry()) out.emplace_back(info.canonical);
  return out;
}

bool policy_needs_horizon(std::string_view name) {
  return lookup(name).needs_horizon;
}

FeedbackKind policy_feedback_kind(std::string_view name) {
  return lookup(name).feedback;
}

std::unique_ptr<Policy> make_policy(std::string_view name,
                                    const PolicyConfig& config) {
  const std::string_view canonical = lookup(name).canonical;
  if (canonical == "anytime-lazy-ucb") return std::make_unique<AnytimeLazyUcb>(config);
  if (canonical == "hybrid-ucb") return std::make_unique<HybridUcb>(config);
  if (canonical == "dp-se") return std::make_unique<DpSuccessiveElimination>(config);
  if (canonical == "ucb1") return std::make_unique<Ucb1>(config);
  return std::make_unique<Ftnl>(config);
}

}  // namespace dpbandits
