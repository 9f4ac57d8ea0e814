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

#include "dpbandits/mechanisms.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dpbandits/errors.hpp"

namespace dpbandits {
namespace {

void check_scale(double scale, const char* what) {
  if (!(scale >= 0.0) || !std::isfinite(scale)) {
    throw InvalidParameter(std::string(what) +
                           ": noise scale must be finite and >= 0");
  }
}

void check_reward(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw InvalidParameter(std::string(what) + ": value must lie in [0, 1]");
  }
}

}  // namespace

ArraySum::ArraySum(std::int64_t capacity, double noise_scale)
    : capacity_(capacity), noise_scale_(noise_scale) {
  if (capacity < 1) throw InvalidParameter("ArraySum: capacity must be >= 1");
  check_scale(noise_scale, "ArraySum");
}

void ArraySum::insert(double x, LaplaceSource& noise) {
  if (full()) throw std::logic_error("ArraySum: insert into a full array");
  check_reward(x, "ArraySum");
  ++count_;
  sum_ += x;
  if (full()) noisy_sum_ = sum_ + noise.draw(noise_scale_);
}

double BinaryTreeCounter::node_scale_for(std::int64_t capacity,
                                         double epsilon_share) {
  if (capacity < 1 || !std::has_single_bit(static_cast<std::uint64_t>(capacity))) {
    throw InvalidParameter("BinaryTreeCounter: capacity must be a power of two");
  }
  if (!(epsilon_share > 0.0)) {
    throw InvalidParameter("BinaryTreeCounter: epsilon share must be positive");
  }
  const int depth = std::countr_zero(static_cast<std::uint64_t>(capacity));
  return static_cast<double>(depth) / epsilon_share;
}

BinaryTreeCounter::BinaryTreeCounter(std::int64_t capacity,
                                     double node_noise_scale)
    : capacity_(capacity), node_scale_(node_noise_scale) {
  if (capacity < 1 || !std::has_single_bit(static_cast<std::uint64_t>(capacity))) {
    throw InvalidParameter("BinaryTreeCounter: capacity must be a power of two");
  }
  check_scale(node_noise_scale, "BinaryTreeCounter");
  const int levels = std::countr_zero(static_cast<std::uint64_t>(capacity)) + 1;
  psum_.assign(levels, 0.0);
  noise_.assign(levels, 0.0);
}

void BinaryTreeCounter::insert(double x, LaplaceSource& noise) {
  if (full()) throw std::logic_error("BinaryTreeCounter: insert into a full tree");
  check_reward(x, "BinaryTreeCounter");
  ++count_;
  // The new block at level i merges every lower-level block plus x.
  const int level = std::countr_zero(static_cast<std::uint64_t>(count_));
  double block = x;
  for (int j = 0; j < level; ++j) {
    block += psum_[j];
    psum_[j] = 0.0;
    noise_[j] = 0.0;
  }
  psum_[level] = block;
  noise_[level] = noise.draw(node_scale_);
}

double BinaryTreeCounter::noisy_sum() const {
  double total = 0.0;
  const auto n = static_cast<std::uint64_t>(count_);
  for (int level = static_cast<int>(psum_.size()) - 1; level >= 0; --level) {
    if (n >> level & 1U) total += psum_[level] + noise_[level];
  }
  return total;
}

double BinaryTreeCounter::true_sum() const {
  double total = 0.0;
  const auto n = static_cast<std::uint64_t>(count_);
  for (int level = static_cast<int>(psum_.size()) - 1; level >= 0; --level) {
    if (n >> level & 1U) total += psum_[level];
  }
  return total;
}

int BinaryTreeCounter::covering_count() const {
  return std::popcount(static_cast<std::uint64_t>(count_));
}

std::vector<std::pair<std::int64_t, std::int64_t>>
BinaryTreeCounter::covering_intervals() const {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  std::int64_t start = 1;
  const auto n = static_cast<std::uint64_t>(count_);
  for (int level = static_cast<int>(psum_.size()) - 1; level >= 0; --level) {
    if (n >> level & 1U) {
      const std::int64_t len = std::int64_t{1} << level;
      out.emplace_back(start, start + len - 1);
      start += len;
    }
  }
  return out;
}

double hybrid_noisy_total(std::span<const ArraySum> completed,
                          const BinaryTreeCounter& live) {
  double total = 0.0;
  for (const ArraySum& a : completed) {
    if (!a.noisy_sum()) {
      throw std::logic_error("hybrid_noisy_total: completed array is not full");
    }
    total += *a.noisy_sum();
  }
  return total + live.noisy_sum();
}

}  // namespace dpbandits
