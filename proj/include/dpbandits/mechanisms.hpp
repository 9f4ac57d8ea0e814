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

#ifndef DPBANDITS_MECHANISMS_HPP_
#define DPBANDITS_MECHANISMS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dpbandits/noise.hpp"

namespace dpbandits {

// Compressed fixed-capacity array of observations: only the count and the
// running sum are kept. When the array fills, its sum is released once with
// Laplace noise and cached; it is never re-sampled.
class ArraySum {
 public:
  // noise_scale == 0 disables noise (non-private limit).
  ArraySum(std::int64_t capacity, double noise_scale);

  // Throws std::logic_error if the array is already full.
  void insert(double x, LaplaceSource& noise);

  std::int64_t capacity() const { return capacity_; }
  std::int64_t count() const { return count_; }
  double true_sum() const { return sum_; }
  double noise_scale() const { return noise_scale_; }
  bool full() const { return count_ == capacity_; }
  const std::optional<double>& noisy_sum() const { return noisy_sum_; }

 private:
  std::int64_t capacity_;
  std::int64_t count_ = 0;
  double sum_ = 0.0;
  double noise_scale_;
  std::optional<double> noisy_sum_;
};

// Streaming binary (tree-based aggregation) mechanism over a power-of-two
// number of leaves. Only the p-sums on the insertion frontier are stored:
// level i holds the dyadic block of 2^i leaves that ends at the most recent
// insert whose count has bit i set. Each p-sum gets its own Laplace draw when
// it is completed.
class BinaryTreeCounter {
 public:
  // Per-node scale used by the hybrid mechanism: log2(capacity) / eps_share.
  static double node_scale_for(std::int64_t capacity, double epsilon_share);

  BinaryTreeCounter(std::int64_t capacity, double node_noise_scale);

  // Throws std::logic_error if the tree is full.
  void insert(double x, LaplaceSource& noise);

  // Sum over the covering p-sums of (true partial sum + cached node noise).
  double noisy_sum() const;
  double true_sum() const;

  // Number of p-sums combined by noisy_sum(): popcount(count()).
  int covering_count() const;
  // Leaf ranges [first, last] (1-based) of the covering p-sums, left to right.
  std::vector<std::pair<std::int64_t, std::int64_t>> covering_intervals() const;

  std::int64_t capacity() const { return capacity_; }
  std::int64_t count() const { return count_; }
  double node_noise_scale() const { return node_scale_; }
  bool full() const { return count_ == capacity_; }

 private:
  std::int64_t capacity_;
  std::int64_t count_ = 0;
  double node_scale_;
  std::vector<double> psum_;   // true p-sum per level
  std::vector<double> noise_;  // cached noise per level
};

// Noisy total of a hybrid mechanism: sum of the cached noisy sums of the
// completed arrays plus the live tree's noisy sum. Throws std::logic_error
// if any array in `completed` is not full.
double hybrid_noisy_total(std::span<const ArraySum> completed,
                          const BinaryTreeCounter& live);

}  // namespace dpbandits

#endif  // DPBANDITS_MECHANISMS_HPP_
