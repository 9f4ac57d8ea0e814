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

// AVX2 variants of the kernels in kernels.cpp. This translation unit is the
// only one compiled with -mavx2; it is reached through runtime dispatch.

#include <immintrin.h>

#include <cmath>
#include <stdexcept>

#include "dpbandits/kernels.hpp"

namespace dpbandits::kernels {
namespace {

constexpr std::size_t kLanes = 4;

inline __m256d index_block(const IndexInputs& in, std::size_t j,
                           __m256d explore, __m256d privacy, __m256d one) {
  const __m256d inv = _mm256_div_pd(one, _mm256_loadu_pd(&in.count[j]));
  const __m256d bonus = _mm256_sqrt_pd(_mm256_mul_pd(explore, inv));
  const __m256d priv = _mm256_mul_pd(
      _mm256_mul_pd(privacy, _mm256_loadu_pd(&in.weight[j])), inv);
  return _mm256_add_pd(_mm256_add_pd(_mm256_loadu_pd(&in.center[j]), bonus),
                       priv);
}

inline double index_one(const IndexInputs& in, std::size_t j) {
  const double inv = 1.0 / in.count[j];
  return in.center[j] + std::sqrt(in.explore * inv) +
         in.privacy * in.weight[j] * inv;
}

void check(const IndexInputs& in) {
  if (in.center.empty() || in.count.size() != in.center.size() ||
      in.weight.size() != in.center.size()) {
    throw std::invalid_argument("index kernel: mismatched or empty inputs");
  }
}

}  // namespace

void compute_indices_avx2(const IndexInputs& in, std::span<double> out) {
  check(in);
  const std::size_t k = in.center.size();
  const __m256d explore = _mm256_set1_pd(in.explore);
  const __m256d privacy = _mm256_set1_pd(in.privacy);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t j = 0;
  for (; j + kLanes <= k; j += kLanes) {
    _mm256_storeu_pd(&out[j], index_block(in, j, explore, privacy, one));
  }
  for (; j < k; ++j) out[j] = index_one(in, j);
}

std::size_t argmax_index_avx2(const IndexInputs& in) {
  check(in);
  const std::size_t k = in.center.size();
  const __m256d explore = _mm256_set1_pd(in.explore);
  const __m256d privacy = _mm256_set1_pd(in.privacy);
  const __m256d one = _mm256_set1_pd(1.0);

  std::size_t best = 0;
  double best_value = 0.0;
  std::size_t j = 0;
  if (k >= kLanes) {
    // Per-lane running maximum; a lane only moves on a strict improvement,
    // so it keeps the lowest arm among its own ties.
    __m256d lane_best = index_block(in, 0, explore, privacy, one);
    __m256d lane_arm = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
    __m256d arm = lane_arm;
    const __m256d step = _mm256_set1_pd(static_cast<double>(kLanes));
    for (j = kLanes; j + kLanes <= k; j += kLanes) {
      arm = _mm256_add_pd(arm, step);
      const __m256d v = index_block(in, j, explore, privacy, one);
      const __m256d better = _mm256_cmp_pd(v, lane_best, _CMP_GT_OQ);
      lane_best = _mm256_blendv_pd(lane_best, v, better);
      lane_arm = _mm256_blendv_pd(lane_arm, arm, better);
    }
    alignas(32) double values[kLanes];
    alignas(32) double arms[kLanes];
    _mm256_store_pd(values, lane_best);
    _mm256_store_pd(arms, lane_arm);
    best = static_cast<std::size_t>(arms[0]);
    best_value = values[0];
    for (std::size_t lane = 1; lane < kLanes; ++lane) {
      const auto a = static_cast<std::size_t>(arms[lane]);
      if (values[lane] > best_value || (values[lane] == best_value && a < best)) {
        best = a;
        best_value = values[lane];
      }
    }
  } else {
    best_value = index_one(in, 0);
    j = 1;
  }
  for (; j < k; ++j) {
    const double v = index_one(in, j);
    if (v > best_value) {
      best = j;
      best_value = v;
    }
  }
  return best;
}

void column_stats_avx2(std::span<const double> matrix, std::size_t rows,
                       std::size_t cols, const ColumnStats& out) {
  if (rows == 0 || matrix.size() != rows * cols) {
    throw std::invalid_argument("column_stats: bad matrix shape");
  }
  const __m256d n = _mm256_set1_pd(static_cast<double>(rows));
  const __m256d n1 = _mm256_set1_pd(static_cast<double>(rows > 1 ? rows - 1 : 1));
  std::size_t c = 0;
  for (; c + kLanes <= cols; c += kLanes) {
    __m256d sum = _mm256_setzero_pd();
    __m256d lo = _mm256_loadu_pd(&matrix[c]);
    __m256d hi = lo;
    for (std::size_t r = 0; r < rows; ++r) {
      const __m256d x = _mm256_loadu_pd(&matrix[r * cols + c]);
      sum = _mm256_add_pd(sum, x);
      lo = _mm256_blendv_pd(lo, x, _mm256_cmp_pd(x, lo, _CMP_LT_OQ));
      hi = _mm256_blendv_pd(hi, x, _mm256_cmp_pd(x, hi, _CMP_GT_OQ));
    }
    const __m256d mean = _mm256_div_pd(sum, n);
    __m256d ss = _mm256_setzero_pd();
    for (std::size_t r = 0; r < rows; ++r) {
      const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(&matrix[r * cols + c]), mean);
      ss = _mm256_add_pd(ss, _mm256_mul_pd(d, d));
    }
    _mm256_storeu_pd(&out.mean[c], mean);
    _mm256_storeu_pd(&out.sd[c], rows > 1
                                     ? _mm256_sqrt_pd(_mm256_div_pd(ss, n1))
                                     : _mm256_setzero_pd());
    _mm256_storeu_pd(&out.min[c], lo);
    _mm256_storeu_pd(&out.max[c], hi);
  }
  // Tail columns: same operations as the scalar reference.
  for (; c < cols; ++c) {
    double sum = 0.0;
    double lo = matrix[c];
    double hi = matrix[c];
    for (std::size_t r = 0; r < rows; ++r) {
      const double x = matrix[r * cols + c];
      sum += x;
      lo = x < lo ? x : lo;
      hi = x > hi ? x : hi;
    }
    const double mean = sum / static_cast<double>(rows);
    double ss = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      const double d = matrix[r * cols + c] - mean;
      ss += d * d;
    }
    out.mean[c] = mean;
    out.sd[c] = rows > 1 ? std::sqrt(ss / static_cast<double>(rows - 1)) : 0.0;
    out.min[c] = lo;
    out.max[c] = hi;
  }
}

}  // namespace dpbandits::kernels
