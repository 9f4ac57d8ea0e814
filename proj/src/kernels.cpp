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

#include "dpbandits/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace dpbandits::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(DPBANDITS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa initial_isa() {
  const char* forced = std::getenv("DPBANDITS_ISA");
  if (forced != nullptr && std::strcmp(forced, "scalar") == 0) {
    return Isa::kScalar;
  }
  return detected_isa();
}

Isa& active() {
  static Isa isa = initial_isa();
  return isa;
}

void check_index_inputs(const IndexInputs& in) {
  if (in.center.empty() || in.count.size() != in.center.size() ||
      in.weight.size() != in.center.size()) {
    throw std::invalid_argument("index kernel: mismatched or empty inputs");
  }
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

Isa detected_isa() { return cpu_has_avx2() ? Isa::kAvx2 : Isa::kScalar; }

Isa active_isa() { return active(); }

void set_active_isa(Isa isa) {
  active() = (isa == Isa::kAvx2 && !cpu_has_avx2()) ? Isa::kScalar : isa;
}

void compute_indices_scalar(const IndexInputs& in, std::span<double> out) {
  check_index_inputs(in);
  for (std::size_t j = 0; j < in.center.size(); ++j) {
    const double inv = 1.0 / in.count[j];
    out[j] = in.center[j] + std::sqrt(in.explore * inv) +
             in.privacy * in.weight[j] * inv;
  }
}

std::size_t argmax_index_scalar(const IndexInputs& in) {
  check_index_inputs(in);
  std::size_t best = 0;
  double best_value = 0.0;
  for (std::size_t j = 0; j < in.center.size(); ++j) {
    const double inv = 1.0 / in.count[j];
    const double v = in.center[j] + std::sqrt(in.explore * inv) +
                     in.privacy * in.weight[j] * inv;
    if (j == 0 || v > best_value) {
      best = j;
      best_value = v;
    }
  }
  return best;
}

void column_stats_scalar(std::span<const double> matrix, std::size_t rows,
                         std::size_t cols, const ColumnStats& out) {
  if (rows == 0 || matrix.size() != rows * cols) {
    throw std::invalid_argument("column_stats: bad matrix shape");
  }
  for (std::size_t c = 0; c < cols; ++c) {
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

void compute_indices(const IndexInputs& in, std::span<double> out) {
#if defined(DPBANDITS_HAVE_AVX2)
  if (active() == Isa::kAvx2) return compute_indices_avx2(in, out);
#endif
  compute_indices_scalar(in, out);
}

std::size_t argmax_index(const IndexInputs& in) {
#if defined(DPBANDITS_HAVE_AVX2)
  if (active() == Isa::kAvx2) return argmax_index_avx2(in);
#endif
  return argmax_index_scalar(in);
}

void column_stats(std::span<const double> matrix, std::size_t rows,
                  std::size_t cols, const ColumnStats& out) {
#if defined(DPBANDITS_HAVE_AVX2)
  if (active() == Isa::kAvx2) return column_stats_avx2(matrix, rows, cols, out);
#endif
  column_stats_scalar(matrix, rows, cols, out);
}

}  // namespace dpbandits::kernels
