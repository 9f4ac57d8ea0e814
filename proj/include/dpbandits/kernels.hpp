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

#ifndef DPBANDITS_KERNELS_HPP_
#define DPBANDITS_KERNELS_HPP_

// Data-parallel inner loops shared by the index policies and the regret
// aggregation. Every kernel has a scalar reference and an AVX2 variant; the
// variants perform the same IEEE operations in the same order per element
// (no FMA contraction), so their results are bit-identical.

#include <cstddef>
#include <span>
#include <string_view>

namespace dpbandits::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa);

// Best ISA supported by both this build and the running CPU.
Isa detected_isa();
// ISA used by the dispatching entry points. Defaults to detected_isa(),
// or kScalar when the environment variable DPBANDITS_ISA=scalar is set.
Isa active_isa();
// Forces the dispatching entry points onto `isa` (clamped to what the CPU
// supports). Not thread safe; meant for tests and benchmarks.
void set_active_isa(Isa isa);

// Upper-confidence index of every arm:
//   index[j] = center[j] + sqrt(explore / count[j]) + privacy * weight[j] / count[j]
// All spans have the same length K >= 1; count[j] > 0.
struct IndexInputs {
  std::span<const double> center;
  std::span<const double> count;
  std::span<const double> weight;
  double explore;
  double privacy;
};

void compute_indices_scalar(const IndexInputs& in, std::span<double> out);
// Argmax of the index; ties go to the lowest arm.
std::size_t argmax_index_scalar(const IndexInputs& in);

// Column statistics over a row-major rows x cols matrix: per column the mean,
// the sample standard deviation (divisor rows - 1, 0 when rows == 1), the
// minimum and the maximum. rows >= 1.
struct ColumnStats {
  std::span<double> mean;
  std::span<double> sd;
  std::span<double> min;
  std::span<double> max;
};

void column_stats_scalar(std::span<const double> matrix, std::size_t rows,
                         std::size_t cols, const ColumnStats& out);

#if defined(DPBANDITS_HAVE_AVX2)
void compute_indices_avx2(const IndexInputs& in, std::span<double> out);
std::size_t argmax_index_avx2(const IndexInputs& in);
void column_stats_avx2(std::span<const double> matrix, std::size_t rows,
                       std::size_t cols, const ColumnStats& out);
#endif

// Dispatching entry points.
void compute_indices(const IndexInputs& in, std::span<double> out);
std::size_t argmax_index(const IndexInputs& in);
void column_stats(std::span<const double> matrix, std::size_t rows,
                  std::size_t cols, const ColumnStats& out);

}  // namespace dpbandits::kernels

#endif  // DPBANDITS_KERNELS_HPP_
