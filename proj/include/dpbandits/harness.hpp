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

#ifndef DPBANDITS_HARNESS_HPP_
#define DPBANDITS_HARNESS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dpbandits/algorithms.hpp"
#include "dpbandits/env.hpp"
#include "dpbandits/noise.hpp"

namespace dpbandits {

// 1, 2, 4, ... up to T, with T appended when it is not a power of two.
std::vector<std::int64_t> pow2_checkpoints(std::int64_t horizon);
// Every round 1..T.
std::vector<std::int64_t> all_checkpoints(std::int64_t horizon);

struct ExperimentConfig {
  EnvironmentSpec environment{{0.75, 0.70}, 1};
  std::vector<std::string> algorithms;
  std::vector<double> epsilons;
  int repetitions = 1;
  std::uint64_t master_seed = 0;
  // Strictly increasing, last element == horizon. Empty means pow2.
  std::vector<std::int64_t> checkpoints;
  NoiseMode noise = NoiseMode::kLive;
  DpseConstants dpse;
  // When set, policies are not told the horizon; horizon-dependent
  // policies are then rejected with ConfigError.
  bool anytime_only = false;

  std::int64_t horizon() const { return environment.horizon(); }
  // The effective checkpoint schedule.
  std::vector<std::int64_t> schedule() const;
  // Throws ConfigError describing the first violated invariant.
  void validate() const;
};

// One (algorithm, epsilon, repetition) cell of the experiment matrix.
struct CellId {
  std::size_t algorithm = 0;
  std::size_t epsilon = 0;
  int repetition = 0;
};

struct Checkpoint {
  std::int64_t t;
  double cum_regret;

  bool operator==(const Checkpoint&) const = default;
};

struct RegretTrace {
  std::int64_t run_id = 0;
  std::string algorithm;
  double epsilon = 0.0;
  std::vector<Checkpoint> points;

  bool operator==(const RegretTrace&) const = default;
};

// Position of a cell in the row-major (algorithm, epsilon, repetition) order.
std::int64_t cell_run_id(const ExperimentConfig& config, const CellId& cell);
// hash(master seed, algorithm name, epsilon index, repetition).
std::uint64_t cell_seed(const ExperimentConfig& config, const CellId& cell);

// Simulates one cell: draw the round's reward vector, ask the policy for a
// decision, accumulate the pseudo-regret of that decision, and hand the
// policy its feedback (only the played entry for bandit policies).
RegretTrace run_single(const ExperimentConfig& config, const CellId& cell);

struct SummaryRow {
  std::string algorithm;
  double epsilon = 0.0;
  std::int64_t t = 0;
  double mean = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double max = 0.0;
  int runs = 0;

  bool operator==(const SummaryRow&) const = default;
};

struct Summary {
  // Grouped by (algorithm, epsilon) in first-seen order, then by t.
  std::vector<SummaryRow> rows;

  bool operator==(const Summary&) const = default;

  std::vector<std::string> algorithms() const;
  std::vector<double> epsilons() const;
  // Rows of one (algorithm, epsilon) series, t-sorted.
  std::vector<SummaryRow> series(const std::string& algorithm, double epsilon) const;
  // Row at the last checkpoint of the series; nullopt if absent.
  std::optional<SummaryRow> final_row(const std::string& algorithm,
                                      double epsilon) const;
};

// Per-checkpoint mean / sample sd / min / max across runs, grouped by
// (algorithm, epsilon). Throws InvalidParameter on empty input or when
// traces of a group do not share one checkpoint schedule.
Summary aggregate(std::span<const RegretTrace> traces);

struct MatrixResult {
  Summary summary;
  // Ordered by run id regardless of scheduling.
  std::vector<RegretTrace> traces;
};

// Runs every cell on a pool of `workers` threads (>= 1). Output does not
// depend on the worker count. A failing cell is rethrown as ConfigError or
// std::runtime_error naming the cell.
MatrixResult run_matrix(const ExperimentConfig& config, int workers);

}  // namespace dpbandits

#endif  // DPBANDITS_HARNESS_HPP_
