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

#include "dpbandits/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include "dpbandits/errors.hpp"
#include "dpbandits/kernels.hpp"

namespace dpbandits {
namespace {

// FNV-1a, so that a cell's seed depends on the algorithm's name and not on
// its position in the config.
std::uint64_t hash_name(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string describe(const ExperimentConfig& config, const CellId& cell) {
  return "cell (algorithm=" + config.algorithms[cell.algorithm] +
         ", epsilon=" + std::to_string(config.epsilons[cell.epsilon]) +
         ", repetition=" + std::to_string(cell.repetition) + ")";
}

}  // namespace

std::vector<std::int64_t> pow2_checkpoints(std::int64_t horizon) {
  if (horizon < 1) throw InvalidParameter("horizon must be positive");
  std::vector<std::int64_t> out;
  for (std::int64_t t = 1; t <= horizon; t *= 2) {
    out.push_back(t);
    if (t > horizon / 2) break;
  }
  if (out.back() != horizon) out.push_back(horizon);
  return out;
}

std::vector<std::int64_t> all_checkpoints(std::int64_t horizon) {
  if (horizon < 1) throw InvalidParameter("horizon must be positive");
  std::vector<std::int64_t> out(static_cast<std::size_t>(horizon));
  for (std::int64_t t = 1; t <= horizon; ++t) {
    out[static_cast<std::size_t>(t - 1)] = t;
  }
  return out;
}

std::vector<std::int64_t> ExperimentConfig::schedule() const {
  return checkpoints.empty() ? pow2_checkpoints(horizon()) : checkpoints;
}

void ExperimentConfig::validate() const {
  if (algorithms.empty()) throw ConfigError("no algorithms selected");
  for (const std::string& name : algorithms) {
    canonical_policy_name(name);
    if (anytime_only && policy_needs_horizon(name)) {
      throw ConfigError(name + " needs a known horizon but the experiment is "
                               "configured as anytime-only");
    }
  }
  if (epsilons.empty()) throw ConfigError("no epsilon values given");
  for (double eps : epsilons) {
    if (!(eps > 0.0)) throw ConfigError("epsilon values must be positive");
  }
  if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
  if (horizon() < environment.arms()) {
    throw ConfigError("horizon must be at least the number of arms");
  }
  const std::vector<std::int64_t> sched = schedule();
  for (std::size_t i = 0; i < sched.size(); ++i) {
    if (sched[i] < 1 || (i > 0 && sched[i] <= sched[i - 1])) {
      throw ConfigError("checkpoints must be positive and strictly increasing");
    }
  }
  if (sched.back() != horizon()) {
    throw ConfigError("the last checkpoint must equal the horizon");
  }
}

std::int64_t cell_run_id(const ExperimentConfig& config, const CellId& cell) {
  const auto eps = static_cast<std::int64_t>(config.epsilons.size());
  const auto reps = static_cast<std::int64_t>(config.repetitions);
  return (static_cast<std::int64_t>(cell.algorithm) * eps +
          static_cast<std::int64_t>(cell.epsilon)) *
             reps +
         cell.repetition;
}

std::uint64_t cell_seed(const ExperimentConfig& config, const CellId& cell) {
  std::uint64_t h = mix64(config.master_seed);
  h = mix64(h ^ hash_name(canonical_policy_name(config.algorithms[cell.algorithm])));
  h = mix64(h ^ static_cast<std::uint64_t>(cell.epsilon));
  return mix64(h ^ static_cast<std::uint64_t>(cell.repetition));
}

RegretTrace run_single(const ExperimentConfig& config, const CellId& cell) {
  if (cell.algorithm >= config.algorithms.size() ||
      cell.epsilon >= config.epsilons.size() || cell.repetition < 0 ||
      cell.repetition >= config.repetitions) {
    throw InvalidParameter("run_single: cell outside the config's grid");
  }
  const EnvironmentSpec& spec = config.environment;
  const std::string name = canonical_policy_name(config.algorithms[cell.algorithm]);
  const std::uint64_t seed = cell_seed(config, cell);
  const auto run_index = static_cast<std::uint64_t>(cell.repetition);

  PolicyConfig pc;
  pc.arms = spec.arms();
  pc.epsilon = config.epsilons[cell.epsilon];
  if (!config.anytime_only) pc.horizon = spec.horizon();
  pc.noise = config.noise;
  pc.seed = seed;
  pc.run_index = run_index;
  pc.dpse = config.dpse;
  std::unique_ptr<Policy> policy = make_policy(name, pc);
  const bool full_info = policy->feedback_kind() == FeedbackKind::kFull;

  Environment env(spec, seed, run_index);
  std::vector<double> rewards(static_cast<std::size_t>(spec.arms()));
  std::vector<double> gaps(rewards.size());
  for (int j = 0; j < spec.arms(); ++j) gaps[static_cast<std::size_t>(j)] = spec.gap(j);

  const std::vector<std::int64_t> sched = config.schedule();
  RegretTrace trace;
  trace.run_id = cell_run_id(config, cell);
  trace.algorithm = name;
  trace.epsilon = pc.epsilon;
  trace.points.reserve(sched.size());

  double regret = 0.0;
  std::size_t next_checkpoint = 0;
  const std::int64_t horizon = spec.horizon();
  for (std::int64_t t = 1; t <= horizon; ++t) {
    env.draw(rewards);
    const Decision d = policy->decide(t);
    if (d.kind() == Decision::Kind::kWeights) {
      regret += pseudo_regret_increment(spec, d);
    } else {
      regret += gaps.at(static_cast<std::size_t>(d.chosen_arm()));
    }
    if (full_info) {
      policy->observe_full(t, rewards);
    } else {
      const int arm = d.chosen_arm();
      if (arm < 0) throw std::logic_error("bandit policy returned weights");
      policy->observe(t, arm, rewards[static_cast<std::size_t>(arm)]);
    }
    if (next_checkpoint < sched.size() && sched[next_checkpoint] == t) {
      trace.points.push_back({t, regret});
      ++next_checkpoint;
    }
  }
  return trace;
}

std::vector<std::string> Summary::algorithms() const {
  std::vector<std::string> out;
  for (const SummaryRow& r : rows) {
    if (std::find(out.begin(), out.end(), r.algorithm) == out.end()) {
      out.push_back(r.algorithm);
    }
  }
  return out;
}

std::vector<double> Summary::epsilons() const {
  std::vector<double> out;
  for (const SummaryRow& r : rows) {
    if (std::find(out.begin(), out.end(), r.epsilon) == out.end()) {
      out.push_back(r.epsilon);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SummaryRow> Summary::series(const std::string& algorithm,
                                        double epsilon) const {
  std::vector<SummaryRow> out;
  for (const SummaryRow& r : rows) {
    if (r.algorithm == algorithm && r.epsilon == epsilon) out.push_back(r);
  }
  std::sort(out.begin(), out.end(),
            [](const SummaryRow& a, const SummaryRow& b) { return a.t < b.t; });
  return out;
}

std::optional<SummaryRow> Summary::final_row(const std::string& algorithm,
                                             double epsilon) const {
  std::vector<SummaryRow> s = series(algorithm, epsilon);
  if (s.empty()) return std::nullopt;
  return s.back();
}

Summary aggregate(std::span<const RegretTrace> traces) {
  if (traces.empty()) throw InvalidParameter("aggregate: no traces");
  const std::vector<Checkpoint>& reference = traces.front().points;
  for (const RegretTrace& tr : traces) {
    bool same = tr.points.size() == reference.size();
    for (std::size_t i = 0; same && i < reference.size(); ++i) {
      same = tr.points[i].t == reference[i].t;
    }
    if (!same) {
      throw InvalidParameter("aggregate: traces use different checkpoint schedules");
    }
  }

  struct Group {
    std::string algorithm;
    double epsilon;
    std::vector<const RegretTrace*> members;
  };
  std::vector<Group> groups;
  for (const RegretTrace& tr : traces) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
      return g.algorithm == tr.algorithm && g.epsilon == tr.epsilon;
    });
    if (it == groups.end()) {
      groups.push_back({tr.algorithm, tr.epsilon, {}});
      it = std::prev(groups.end());
    }
    it->members.push_back(&tr);
  }

  const std::size_t cols = reference.size();
  Summary summary;
  std::vector<double> mean(cols), sd(cols), lo(cols), hi(cols);
  for (const Group& g : groups) {
    const std::size_t rows = g.members.size();
    std::vector<double> matrix(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        matrix[r * cols + c] = g.members[r]->points[c].cum_regret;
      }
    }
    if (cols > 0) {
      kernels::column_stats(matrix, rows, cols, {mean, sd, lo, hi});
    }
    for (std::size_t c = 0; c < cols; ++c) {
      summary.rows.push_back({g.algorithm, g.epsilon, reference[c].t, mean[c],
                              sd[c], lo[c], hi[c], static_cast<int>(rows)});
    }
  }
  return summary;
}

MatrixResult run_matrix(const ExperimentConfig& config, int workers) {
  config.validate();
  if (workers < 1) throw InvalidParameter("run_matrix: workers must be >= 1");

  std::vector<CellId> cells;
  for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
    for (std::size_t e = 0; e < config.epsilons.size(); ++e) {
      for (int r = 0; r < config.repetitions; ++r) cells.push_back({a, e, r});
    }
  }

  std::vector<RegretTrace> traces(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
      try {
        traces[i] = run_single(config, cells[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto pool_size =
      static_cast<std::size_t>(std::min<std::size_t>(static_cast<std::size_t>(workers), cells.size()));
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < pool_size; ++w) pool.emplace_back(work);
  work();
  pool.clear();

  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const ConfigError& e) {
      throw ConfigError(describe(config, cells[i]) + ": " + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error(describe(config, cells[i]) + ": " + e.what());
    }
  }

  MatrixResult result;
  result.traces = std::move(traces);
  result.summary = aggregate(result.traces);
  return result;
}

}  // namespace dpbandits
