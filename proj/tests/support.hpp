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


// Reference implementations used as test oracles. Everything here is written
// independently of the library: plain loops over full observation histories,
// no shared helpers beyond the public types.

#ifndef DPBANDITS_TESTS_SUPPORT_HPP_
#define DPBANDITS_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "dpbandits/algorithms.hpp"
#include "dpbandits/env.hpp"

namespace dpbandits::testing {

// Kolmogorov survival function with Stephens' small-sample correction.
inline double ks_p_value(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda < 0.2) return 1.0;
  double p = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    p += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(p, 0.0, 1.0);
}

// One-sample KS statistic of `xs` against `cdf`. Sorts xs in place.
inline double ks_statistic(std::vector<double>& xs,
                           const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, f - static_cast<double>(i) / n,
                  static_cast<double>(i + 1) / n - f});
  }
  return d;
}

inline double laplace_cdf(double x, double b) {
  return x < 0 ? 0.5 * std::exp(x / b) : 1.0 - 0.5 * std::exp(-x / b);
}

// Pre-drawn Bernoulli reward vectors, one per round.
using Trace = std::vector<std::vector<double>>;

inline Trace bernoulli_trace(const std::vector<double>& means, int rounds,
                             std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Trace trace(static_cast<std::size_t>(rounds));
  for (auto& row : trace) {
    for (double m : means) row.push_back(u(gen) < m ? 1.0 : 0.0);
  }
  return trace;
}

// Feeds `trace` to a policy and returns the played arm per round.
inline std::vector<int> drive(Policy& policy, const Trace& trace) {
  std::vector<int> arms;
  std::int64_t t = 1;
  for (const auto& row : trace) {
    const Decision d = policy.decide(t);
    const int a = d.chosen_arm();
    arms.push_back(a);
    if (policy.feedback_kind() == FeedbackKind::kFull) {
      policy.observe_full(t, row);
    } else {
      policy.observe(t, a, row[static_cast<std::size_t>(a)]);
    }
    ++t;
  }
  return arms;
}

inline int first_argmax(const std::vector<double>& v) {
  int best = 0;
  for (int j = 1; j < static_cast<int>(v.size()); ++j) {
    if (v[static_cast<std::size_t>(j)] > v[static_cast<std::size_t>(best)]) best = j;
  }
  return best;
}

// Non-private UCB whose mean is the average of the most recent completed
// block of a 1, 2, 4, ... partition of each arm's history.
inline std::vector<int> lazy_forgetful_ucb(const Trace& trace, double epsilon) {
  const int k = static_cast<int>(trace.front().size());
  std::vector<std::vector<double>> hist(static_cast<std::size_t>(k));
  std::vector<int> arms;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const double t = static_cast<double>(i + 1);
    int a;
    if (static_cast<int>(i) < k) {
      a = static_cast<int>(i);
    } else {
      std::vector<double> idx;
      for (const auto& h : hist) {
        // Blocks occupy [2^r - 1, 2^(r+1) - 1); find the last complete one.
        std::size_t r = 0;
        while ((std::size_t{1} << (r + 2)) - 1 <= h.size()) ++r;
        const std::size_t lo = (std::size_t{1} << r) - 1;
        const std::size_t len = std::size_t{1} << r;
        const double mean =
            std::accumulate(h.begin() + static_cast<long>(lo),
                            h.begin() + static_cast<long>(lo + len), 0.0) /
            static_cast<double>(len);
        const double lam = static_cast<double>(len);
        idx.push_back(mean + std::sqrt(3.0 * std::log(t) / lam) +
                      3.0 * std::log(t) / (epsilon * lam));
      }
      a = first_argmax(idx);
    }
    hist[static_cast<std::size_t>(a)].push_back(trace[i][static_cast<std::size_t>(a)]);
    arms.push_back(a);
  }
  return arms;
}

// Non-private UCB over all observations with the hybrid-style bonus.
inline std::vector<int> hybrid_bonus_ucb(const Trace& trace, double epsilon) {
  const int k = static_cast<int>(trace.front().size());
  std::vector<double> sum(static_cast<std::size_t>(k), 0.0);
  std::vector<std::int64_t> n(static_cast<std::size_t>(k), 0);
  std::vector<int> arms;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const double lt = std::log2(static_cast<double>(i + 1));
    int a;
    if (static_cast<int>(i) < k) {
      a = static_cast<int>(i);
    } else {
      std::vector<double> idx;
      for (int j = 0; j < k; ++j) {
        const double o = static_cast<double>(n[static_cast<std::size_t>(j)]);
        const double fl = std::floor(std::log2(o + 1.0));
        idx.push_back(sum[static_cast<std::size_t>(j)] / o + std::sqrt(3.0 * lt / o) +
                      6.0 * std::sqrt(8.0) * lt * fl / (o * epsilon));
      }
      a = first_argmax(idx);
    }
    sum[static_cast<std::size_t>(a)] += trace[i][static_cast<std::size_t>(a)];
    n[static_cast<std::size_t>(a)] += 1;
    arms.push_back(a);
  }
  return arms;
}

// Follow-the-leader on epochs of length 1, 2, 4, ...: each epoch plays the
// leader of the previous epoch alone.
inline std::vector<int> epoch_ftl(const Trace& trace) {
  std::vector<int> arms;
  int current = 0;
  std::size_t start = 0;
  for (std::size_t len = 1; start < trace.size(); len *= 2) {
    const std::size_t end = std::min(trace.size(), start + len);
    for (std::size_t i = start; i < end; ++i) arms.push_back(current);
    if (end - start == len) {
      std::vector<double> sums(trace.front().size(), 0.0);
      for (std::size_t i = start; i < end; ++i) {
        for (std::size_t j = 0; j < sums.size(); ++j) sums[j] += trace[i][j];
      }
      current = first_argmax(sums);
    }
    start = end;
  }
  return arms;
}

// Non-private successive elimination: round-robin over survivors for
// R_e rounds each, then drop arms more than Delta_e / 2 below the leader.
inline std::int64_t se_epoch_length(int surviving, int e, double epsilon,
                                    double beta) {
  const double delta = std::ldexp(1.0, -e);
  const double s = static_cast<double>(surviving);
  const double e2 = static_cast<double>(e) * e;
  const double hoeffding = 32.0 * std::log(8.0 * s * e2 / beta) / (delta * delta);
  const double privacy =
      std::isinf(epsilon) ? 0.0 : 8.0 * std::log(4.0 * s * e2 / beta) / (epsilon * delta);
  return static_cast<std::int64_t>(std::ceil(std::max({hoeffding, privacy, 1.0})));
}

inline std::vector<int> successive_elimination(const Trace& trace, double epsilon,
                                               double beta) {
  const int k = static_cast<int>(trace.front().size());
  std::vector<int> alive(static_cast<std::size_t>(k));
  std::iota(alive.begin(), alive.end(), 0);
  std::vector<int> arms;
  std::size_t i = 0;
  for (int e = 1; i < trace.size(); ++e) {
    if (alive.size() == 1) {
      while (i < trace.size()) { arms.push_back(alive[0]); ++i; }
      break;
    }
    const std::int64_t r = se_epoch_length(static_cast<int>(alive.size()), e, epsilon, beta);
    std::vector<double> sums(alive.size(), 0.0);
    for (std::int64_t rep = 0; rep < r; ++rep) {
      for (std::size_t m = 0; m < alive.size() && i < trace.size(); ++m, ++i) {
        arms.push_back(alive[m]);
        sums[m] += trace[i][static_cast<std::size_t>(alive[m])];
      }
    }
    if (i >= trace.size()) break;
    double leader = -1e300;
    for (double s : sums) leader = std::max(leader, s / static_cast<double>(r));
    std::vector<int> next;
    for (std::size_t m = 0; m < alive.size(); ++m) {
      if (leader - sums[m] / static_cast<double>(r) <= 0.5 * std::ldexp(1.0, -e)) {
        next.push_back(alive[m]);
      }
    }
    alive = next;
  }
  return arms;
}

}  // namespace dpbandits::testing

#endif  // DPBANDITS_TESTS_SUPPORT_HPP_
