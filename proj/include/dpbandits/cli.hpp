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

#ifndef DPBANDITS_CLI_HPP_
#define DPBANDITS_CLI_HPP_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace dpbandits::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitRuntime = 2;

// Paper-default experiment protocol.
inline constexpr std::int64_t kDefaultHorizon = std::int64_t{2} << 21;
inline constexpr int kDefaultRepetitions = 15;
inline const std::vector<double> kDefaultEpsilons = {0.1, 0.25, 0.5, 1.0, 8.0, 64.0, 128.0};
inline const std::vector<std::string> kReproducedAlgorithms = {
    "anytime-lazy-ucb", "hybrid-ucb", "dp-se"};

// Entry point behind the `dpbandits` executable. `args` excludes the
// program name. Returns 0 on success, 1 on usage/configuration errors and
// 2 on runtime failures.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Parses "0.1,0.25,1" into reals; throws ConfigError on malformed input.
std::vector<double> parse_real_list(const std::string& text);

}  // namespace dpbandits::cli

#endif  // DPBANDITS_CLI_HPP_
