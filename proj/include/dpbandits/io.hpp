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

#ifndef DPBANDITS_IO_HPP_
#define DPBANDITS_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dpbandits/harness.hpp"

namespace dpbandits {

// One line of a trace file.
struct TraceFileRow {
  std::string algorithm;
  double epsilon = 0.0;
  std::int64_t run_id = 0;
  std::int64_t t = 0;
  double cum_regret = 0.0;

  bool operator==(const TraceFileRow&) const = default;
};

inline constexpr std::string_view kTraceHeader = "algorithm,epsilon,run_id,t,cum_regret";
inline constexpr std::string_view kSummaryHeader =
    "algorithm,epsilon,t,mean,sd,min,max,runs";

// Formats a real with 17 significant digits, which round-trips exactly.
std::string format_real(double x);
// RFC-4180 quoting: fields containing a comma, quote, CR or LF are quoted
// and embedded quotes doubled.
std::string csv_field(std::string_view s);
// Splits one CSV record (without its line terminator).
std::vector<std::string> parse_csv_record(std::string_view line);

// Trace CSV, LF line endings. Throws IoError on failure.
void write_traces(std::span<const RegretTrace> traces,
                  const std::filesystem::path& path);
std::vector<TraceFileRow> read_trace_rows(const std::filesystem::path& path);
// Regroups rows into traces keyed by (algorithm, epsilon, run_id).
std::vector<RegretTrace> traces_from_rows(std::span<const TraceFileRow> rows);

void write_summary(const Summary& summary, const std::filesystem::path& path);

// Flat key/value manifest, written as a single JSON object.
using ManifestValue = std::variant<std::string, double, std::int64_t, bool>;
using Manifest = std::map<std::string, ManifestValue>;
void write_manifest(const Manifest& manifest, const std::filesystem::path& path);
Manifest read_manifest(const std::filesystem::path& path);

namespace svg {

// Maps [lo, hi] in data space onto [pixel_lo, pixel_hi].
struct Axis {
  double lo;
  double hi;
  double pixel_lo;
  double pixel_hi;

  double map(double v) const;
};

// Axis covering [data_lo, data_hi] with a 5% margin on both ends. A
// degenerate range is widened to +-5% of its magnitude (or +-1 at zero).
Axis padded_axis(double data_lo, double data_hi, double pixel_lo, double pixel_hi);

std::string escape(std::string_view text);

}  // namespace svg

// Mean cumulative regret against the round number (log2 axis), one
// polyline per algorithm for the given epsilon, with a legend.
std::string render_regret_curves(const Summary& summary, double epsilon,
                                 const std::string& title);
void plot_regret_curves(const Summary& summary, double epsilon,
                        const std::filesystem::path& path,
                        const std::string& title);

// Mean final regret against epsilon (log10 axis), one series per algorithm.
std::string render_final_regret(const Summary& summary, const std::string& title);
void plot_final_regret(const Summary& summary, const std::filesystem::path& path,
                       const std::string& title);

}  // namespace dpbandits

#endif  // DPBANDITS_IO_HPP_
