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

#include "dpbandits/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <tuple>

#include "dpbandits/errors.hpp"
#include "json.hpp"

namespace dpbandits {
namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  return out;
}

void finish_write(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError(path.string(), "write failed");
}

double parse_real(const std::string& s, const std::filesystem::path& path) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw IoError(path.string(), "malformed real '" + s + "'");
  }
  return v;
}

std::int64_t parse_int(const std::string& s, const std::filesystem::path& path) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw IoError(path.string(), "malformed integer '" + s + "'");
  }
  return v;
}

std::string fixed2(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string short_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

// Plot frame shared by both chart types.
constexpr double kWidth = 760.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 560.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 380.0;

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;  // data space
};

std::string render_chart(const std::string& title, const std::string& x_label,
                         const std::string& y_label,
                         const std::vector<Series>& series, bool x_is_pow2,
                         bool markers) {
  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_lo = x_lo;
  double y_hi = -x_lo;
  for (const Series& s : series) {
    for (const auto& [x, y] : s.points) {
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  }
  const svg::Axis xa = svg::padded_axis(x_lo, x_hi, kLeft, kRight);
  const svg::Axis ya = svg::padded_axis(y_lo, y_hi, kBottom, kTop);

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
    << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
    << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" fill=\"white\"/>\n"
    << "<text class=\"title\" x=\"" << fixed2((kLeft + kRight) / 2)
    << "\" y=\"28\" text-anchor=\"middle\" font-size=\"15\">"
    << svg::escape(title) << "</text>\n";

  // Frame.
  o << "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n"
    << "<rect x=\"" << fixed2(kLeft) << "\" y=\"" << fixed2(kTop) << "\" width=\""
    << fixed2(kRight - kLeft) << "\" height=\"" << fixed2(kBottom - kTop)
    << "\"/>\n</g>\n";

  // X ticks at integer exponents.
  o << "<g class=\"x-ticks\">\n";
  for (double k = std::ceil(xa.lo); k <= std::floor(xa.hi); k += 1.0) {
    const double px = xa.map(k);
    o << "<line x1=\"" << fixed2(px) << "\" y1=\"" << fixed2(kBottom) << "\" x2=\""
      << fixed2(px) << "\" y2=\"" << fixed2(kBottom + 5) << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << fixed2(px) << "\" y=\"" << fixed2(kBottom + 20)
      << "\" text-anchor=\"middle\">";
    if (x_is_pow2) {
      o << "2<tspan dy=\"-6\" font-size=\"9\">" << static_cast<long long>(k)
        << "</tspan>";
    } else {
      o << short_number(std::pow(10.0, k));
    }
    o << "</text>\n";
  }
  o << "</g>\n";

  // Five evenly spaced y ticks.
  o << "<g class=\"y-ticks\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = ya.lo + (ya.hi - ya.lo) * i / 4.0;
    const double py = ya.map(v);
    o << "<line x1=\"" << fixed2(kLeft - 5) << "\" y1=\"" << fixed2(py) << "\" x2=\""
      << fixed2(kLeft) << "\" y2=\"" << fixed2(py) << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << fixed2(kLeft - 8) << "\" y=\"" << fixed2(py + 4)
      << "\" text-anchor=\"end\">" << short_number(v) << "</text>\n";
  }
  o << "</g>\n";

  o << "<text x=\"" << fixed2((kLeft + kRight) / 2) << "\" y=\""
    << fixed2(kBottom + 45) << "\" text-anchor=\"middle\">" << svg::escape(x_label)
    << "</text>\n"
    << "<text x=\"20\" y=\"" << fixed2((kTop + kBottom) / 2)
    << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
    << fixed2((kTop + kBottom) / 2) << ")\">" << svg::escape(y_label)
    << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const Series& s = series[i];
    const char* color = kPalette[i % std::size(kPalette)];
    o << "<polyline class=\"series\" fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"2\" points=\"";
    for (std::size_t p = 0; p < s.points.size(); ++p) {
      if (p > 0) o << ' ';
      o << fixed2(xa.map(s.points[p].first)) << ','
        << fixed2(ya.map(s.points[p].second));
    }
    o << "\"/>\n";
    if (markers || s.points.size() == 1) {
      for (const auto& [x, y] : s.points) {
        o << "<circle class=\"marker\" cx=\"" << fixed2(xa.map(x)) << "\" cy=\""
          << fixed2(ya.map(y)) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
      }
    }
  }

  o << "<g class=\"legend\">\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double y = kTop + 10 + 20.0 * static_cast<double>(i);
    const char* color = kPalette[i % std::size(kPalette)];
    o << "<g class=\"legend-entry\"><line x1=\"" << fixed2(kRight + 15)
      << "\" y1=\"" << fixed2(y) << "\" x2=\"" << fixed2(kRight + 40) << "\" y2=\""
      << fixed2(y) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>"
      << "<text x=\"" << fixed2(kRight + 46) << "\" y=\"" << fixed2(y + 4) << "\">"
      << svg::escape(series[i].label) << "</text></g>\n";
  }
  o << "</g>\n</svg>\n";
  return o.str();
}

void write_text(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  out << text;
  finish_write(out, path);
}

}  // namespace

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> parse_csv_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

void write_traces(std::span<const RegretTrace> traces,
                  const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  out << kTraceHeader << '\n';
  for (const RegretTrace& tr : traces) {
    const std::string prefix = csv_field(tr.algorithm) + ',' +
                               format_real(tr.epsilon) + ',' +
                               std::to_string(tr.run_id) + ',';
    for (const Checkpoint& c : tr.points) {
      out << prefix << c.t << ',' << format_real(c.cum_regret) << '\n';
    }
  }
  finish_write(out, path);
}

std::vector<TraceFileRow> read_trace_rows(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw IoError(path.string(), "missing or unexpected trace header");
  }
  std::vector<TraceFileRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = parse_csv_record(line);
    if (f.size() != 5) throw IoError(path.string(), "expected 5 fields: " + line);
    rows.push_back({f[0], parse_real(f[1], path), parse_int(f[2], path),
                    parse_int(f[3], path), parse_real(f[4], path)});
  }
  return rows;
}

std::vector<RegretTrace> traces_from_rows(std::span<const TraceFileRow> rows) {
  std::vector<RegretTrace> out;
  for (const TraceFileRow& row : rows) {
    if (out.empty() || out.back().algorithm != row.algorithm ||
        out.back().epsilon != row.epsilon || out.back().run_id != row.run_id) {
      out.push_back({row.run_id, row.algorithm, row.epsilon, {}});
    }
    out.back().points.push_back({row.t, row.cum_regret});
  }
  return out;
}

void write_summary(const Summary& summary, const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  out << kSummaryHeader << '\n';
  for (const SummaryRow& r : summary.rows) {
    out << csv_field(r.algorithm) << ',' << format_real(r.epsilon) << ',' << r.t
        << ',' << format_real(r.mean) << ',' << format_real(r.sd) << ','
        << format_real(r.min) << ',' << format_real(r.max) << ',' << r.runs
        << '\n';
  }
  finish_write(out, path);
}

void write_manifest(const Manifest& manifest, const std::filesystem::path& path) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const auto& [key, value] : manifest) {
    std::visit([&](const auto& v) { doc[key] = v; }, value);
  }
  write_text(doc.dump(2) + "\n", path);
}

Manifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path.string(), e.what());
  }
  if (!doc.is_object()) throw IoError(path.string(), "manifest is not an object");
  Manifest out;
  for (const auto& [key, value] : doc.items()) {
    if (value.is_string()) {
      out[key] = value.get<std::string>();
    } else if (value.is_boolean()) {
      out[key] = value.get<bool>();
    } else if (value.is_number_integer()) {
      out[key] = value.get<std::int64_t>();
    } else if (value.is_number()) {
      out[key] = value.get<double>();
    } else {
      throw IoError(path.string(), "manifest value for '" + key + "' is not flat");
    }
  }
  return out;
}

namespace svg {

double Axis::map(double v) const {
  return pixel_lo + (v - lo) / (hi - lo) * (pixel_hi - pixel_lo);
}

Axis padded_axis(double data_lo, double data_hi, double pixel_lo, double pixel_hi) {
  double span = data_hi - data_lo;
  if (!(span > 0.0)) {
    const double mag = std::fabs(data_lo);
    const double half = mag > 0.0 ? 0.05 * mag : 1.0;
    return {data_lo - half, data_hi + half, pixel_lo, pixel_hi};
  }
  return {data_lo - 0.05 * span, data_hi + 0.05 * span, pixel_lo, pixel_hi};
}

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace svg

std::string render_regret_curves(const Summary& summary, double epsilon,
                                 const std::string& title) {
  std::vector<Series> series;
  for (const std::string& algorithm : summary.algorithms()) {
    const std::vector<SummaryRow> rows = summary.series(algorithm, epsilon);
    if (rows.empty()) continue;
    Series s{algorithm, {}};
    for (const SummaryRow& r : rows) {
      s.points.emplace_back(std::log2(static_cast<double>(r.t)), r.mean);
    }
    series.push_back(std::move(s));
  }
  if (series.empty()) {
    throw InvalidParameter("plot_regret_curves: no data for epsilon " +
                           format_real(epsilon));
  }
  return render_chart(title, "round t", "mean cumulative pseudo-regret", series,
                      /*x_is_pow2=*/true, /*markers=*/false);
}

void plot_regret_curves(const Summary& summary, double epsilon,
                        const std::filesystem::path& path,
                        const std::string& title) {
  write_text(render_regret_curves(summary, epsilon, title), path);
}

std::string render_final_regret(const Summary& summary, const std::string& title) {
  std::vector<Series> series;
  for (const std::string& algorithm : summary.algorithms()) {
    Series s{algorithm, {}};
    for (double eps : summary.epsilons()) {
      if (const auto row = summary.final_row(algorithm, eps)) {
        s.points.emplace_back(std::log10(eps), row->mean);
      }
    }
    if (!s.points.empty()) series.push_back(std::move(s));
  }
  if (series.empty()) throw InvalidParameter("plot_final_regret: empty summary");
  return render_chart(title, "epsilon", "mean final pseudo-regret", series,
                      /*x_is_pow2=*/false, /*markers=*/true);
}

void plot_final_regret(const Summary& summary, const std::filesystem::path& path,
                       const std::string& title) {
  write_text(render_final_regret(summary, title), path);
}

}  // namespace dpbandits
