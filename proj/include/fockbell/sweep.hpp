// Copyright 2026 The fockbell Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/// Parameter grids of closed-form maximal Bell values and their CSV/JSON
/// encodings.
///
/// Grid CSV layout: optional "# key: value" metadata lines, then a header row
/// "<axis_A>\<axis_B>,b_0,b_1,...", then one row per axis_A value
/// "a_i,cell_i0,cell_i1,...". Numbers carry 12 significant digits. Axis
/// values are rounded to that precision before the cells are evaluated, so a
/// file can be re-evaluated from its own axes and reproduce every cell string.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fockbell/bell_chsh.hpp"
#include "fockbell/json_io.hpp"
#include "fockbell/photon_statistics.hpp"

namespace fockbell {

inline constexpr const char* kToolVersion = "0.1.0";

/// Bad parameters supplied by the caller (as opposed to a failed computation).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline double round_to_printed(double x) { return std::stod(format_number(x)); }

/// Inclusive arithmetic progression lo, lo + step, ... <= hi.
inline std::vector<double> make_axis(double lo, double hi, double step) {
  if (!(step > 0.0)) throw UsageError("axis step must be positive");
  if (!(lo > 0.0)) throw UsageError("axis lower bound must be positive");
  if (!(hi >= lo)) throw UsageError("axis range is empty");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (count > 100000) throw UsageError("axis has too many points");
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = round_to_printed(lo + static_cast<double>(i) * step);
  return v;
}

enum class AxisKind { beta, mean_n };

inline std::string axis_name(AxisKind k, char side) {
  return std::string(k == AxisKind::beta ? "beta_" : "mean_n_") + side;
}

struct SweepGrid {
  SourceKind source = SourceKind::thermal;
  AxisKind axis_kind = AxisKind::beta;
  std::vector<double> axis_A;
  std::vector<double> axis_B;
  /// cells[i][j] = bell_max(axis_A[i], axis_B[j]).
  std::vector<std::vector<double>> cells;

  std::size_t violated_count() const {
    std::size_t c = 0;
    for (const auto& row : cells) {
      for (double v : row) c += v > kLocalBound ? 1 : 0;
    }
    return c;
  }
};

/// Closed-form maximal Bell value at one grid point.
inline double grid_cell(SourceKind source, AxisKind axis, double a, double b) {
  if (axis == AxisKind::beta) {
    if (source != SourceKind::thermal) throw UsageError("beta axes are defined for thermal sources only");
    return thermal_bell_max(a, b);
  }
  return bell_max_for_means(source, a, b);
}

inline SweepGrid evaluate_grid(SourceKind source, AxisKind axis, std::vector<double> axis_A,
                               std::vector<double> axis_B) {
  SweepGrid g{source, axis, std::move(axis_A), std::move(axis_B), {}};
  if (g.axis_A.empty() || g.axis_B.empty()) throw UsageError("grid axes must be nonempty");
  g.cells.assign(g.axis_A.size(), std::vector<double>(g.axis_B.size()));
  for (std::size_t i = 0; i < g.axis_A.size(); ++i) {
    for (std::size_t j = 0; j < g.axis_B.size(); ++j) {
      g.cells[i][j] = grid_cell(source, axis, g.axis_A[i], g.axis_B[j]);
    }
  }
  return g;
}

/// Thermal maximal violation over beta_A x beta_B.
inline SweepGrid fig2_grid(double lo_A, double hi_A, double lo_B, double hi_B, double step) {
  return evaluate_grid(SourceKind::thermal, AxisKind::beta, make_axis(lo_A, hi_A, step),
                       make_axis(lo_B, hi_B, step));
}

struct Metadata {
  std::string command_line;
  std::map<std::string, std::string> extra;

  std::vector<std::pair<std::string, std::string>> entries() const {
    std::vector<std::pair<std::string, std::string>> e{
        {"tool", std::string("fockbell ") + kToolVersion},
        {"hbar_J_s", format_number(constants::kHbar)},
        {"k_B_J_per_K", format_number(constants::kBoltzmann)},
        {"timestamp_utc", timestamp()},
    };
    if (!command_line.empty()) e.emplace_back("command_line", command_line);
    for (const auto& [k, v] : extra) e.emplace_back(k, v);
    return e;
  }

  Json to_json() const {
    Json j = Json::object();
    for (const auto& [k, v] : entries()) j[k] = v;
    j["hbar_J_s"] = constants::kHbar;
    j["k_B_J_per_K"] = constants::kBoltzmann;
    return j;
  }

  static std::string timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
  }
};

inline void write_metadata_comments(std::ostream& os, const Metadata& meta) {
  for (const auto& [k, v] : meta.entries()) os << "# " << k << ": " << v << '\n';
}

inline void write_grid_csv(std::ostream& os, const SweepGrid& g, const Metadata& meta) {
  write_metadata_comments(os, meta);
  os << "# source: " << to_string(g.source) << '\n';
  os << axis_name(g.axis_kind, 'A') << '\\' << axis_name(g.axis_kind, 'B');
  for (double b : g.axis_B) os << ',' << format_number(b);
  os << '\n';
  for (std::size_t i = 0; i < g.axis_A.size(); ++i) {
    os << format_number(g.axis_A[i]);
    for (double v : g.cells[i]) os << ',' << format_number(v);
    os << '\n';
  }
}

namespace detail {
inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}
}  // namespace detail

/// Grid as printed: axes and cell strings exactly as stored in the file.
struct ParsedGrid {
  SweepGrid grid;
  std::vector<std::vector<std::string>> cell_text;
  std::map<std::string, std::string> metadata;
};

inline ParsedGrid read_grid_csv(std::istream& is) {
  ParsedGrid p;
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto colon = line.find(':');
      if (colon != std::string::npos && line.size() > 2) {
        std::string key = line.substr(2, colon - 2);
        std::string value = colon + 2 <= line.size() ? line.substr(colon + 2) : "";
        p.metadata[key] = value;
      }
      continue;
    }
    auto fields = detail::split_csv(line);
    if (!header) {
      header = true;
      if (fields.empty()) throw std::runtime_error("grid csv: empty header");
      p.grid.axis_kind = fields[0].rfind("beta", 0) == 0 ? AxisKind::beta : AxisKind::mean_n;
      for (std::size_t k = 1; k < fields.size(); ++k) p.grid.axis_B.push_back(std::stod(fields[k]));
      continue;
    }
    if (fields.size() != p.grid.axis_B.size() + 1) throw std::runtime_error("grid csv: ragged row");
    p.grid.axis_A.push_back(std::stod(fields[0]));
    std::vector<double> row;
    std::vector<std::string> text;
    for (std::size_t k = 1; k < fields.size(); ++k) {
      row.push_back(std::stod(fields[k]));
      text.push_back(fields[k]);
    }
    p.grid.cells.push_back(std::move(row));
    p.cell_text.push_back(std::move(text));
  }
  if (!header) throw std::runtime_error("grid csv: no header row");
  if (auto it = p.metadata.find("source"); it != p.metadata.end()) {
    p.grid.source = source_kind_from_string(it->second);
  }
  return p;
}

inline Json grid_to_json(const SweepGrid& g, const Metadata& meta) {
  Json violated = Json::array();
  for (const auto& row : g.cells) {
    Json r = Json::array();
    for (double v : row) r.push_back(v > kLocalBound);
    violated.push_back(r);
  }
  return Json{{"metadata", meta.to_json()},
              {"source", std::string(to_string(g.source))},
              {"axis_A", {{"name", axis_name(g.axis_kind, 'A')}, {"values", g.axis_A}}},
              {"axis_B", {{"name", axis_name(g.axis_kind, 'B')}, {"values", g.axis_B}}},
              {"cells", g.cells},
              {"violated", violated},
              {"violated_count", g.violated_count()}};
}

inline SweepGrid grid_from_json(const Json& j) {
  SweepGrid g;
  g.source = source_kind_from_string(j.at("source").get<std::string>());
  g.axis_kind = j.at("axis_A").at("name").get<std::string>().rfind("beta", 0) == 0 ? AxisKind::beta
                                                                                   : AxisKind::mean_n;
  g.axis_A = j.at("axis_A").at("values").get<std::vector<double>>();
  g.axis_B = j.at("axis_B").at("values").get<std::vector<double>>();
  g.cells = j.at("cells").get<std::vector<std::vector<double>>>();
  return g;
}

struct BorderCurves {
  std::vector<BorderPoint> thermal;
  std::vector<BorderPoint> pseudothermal;
  std::optional<double> thermal_symmetric;
  std::optional<double> pseudothermal_symmetric;
};

inline BorderCurves border_curves(const std::vector<double>& axis_A, double lo_B, double hi_B,
                                  double tolerance = 1e-9) {
  BorderCurves c;
  c.thermal = violation_border(SourceKind::thermal, axis_A, lo_B, hi_B, tolerance);
  c.pseudothermal = violation_border(SourceKind::pseudothermal, axis_A, lo_B, hi_B, tolerance);
  c.thermal_symmetric = symmetric_crossing(SourceKind::thermal, lo_B, hi_B, tolerance);
  c.pseudothermal_symmetric = symmetric_crossing(SourceKind::pseudothermal, lo_B, hi_B, tolerance);
  return c;
}

inline void write_border_csv(std::ostream& os, const BorderCurves& c, const Metadata& meta) {
  write_metadata_comments(os, meta);
  auto sym = [](const std::optional<double>& x) { return x ? format_number(*x) : std::string("none"); };
  os << "# thermal_symmetric_crossing: " << sym(c.thermal_symmetric) << '\n';
  os << "# pseudothermal_symmetric_crossing: " << sym(c.pseudothermal_symmetric) << '\n';
  os << "kind,mean_n_A,mean_n_B,status\n";
  auto rows = [&](const char* kind, const std::vector<BorderPoint>& pts) {
    for (const auto& p : pts) {
      os << kind << ',' << format_number(p.mean_A) << ','
         << (p.mean_B ? format_number(*p.mean_B) : std::string("")) << ',' << p.status << '\n';
    }
  };
  rows("thermal", c.thermal);
  rows("pseudothermal", c.pseudothermal);
}

inline Json border_to_json(const BorderCurves& c, const Metadata& meta) {
  auto curve = [](const std::vector<BorderPoint>& pts) {
    Json a = Json::array();
    for (const auto& p : pts) {
      a.push_back({{"mean_n_A", p.mean_A},
                   {"mean_n_B", p.mean_B ? Json(*p.mean_B) : Json(nullptr)},
                   {"status", p.status}});
    }
    return a;
  };
  auto sym = [](const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); };
  return Json{{"metadata", meta.to_json()},
              {"thermal", curve(c.thermal)},
              {"pseudothermal", curve(c.pseudothermal)},
              {"thermal_symmetric_crossing", sym(c.thermal_symmetric)},
              {"pseudothermal_symmetric_crossing", sym(c.pseudothermal_symmetric)}};
}

}  // namespace fockbell
