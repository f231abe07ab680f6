#pragma once

// Grids, number formatting and curve serialization for the sigfrac CLI.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sigfrac/error.hpp"
#include "sigfrac/transforms.hpp"

namespace sigfrac::cli {

using json = nlohmann::ordered_json;

inline double parse_number(std::string_view text, std::string_view what) {
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw DomainError(std::string(what) + ": '" + s + "' is not a finite number");
  }
  return v;
}

inline int parse_int(std::string_view text, std::string_view what) {
  const double v = parse_number(text, what);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw DomainError(std::string(what) + ": '" + std::string(text) + "' is not an integer");
  }
  return static_cast<int>(v);
}

/// `min:max:count` (both ends included) or a comma separated list.
inline std::vector<double> parse_grid(std::string_view spec) {
  std::vector<double> out;
  if (spec.find(':') != std::string_view::npos) {
    const auto c1 = spec.find(':');
    const auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string_view::npos || spec.find(':', c2 + 1) != std::string_view::npos) {
      throw DomainError("grid: expected min:max:count, got '" + std::string(spec) + "'");
    }
    const double lo = parse_number(spec.substr(0, c1), "grid min");
    const double hi = parse_number(spec.substr(c1 + 1, c2 - c1 - 1), "grid max");
    const int n = parse_int(spec.substr(c2 + 1), "grid count");
    if (n < 2) throw DomainError("grid: count must be >= 2");
    if (!(lo < hi)) throw DomainError("grid: min must be below max");
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back(i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1));
    return out;
  }
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const auto next = std::min(spec.find(',', pos), spec.size());
    out.push_back(parse_number(spec.substr(pos, next - pos), "grid value"));
    pos = next + 1;
  }
  if (out.empty()) throw DomainError("grid: no values");
  return out;
}

/// Grid argument to the linear value of the variable. MH arguments must be < 1.
inline double grid_to_linear(double x, AxisUnit unit) {
  if (unit == AxisUnit::MH && !(x < 1.0)) {
    throw DomainError("grid: MH arguments must be < 1");
  }
  return to_linear(x, unit);
}

/// 12 significant digits.
inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// The value `fmt` prints, so JSON and CSV carry the same digits.
inline double rounded(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(fmt(v).c_str(), nullptr);
}

enum class Format { csv, json };

inline Format parse_format(std::string_view s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw DomainError("format must be csv or json, got '" + std::string(s) + "'");
}

/// Explicit format, else from the output extension, else csv.
inline Format resolve_format(const std::string& format, const std::string& path) {
  if (!format.empty()) return parse_format(format);
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) return Format::json;
  return Format::csv;
}

/// Writes `text` to `path`, or to standard output for "-" or "".
inline void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw DomainError("write to '" + path + "' failed");
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

struct Row {
  double arg;
  double value;
  std::optional<std::string> flag;
};

struct Curve {
  std::string command;
  std::string variable = "SF";
  std::string kind = "ccdf";
  AxisUnit unit = AxisUnit::linear;
  json parameters = json::object();
  std::vector<Row> rows;
};

inline std::string to_csv(const Curve& c) {
  bool flagged = false;
  for (const Row& r : c.rows) flagged = flagged || r.flag.has_value();
  std::string out = flagged ? "arg_unit,arg,value,flag\n" : "arg_unit,arg,value\n";
  const std::string unit(to_string(c.unit));
  for (const Row& r : c.rows) {
    out += unit + "," + fmt(r.arg) + "," + fmt(r.value);
    if (flagged) out += "," + r.flag.value_or("");
    out += "\n";
  }
  return out;
}

inline json to_json(const Curve& c) {
  json points = json::array();
  for (const Row& r : c.rows) {
    json p = {{"arg", rounded(r.arg)}, {"value", rounded(r.value)}};
    if (r.flag) p["flag"] = *r.flag;
    points.push_back(std::move(p));
  }
  return {{"command", c.command},         {"variable", c.variable}, {"kind", c.kind},
          {"arg_unit", to_string(c.unit)}, {"parameters", c.parameters}, {"points", std::move(points)}};
}

inline void write_curve(const Curve& c, Format format, const std::string& path) {
  emit(path, format == Format::csv ? to_csv(c) : dump(to_json(c)));
}

/// Where a JSON sidecar goes: the explicit path, else next to a file output,
/// else nowhere (empty) when the curve went to standard output.
inline std::string sidecar_path(const std::string& explicit_path, const std::string& output,
                                std::string_view suffix) {
  if (!explicit_path.empty()) return explicit_path;
  if (output.empty() || output == "-") return {};
  return output + std::string(suffix);
}

}  // namespace sigfrac::cli
