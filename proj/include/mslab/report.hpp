#pragma once

// Serialization helpers. Every float is written with 17 significant digits so
// that reports round-trip exactly and identical runs give identical bytes.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace mslab {

using json = nlohmann::ordered_json;

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// JSON value for a possibly infinite double: non-finite values become null.
inline json json_number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

namespace detail {

inline void write_json_impl(std::ostream& os, const json& j, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',';
        first = false;
        newline(depth + 1);
        os << json(it.key()).dump() << (indent < 0 ? ":" : ": ");
        write_json_impl(os, it.value(), indent, depth + 1);
      }
      newline(depth);
      os << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << ',';
        first = false;
        newline(depth + 1);
        write_json_impl(os, v, indent, depth + 1);
      }
      newline(depth);
      os << ']';
      return;
    }
    case json::value_t::number_float: {
      const double x = j.get<double>();
      if (!std::isfinite(x)) {
        os << "null";
      } else {
        os << format_double(x);
      }
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace detail

/// Like json::dump but with %.17g floats. indent < 0 gives compact output.
inline void write_json(std::ostream& os, const json& j, int indent = 2) {
  detail::write_json_impl(os, j, indent, 0);
}

inline std::string to_json_string(const json& j, int indent = 2) {
  std::ostringstream os;
  write_json(os, j, indent);
  return os.str();
}

/// Header plus rows of preformatted cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write(std::ostream& os) const {
    auto line = [&os](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
      os << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
  }
};

/// CSV mirror of an array of flat JSON objects, columns in first-row key order.
inline CsvTable csv_from_rows(const json& rows) {
  CsvTable t;
  if (!rows.is_array() || rows.empty()) return t;
  for (auto it = rows.front().begin(); it != rows.front().end(); ++it) t.header.push_back(it.key());
  for (const auto& r : rows) {
    std::vector<std::string> cells;
    for (const auto& key : t.header) {
      if (!r.contains(key)) {
        cells.emplace_back();
        continue;
      }
      const json& v = r.at(key);
      if (v.is_number_float())
        cells.push_back(format_double(v.get<double>()));
      else if (v.is_string())
        cells.push_back(v.get<std::string>());
      else if (v.is_null())
        cells.emplace_back();
      else
        cells.push_back(v.dump());
    }
    t.rows.push_back(std::move(cells));
  }
  return t;
}

}  // namespace mslab
