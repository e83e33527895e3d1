// Copyright 2026 The paulest Authors
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

#include <json.hpp>

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <string>
#include <variant>
#include <vector>

namespace paulest::io {

/// Shortest round-trip decimal form, '.' separator, locale independent.
inline std::string format_number(double v) {
  if (v == 0.0) return "0";  // no "-0"
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

/// A rectangular result table rendered as CSV (comment preamble, header
/// row, one line per record) or as JSON.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

inline std::string render_cell(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string out = "\"";
      for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
      }
      return out + "\"";
    }
  };
  return std::visit(Visitor{}, cell);
}

/// First line: "# paulest-csv v1 command=<cmd> spec_hash=<hex> seed=<seed>".
inline std::string render_csv(const Table& table, const std::string& command, std::uint64_t spec_hash,
                              std::uint64_t seed) {
  std::string out = "# paulest-csv v1 command=" + command + " spec_hash=" + hex64(spec_hash) +
                    " seed=" + std::to_string(seed) + "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + table.columns[i];
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + render_cell(row[i]);
    out += "\n";
  }
  return out;
}

inline nlohmann::ordered_json cell_json(const Cell& cell) {
  if (std::holds_alternative<double>(cell)) return std::get<double>(cell);
  if (std::holds_alternative<std::int64_t>(cell)) return std::get<std::int64_t>(cell);
  if (std::holds_alternative<std::string>(cell)) return std::get<std::string>(cell);
  return nullptr;
}

inline std::string render_json(const Table& table, const std::string& command, std::uint64_t spec_hash,
                               std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["format"] = "paulest-table";
  j["version"] = 1;
  j["command"] = command;
  j["spec_hash"] = hex64(spec_hash);
  j["seed"] = seed;
  j["columns"] = table.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) obj[table.columns[i]] = cell_json(row[i]);
    rows.push_back(std::move(obj));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

}  // namespace paulest::io
