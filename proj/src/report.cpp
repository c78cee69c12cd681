// Copyright 2026 The nmwit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nmwit/report.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include "nmwit/errors.hpp"

namespace nmw {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc()) throw IoError("cannot format number");
  return {buf, end};
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

CsvHeader provenance(const Scenario& s, const std::string& command, const std::string& witness) {
  const auto j = to_json(s);
  std::ostringstream grid;
  grid << "t0=" << format_double(s.grid.t0) << " t1=" << format_double(s.grid.t1) << " steps=" << s.grid.steps;
  std::ostringstream solver;
  solver << "tol=" << format_double(s.solver.tol) << " max_iter=" << s.solver.max_iter
         << " gap_tol=" << format_double(s.solver.gap_tol) << " verify=" << (s.solver.verify ? "true" : "false");
  return {{"tool", kToolVersion},
          {"schema_version", std::to_string(kSchemaVersion)},
          {"command", command},
          {"family", family_name(s.channel)},
          {"params", j.at("params").dump()},
          {"witness", witness},
          {"grid", grid.str()},
          {"epsilon", format_double(s.ccm_epsilon())},
          {"solver", solver.str()},
          {"config", j.dump()},
          {kTimestampKey, utc_timestamp()}};
}

void write_csv(const std::filesystem::path& path, const CsvHeader& header, std::span<const CsvColumn> columns) {
  if (columns.empty()) throw IoError("csv: no columns");
  const std::size_t rows = columns.front().values.size();
  for (const auto& c : columns)
    if (c.values.size() != rows) throw IoError("csv: column '" + c.name + "' has a different length");
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& [key, value] : header) out << "# " << key << ": " << value << '\n';
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c].name;
  out << '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << format_double(columns[c].values[r]);
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

CsvFile read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  CsvFile f;
  std::string line;
  bool have_names = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.starts_with("# ")) {
      const auto colon = line.find(": ");
      if (colon == std::string::npos) continue;
      f.header.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!have_names) {
      for (auto& name : cells) f.columns.push_back({name, {}});
      have_names = true;
      continue;
    }
    if (cells.size() != f.columns.size()) throw IoError("csv: ragged row in " + path.string());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cells[c].data(), cells[c].data() + cells[c].size(), v);
      if (ec != std::errc() || ptr != cells[c].data() + cells[c].size())
        throw IoError("csv: bad number '" + cells[c] + "' in " + path.string());
      f.columns[c].values.push_back(v);
    }
  }
  return f;
}

nlohmann::json to_json(const MeasureResult& m) {
  nlohmann::json j = {{"measure", to_string(m.kind)}, {"value", m.value}, {"t0", m.t0}, {"t1", m.t1}, {"points", m.points}};
  nlohmann::json meta = nlohmann::json::object();
  for (const auto& [k, v] : m.metadata) meta[k] = v;
  j["metadata"] = meta;
  return j;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace nmw
