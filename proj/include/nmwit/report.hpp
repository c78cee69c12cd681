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

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "nmwit/config.hpp"
#include "nmwit/witnesses.hpp"

namespace nmw {

inline constexpr const char* kToolVersion = "nmwit 0.1.0";
inline constexpr const char* kTimestampKey = "timestamp";

/// 17 significant digits, '.' decimal separator, independent of locale.
std::string format_double(double v);
/// UTC, ISO 8601.
std::string utc_timestamp();

struct CsvColumn {
  std::string name;
  std::vector<double> values;
};

/// Provenance lines written as "# key: value" above the column header.
using CsvHeader = std::vector<std::pair<std::string, std::string>>;

CsvHeader provenance(const Scenario& s, const std::string& command, const std::string& witness);

/// Columns must have equal length. Throws IoError when the file cannot be written.
void write_csv(const std::filesystem::path& path, const CsvHeader& header, std::span<const CsvColumn> columns);

struct CsvFile {
  CsvHeader header;
  std::vector<CsvColumn> columns;
};

CsvFile read_csv(const std::filesystem::path& path);

nlohmann::json to_json(const MeasureResult& m);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace nmw
