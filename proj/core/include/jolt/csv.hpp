// Copyright 2026 The Jolt Authors.
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

#ifndef JOLT_CSV_HPP_
#define JOLT_CSV_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jolt/table.hpp"

namespace jolt {

// Column layout for ingesting a CSV file. When `train_rows` is set the first
// that many data rows are training rows and the rest are test rows; otherwise
// a row is a test row exactly when all of its target cells are empty.
struct Schema {
  std::vector<ColumnSpec> features;
  std::vector<ColumnSpec> targets;
  std::optional<std::size_t> train_rows;

  void validate() const;
};

// RFC 4180 style records: comma delimiter, double-quote escaping, CRLF or LF
// line endings. A trailing line break does not produce an empty record.
std::vector<std::vector<std::string>> parse_csv_records(std::string_view text);

// Builds a Table from CSV text. The header must name exactly the schema's
// columns (in any order). Empty fields are Missing.
Table table_from_csv(std::string_view text, const Schema& schema);

Table load_csv(const std::filesystem::path& path, const Schema& schema);

// Header plus one line per row; Missing renders as an empty field. Fields
// containing commas, quotes or line breaks are quoted.
std::string to_csv(const Table& table);

}  // namespace jolt

#endif  // JOLT_CSV_HPP_
