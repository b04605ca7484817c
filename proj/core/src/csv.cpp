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

#include "jolt/csv.hpp"

#include <map>
#include <set>

#include "jolt/errors.hpp"
#include "jolt/io.hpp"

namespace jolt {

void Schema::validate() const {
  std::set<std::string_view> names;
  for (const auto* group : {&features, &targets}) {
    for (const auto& spec : *group) {
      spec.validate();
      if (!names.insert(spec.name).second) {
        throw ValidationError("duplicate column name '" + spec.name + "'");
      }
    }
  }
}

std::vector<std::vector<std::string>> parse_csv_records(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started || !field.empty()) {
          throw ValidationError("CSV line " + std::to_string(line) +
                                ": stray quote inside unquoted field");
        }
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        end_record();
        ++line;
        break;
      case '\n':
        end_record();
        ++line;
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (in_quotes) throw ValidationError("CSV: unterminated quoted field");
  if (field_started || !field.empty() || !record.empty()) end_record();
  return records;
}

Table table_from_csv(std::string_view text, const Schema& schema) {
  schema.validate();
  auto records = parse_csv_records(text);
  if (records.empty()) throw ValidationError("CSV has no header row");
  const auto& header = records.front();

  std::vector<const ColumnSpec*> ordered;
  for (const auto& s : schema.features) ordered.push_back(&s);
  for (const auto& s : schema.targets) ordered.push_back(&s);

  std::map<std::string, std::size_t> header_pos;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!header_pos.emplace(header[i], i).second) {
      throw ValidationError("CSV header repeats column '" + header[i] + "'");
    }
  }
  std::vector<std::size_t> source(ordered.size());
  for (std::size_t c = 0; c < ordered.size(); ++c) {
    auto it = header_pos.find(ordered[c]->name);
    if (it == header_pos.end()) {
      throw ValidationError("schema mismatch: CSV header lacks column '" +
                            ordered[c]->name + "'");
    }
    source[c] = it->second;
  }
  if (header.size() != ordered.size()) {
    for (const auto& h : header) {
      bool known = false;
      for (const auto* s : ordered) known = known || s->name == h;
      if (!known) {
        throw ValidationError("schema mismatch: CSV column '" + h +
                              "' is not in the schema");
      }
    }
  }

  const std::size_t n_rows = records.size() - 1;
  if (schema.train_rows && *schema.train_rows > n_rows) {
    throw ValidationError("schema train_rows exceeds the number of data rows");
  }
  std::vector<Row> rows;
  std::vector<RowRole> roles;
  rows.reserve(n_rows);
  for (std::size_t r = 0; r < n_rows; ++r) {
    const auto& rec = records[r + 1];
    if (rec.size() != header.size()) {
      throw DataError(r, "*", "expected " + std::to_string(header.size()) +
                                  " fields, found " + std::to_string(rec.size()));
    }
    Row row;
    row.reserve(ordered.size());
    for (std::size_t c = 0; c < ordered.size(); ++c) {
      try {
        row.push_back(parse_cell(*ordered[c], rec[source[c]]));
      } catch (const ValidationError& e) {
        throw DataError(r, ordered[c]->name, e.what());
      }
    }
    RowRole role = RowRole::kTrain;
    if (schema.train_rows) {
      role = r < *schema.train_rows ? RowRole::kTrain : RowRole::kTest;
    } else if (!schema.targets.empty()) {
      bool all_missing = true;
      for (std::size_t c = schema.features.size(); c < row.size(); ++c) {
        all_missing = all_missing && is_missing(row[c]);
      }
      role = all_missing ? RowRole::kTest : RowRole::kTrain;
    }
    rows.push_back(std::move(row));
    roles.push_back(role);
  }
  return Table(schema.features, schema.targets, std::move(rows), std::move(roles));
}

Table load_csv(const std::filesystem::path& path, const Schema& schema) {
  return table_from_csv(read_file(path), schema);
}

namespace {

void append_field(std::string& out, std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    out += field;
    return;
  }
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

}  // namespace

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.column_count(); ++c) {
    if (c) out += ',';
    append_field(out, table.column(c).name);
  }
  out += '\n';
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    for (std::size_t c = 0; c < table.column_count(); ++c) {
      if (c) out += ',';
      if (auto text = render(table.cell(r, c))) append_field(out, *text);
    }
    out += '\n';
  }
  return out;
}

}  // namespace jolt
