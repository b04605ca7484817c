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

#ifndef JOLT_TABLE_HPP_
#define JOLT_TABLE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "jolt/decimal.hpp"

namespace jolt {

enum class ColumnKind { kNumeric, kCategorical, kText };

const char* to_string(ColumnKind kind);

// A column heading plus the type information needed to render and score its
// values. `precision` is meaningful for numeric columns only, `classes` for
// categorical columns only.
struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::kText;
  int precision = 0;
  std::vector<std::string> classes;

  static ColumnSpec numeric(std::string name, int precision);
  static ColumnSpec categorical(std::string name, std::vector<std::string> classes);
  static ColumnSpec text(std::string name);

  bool is_numeric() const { return kind == ColumnKind::kNumeric; }
  bool is_categorical() const { return kind == ColumnKind::kCategorical; }

  // Index of `label` in `classes`, if present.
  std::optional<std::size_t> class_index(std::string_view label) const;

  // Throws ValidationError when the spec breaks its own invariants.
  void validate() const;

  friend bool operator==(const ColumnSpec&, const ColumnSpec&) = default;
};

struct Missing {
  friend bool operator==(const Missing&, const Missing&) = default;
};
struct Category {
  std::string label;
  friend bool operator==(const Category&, const Category&) = default;
};
struct Text {
  std::string content;
  friend bool operator==(const Text&, const Text&) = default;
};

using CellValue = std::variant<Missing, Decimal, Category, Text>;
using Row = std::vector<CellValue>;

inline bool is_missing(const CellValue& v) {
  return std::holds_alternative<Missing>(v);
}

// Rendered cell text; nullopt for Missing.
std::optional<std::string> render(const CellValue& value);

// Parses `text` into a cell conforming to `spec`. Empty text is Missing.
// Throws ValidationError describing the problem (no coordinates).
CellValue parse_cell(const ColumnSpec& spec, std::string_view text);

// True when `value` conforms to `spec`.
bool conforms(const ColumnSpec& spec, const CellValue& value);

enum class RowRole : std::uint8_t { kTrain, kTest };

// Immutable typed table. Columns are the feature columns followed by the
// target columns; every row has exactly one cell per column. Each row keeps a
// stable id (its position in the source data) across subsetting.
class Table {
 public:
  Table() = default;
  Table(std::vector<ColumnSpec> features, std::vector<ColumnSpec> targets,
        std::vector<Row> rows, std::vector<RowRole> roles,
        std::vector<std::size_t> row_ids = {});

  std::size_t feature_count() const { return feature_count_; }
  std::size_t target_count() const { return columns_.size() - feature_count_; }
  std::size_t column_count() const { return columns_.size(); }
  std::size_t row_count() const { return rows_.size(); }

  std::span<const ColumnSpec> columns() const { return columns_; }
  std::span<const ColumnSpec> feature_columns() const {
    return std::span(columns_).first(feature_count_);
  }
  std::span<const ColumnSpec> target_columns() const {
    return std::span(columns_).subspan(feature_count_);
  }
  const ColumnSpec& column(std::size_t c) const { return columns_.at(c); }
  std::optional<std::size_t> find_column(std::string_view name) const;
  bool is_feature(std::size_t c) const { return c < feature_count_; }

  const Row& row(std::size_t r) const { return rows_.at(r); }
  const CellValue& cell(std::size_t r, std::size_t c) const {
    return rows_.at(r).at(c);
  }
  RowRole role(std::size_t r) const { return roles_.at(r); }
  std::size_t row_id(std::size_t r) const { return row_ids_.at(r); }
  std::optional<std::size_t> find_row_id(std::size_t id) const;

  std::vector<std::size_t> train_rows() const;
  std::vector<std::size_t> test_rows() const;

  // Rows at `indices`, in the given order.
  Table select_rows(std::span<const std::size_t> indices) const;

  // Copy with the given cells replaced; each replacement is validated.
  struct CellUpdate {
    std::size_t row;
    std::size_t column;
    CellValue value;
  };
  Table with_cells(std::span<const CellUpdate> updates) const;

  Table with_roles(std::vector<RowRole> roles) const;

  std::size_t missing_feature_cells() const;

  friend bool operator==(const Table&, const Table&) = default;

 private:
  std::vector<ColumnSpec> columns_;
  std::size_t feature_count_ = 0;
  std::vector<Row> rows_;
  std::vector<RowRole> roles_;
  std::vector<std::size_t> row_ids_;
};

// Sets floor(fraction * rows * features) feature cells to Missing, chosen
// uniformly without replacement. The chosen coordinates depend only on the
// table dimensions, the fraction and the seed. Target cells are never touched.
Table mask_mcar(const Table& table, double fraction, std::uint64_t seed);

// Coordinates mask_mcar would blank, as (row, feature column) pairs, in the
// order they were drawn.
std::vector<std::pair<std::size_t, std::size_t>> mcar_coordinates(
    std::size_t rows, std::size_t features, double fraction, std::uint64_t seed);

// Keeps a seeded subsample of `n_shots` training rows (in sampled order,
// which makes selections nested across n_shots for a fixed seed) followed by
// all test rows.
Table select_shots(const Table& table, std::size_t n_shots, std::uint64_t seed);

// Keeps all training rows and a seeded subsample of `n_test` test rows.
Table select_test_rows(const Table& table, std::size_t n_test, std::uint64_t seed);

}  // namespace jolt

#endif  // JOLT_TABLE_HPP_
