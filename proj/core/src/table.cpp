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

#include "jolt/table.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "jolt/errors.hpp"
#include "jolt/random.hpp"

namespace jolt {

namespace {

// Stream tags for derive_seed; keep them distinct per use.
constexpr std::uint64_t kShotStream = 0x5107;
constexpr std::uint64_t kTestStream = 0x7e57;
constexpr std::uint64_t kMaskStream = 0x3a5c;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

const char* to_string(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::kNumeric:
      return "numeric";
    case ColumnKind::kCategorical:
      return "categorical";
    case ColumnKind::kText:
      return "text";
  }
  return "unknown";
}

ColumnSpec ColumnSpec::numeric(std::string name, int precision) {
  ColumnSpec spec{std::move(name), ColumnKind::kNumeric, precision, {}};
  spec.validate();
  return spec;
}

ColumnSpec ColumnSpec::categorical(std::string name,
                                   std::vector<std::string> classes) {
  ColumnSpec spec{std::move(name), ColumnKind::kCategorical, 0, std::move(classes)};
  spec.validate();
  return spec;
}

ColumnSpec ColumnSpec::text(std::string name) {
  ColumnSpec spec{std::move(name), ColumnKind::kText, 0, {}};
  spec.validate();
  return spec;
}

std::optional<std::size_t> ColumnSpec::class_index(std::string_view label) const {
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i] == label) return i;
  }
  return std::nullopt;
}

void ColumnSpec::validate() const {
  if (name.empty()) throw ValidationError("column name must be nonempty");
  switch (kind) {
    case ColumnKind::kNumeric:
      if (precision < 0 || precision > 18) {
        throw ValidationError("column '" + name + "': precision must be in [0, 18]");
      }
      if (!classes.empty()) {
        throw ValidationError("column '" + name + "': numeric column has classes");
      }
      break;
    case ColumnKind::kCategorical: {
      if (classes.empty()) {
        throw ValidationError("column '" + name + "': categorical column needs classes");
      }
      std::set<std::string_view> seen;
      for (const auto& c : classes) {
        if (c.empty()) {
          throw ValidationError("column '" + name + "': empty class label");
        }
        if (!seen.insert(c).second) {
          throw ValidationError("column '" + name + "': duplicate class '" + c + "'");
        }
      }
      break;
    }
    case ColumnKind::kText:
      if (!classes.empty()) {
        throw ValidationError("column '" + name + "': text column has classes");
      }
      break;
  }
}

std::optional<std::string> render(const CellValue& value) {
  return std::visit(
      Overloaded{
          [](const Missing&) -> std::optional<std::string> { return std::nullopt; },
          [](const Decimal& d) -> std::optional<std::string> { return d.to_string(); },
          [](const Category& c) -> std::optional<std::string> { return c.label; },
          [](const Text& t) -> std::optional<std::string> { return t.content; },
      },
      value);
}

CellValue parse_cell(const ColumnSpec& spec, std::string_view text) {
  if (text.empty()) return Missing{};
  switch (spec.kind) {
    case ColumnKind::kNumeric: {
      auto d = Decimal::parse(text, spec.precision);
      if (!d) {
        throw ValidationError("cannot parse '" + std::string(text) +
                              "' as a number with at most " +
                              std::to_string(spec.precision) + " decimal digits");
      }
      return *d;
    }
    case ColumnKind::kCategorical:
      if (!spec.class_index(text)) {
        throw ValidationError("unknown category label '" + std::string(text) + "'");
      }
      return Category{std::string(text)};
    case ColumnKind::kText:
      return Text{std::string(text)};
  }
  return Missing{};
}

bool conforms(const ColumnSpec& spec, const CellValue& value) {
  return std::visit(
      Overloaded{
          [](const Missing&) { return true; },
          [&](const Decimal& d) {
            return spec.is_numeric() && d.precision() == spec.precision;
          },
          [&](const Category& c) {
            return spec.is_categorical() && spec.class_index(c.label).has_value();
          },
          [&](const Text&) { return spec.kind == ColumnKind::kText; },
      },
      value);
}

Table::Table(std::vector<ColumnSpec> features, std::vector<ColumnSpec> targets,
             std::vector<Row> rows, std::vector<RowRole> roles,
             std::vector<std::size_t> row_ids)
    : feature_count_(features.size()),
      rows_(std::move(rows)),
      roles_(std::move(roles)),
      row_ids_(std::move(row_ids)) {
  columns_ = std::move(features);
  columns_.insert(columns_.end(), std::make_move_iterator(targets.begin()),
                  std::make_move_iterator(targets.end()));
  std::set<std::string_view> names;
  for (const auto& spec : columns_) {
    spec.validate();
    if (!names.insert(spec.name).second) {
      throw ValidationError("duplicate column name '" + spec.name + "'");
    }
  }
  if (roles_.size() != rows_.size()) {
    throw ValidationError("row role count does not match row count");
  }
  if (row_ids_.empty()) {
    row_ids_.resize(rows_.size());
    std::iota(row_ids_.begin(), row_ids_.end(), std::size_t{0});
  } else if (row_ids_.size() != rows_.size()) {
    throw ValidationError("row id count does not match row count");
  }
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (rows_[r].size() != columns_.size()) {
      throw ValidationError("row " + std::to_string(r) + " has " +
                            std::to_string(rows_[r].size()) + " cells, expected " +
                            std::to_string(columns_.size()));
    }
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      if (!conforms(columns_[c], rows_[r][c])) {
        throw DataError(r, columns_[c].name, "cell does not conform to column type");
      }
    }
  }
}

std::optional<std::size_t> Table::find_column(std::string_view name) const {
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (columns_[c].name == name) return c;
  }
  return std::nullopt;
}

std::optional<std::size_t> Table::find_row_id(std::size_t id) const {
  for (std::size_t r = 0; r < row_ids_.size(); ++r) {
    if (row_ids_[r] == id) return r;
  }
  return std::nullopt;
}

std::vector<std::size_t> Table::train_rows() const {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < roles_.size(); ++r) {
    if (roles_[r] == RowRole::kTrain) out.push_back(r);
  }
  return out;
}

std::vector<std::size_t> Table::test_rows() const {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < roles_.size(); ++r) {
    if (roles_[r] == RowRole::kTest) out.push_back(r);
  }
  return out;
}

Table Table::select_rows(std::span<const std::size_t> indices) const {
  std::vector<Row> rows;
  std::vector<RowRole> roles;
  std::vector<std::size_t> ids;
  rows.reserve(indices.size());
  for (std::size_t r : indices) {
    rows.push_back(rows_.at(r));
    roles.push_back(roles_.at(r));
    ids.push_back(row_ids_.at(r));
  }
  std::vector<ColumnSpec> features(columns_.begin(), columns_.begin() + feature_count_);
  std::vector<ColumnSpec> targets(columns_.begin() + feature_count_, columns_.end());
  return Table(std::move(features), std::move(targets), std::move(rows),
               std::move(roles), std::move(ids));
}

Table Table::with_cells(std::span<const CellUpdate> updates) const {
  Table out = *this;
  for (const auto& u : updates) {
    if (u.row >= out.rows_.size() || u.column >= out.columns_.size()) {
      throw ValidationError("cell update out of range");
    }
    if (!conforms(out.columns_[u.column], u.value)) {
      throw DataError(u.row, out.columns_[u.column].name,
                      "replacement does not conform to column type");
    }
    out.rows_[u.row][u.column] = u.value;
  }
  return out;
}

Table Table::with_roles(std::vector<RowRole> roles) const {
  if (roles.size() != rows_.size()) {
    throw ValidationError("row role count does not match row count");
  }
  Table out = *this;
  out.roles_ = std::move(roles);
  return out;
}

std::size_t Table::missing_feature_cells() const {
  std::size_t n = 0;
  for (const auto& row : rows_) {
    for (std::size_t c = 0; c < feature_count_; ++c) n += is_missing(row[c]);
  }
  return n;
}

std::vector<std::pair<std::size_t, std::size_t>> mcar_coordinates(
    std::size_t rows, std::size_t features, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw ValidationError("MCAR fraction must be in [0, 1]");
  }
  const std::size_t total = rows * features;
  // The epsilon keeps products like 0.29 * 100 from flooring to 28.
  const auto count = std::min(
      total, static_cast<std::size_t>(
                 std::floor(fraction * static_cast<double>(total) + 1e-9)));
  std::vector<std::size_t> cells(total);
  std::iota(cells.begin(), cells.end(), std::size_t{0});
  Rng rng(derive_seed(seed, kMaskStream));
  // Partial Fisher-Yates: the first `count` slots are the sample.
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(total - i));
    std::swap(cells[i], cells[j]);
  }
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.emplace_back(cells[i] / features, cells[i] % features);
  }
  return out;
}

Table mask_mcar(const Table& table, double fraction, std::uint64_t seed) {
  const auto coords =
      mcar_coordinates(table.row_count(), table.feature_count(), fraction, seed);
  std::vector<Table::CellUpdate> updates;
  updates.reserve(coords.size());
  for (auto [r, c] : coords) updates.push_back({r, c, Missing{}});
  return table.with_cells(updates);
}

Table select_shots(const Table& table, std::size_t n_shots, std::uint64_t seed) {
  auto pool = table.train_rows();
  if (n_shots > pool.size()) {
    throw ValidationError("requested " + std::to_string(n_shots) +
                          " shots but only " + std::to_string(pool.size()) +
                          " training rows are available");
  }
  Rng rng(derive_seed(seed, kShotStream));
  rng.shuffle(std::span(pool));
  pool.resize(n_shots);
  const auto tests = table.test_rows();
  pool.insert(pool.end(), tests.begin(), tests.end());
  return table.select_rows(pool);
}

Table select_test_rows(const Table& table, std::size_t n_test, std::uint64_t seed) {
  auto pool = table.test_rows();
  if (n_test > pool.size()) {
    throw ValidationError("requested " + std::to_string(n_test) +
                          " test rows but only " + std::to_string(pool.size()) +
                          " are available");
  }
  Rng rng(derive_seed(seed, kTestStream));
  rng.shuffle(std::span(pool));
  pool.resize(n_test);
  auto keep = table.train_rows();
  keep.insert(keep.end(), pool.begin(), pool.end());
  return table.select_rows(keep);
}

}  // namespace jolt
