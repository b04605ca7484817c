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

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "jolt/errors.hpp"
#include "jolt_cli/config.hpp"

namespace jolt {
namespace {

TEST(CsvTest, WineRow) {
  const auto cfg = cli::load_config(testing::data_dir() / "wine.json");
  const Table t = load_csv(cfg.dataset_path, cfg.schema);
  ASSERT_EQ(t.row_count(), 2u);
  EXPECT_EQ(t.feature_count(), 11u);
  EXPECT_EQ(t.target_count(), 2u);
  EXPECT_EQ(render(t.cell(0, 0)), "6.2");
  EXPECT_EQ(render(t.cell(0, 5)), "24.0");
  EXPECT_EQ(render(t.cell(0, 10)), "white");
  EXPECT_EQ(t.role(0), RowRole::kTrain);
  EXPECT_EQ(t.role(1), RowRole::kTest);
  EXPECT_TRUE(is_missing(t.cell(1, 11)));
}

TEST(CsvTest, EmptyCellIsMissing) {
  const Schema schema{{ColumnSpec::numeric("x", 1)}, {}, std::nullopt};
  const Table t = table_from_csv("x\n\"\"\n", schema);
  ASSERT_EQ(t.row_count(), 1u);
  EXPECT_TRUE(is_missing(t.cell(0, 0)));
}

TEST(CsvTest, UnknownLabelNamesCoordinates) {
  const Schema schema{{ColumnSpec::numeric("x", 0)},
                      {ColumnSpec::categorical("ok", {"yes", "no"})}, std::nullopt};
  try {
    table_from_csv("x,ok\n1,yes\n2,maybe\n", schema);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_EQ(e.row(), 1u);
    EXPECT_EQ(e.column(), "ok");
    EXPECT_NE(std::string(e.what()).find("maybe"), std::string::npos);
  }
}

TEST(CsvTest, UnparseableNumber) {
  const Schema schema{{ColumnSpec::numeric("x", 1)}, {}, std::nullopt};
  EXPECT_THROW(table_from_csv("x\n1.25\n", schema), DataError);
  EXPECT_THROW(table_from_csv("x\nabc\n", schema), DataError);
}

TEST(CsvTest, HeaderMismatch) {
  const Schema schema{{ColumnSpec::numeric("x", 0)}, {ColumnSpec::numeric("y", 0)}, std::nullopt};
  EXPECT_THROW(table_from_csv("x\n1\n", schema), ValidationError);
  EXPECT_THROW(table_from_csv("x,y,z\n1,2,3\n", schema), ValidationError);
  const Table t = table_from_csv("y,x\n2,1\n", schema);
  EXPECT_EQ(render(t.cell(0, 0)), "1");
}

TEST(CsvTest, QuotingAndLineEndings) {
  const auto records = parse_csv_records("a,b\r\n\"x, \"\"y\"\"\",2\r\n\"multi\nline\",3");
  ASSERT_EQ(records.size(), 3u);
  EXPECT_EQ(records[1][0], "x, \"y\"");
  EXPECT_EQ(records[2][0], "multi\nline");
  EXPECT_THROW(parse_csv_records("a\nx\"y\n"), ValidationError);
}

TEST(CsvTest, RolesFromMissingTargets) {
  const Schema schema{{ColumnSpec::numeric("x", 0)}, {ColumnSpec::numeric("y", 0)}, std::nullopt};
  const Table t = table_from_csv("x,y\n1,2\n3,\n,4\n", schema);
  EXPECT_EQ(t.role(0), RowRole::kTrain);
  EXPECT_EQ(t.role(1), RowRole::kTest);
  EXPECT_EQ(t.role(2), RowRole::kTrain);
}

TEST(CsvTest, RoundTrip) {
  const auto cfg = cli::load_config(testing::data_dir() / "movies.json");
  const Table t = load_csv(cfg.dataset_path, cfg.schema);
  Schema schema = cfg.schema;
  const Table again = table_from_csv(to_csv(t), schema);
  for (std::size_t r = 0; r < t.row_count(); ++r) {
    for (std::size_t c = 0; c < t.column_count(); ++c) EXPECT_EQ(t.cell(r, c), again.cell(r, c));
  }
}

TEST(SchemaTest, DuplicateColumnNamed) {
  const Schema schema{{ColumnSpec::numeric("x", 0)}, {ColumnSpec::numeric("x", 0)}, std::nullopt};
  try {
    schema.validate();
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("'x'"), std::string::npos);
  }
}

}  // namespace
}  // namespace jolt
