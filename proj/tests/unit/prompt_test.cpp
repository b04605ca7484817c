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

#include "jolt/prompt.hpp"

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "jolt/errors.hpp"

namespace jolt {
namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

Table five_by_four_table() {
  std::vector<ColumnSpec> features;
  for (int c = 1; c <= 4; ++c) features.push_back(ColumnSpec::numeric("X" + std::to_string(c), 0));
  std::vector<Row> rows;
  std::vector<RowRole> roles;
  for (int r = 0; r < 5; ++r) {
    Row row;
    for (int c = 0; c < 4; ++c) row.push_back(Decimal(r * 4 + c, 0));
    row.push_back(r < 4 ? CellValue(Decimal(r, 0)) : CellValue(Missing{}));
    row.push_back(r < 4 ? CellValue(Category{"b"}) : CellValue(Missing{}));
    rows.push_back(row);
    roles.push_back(r < 4 ? RowRole::kTrain : RowRole::kTest);
  }
  return Table(features, {ColumnSpec::numeric("Y1", 0), ColumnSpec::categorical("Y2", {"a", "b"})},
               rows, roles);
}

TEST(SerializeTest, SamplePromptsByteExact) {
  EXPECT_EQ(testing::fixture_prompt("wine"), testing::kWinePrompt);
  EXPECT_EQ(testing::fixture_prompt("movies"), testing::kMoviesPrompt);
  EXPECT_EQ(testing::fixture_prompt("medals"), testing::kMedalsPrompt);
  EXPECT_EQ(testing::fixture_prompt("paris"), testing::kParisImputationPrompt);
}

TEST(SerializeTest, MissingCellsAreOmitted) {
  const Table masked = mask_mcar(five_by_four_table(), 0.4, 5);
  ASSERT_EQ(masked.missing_feature_cells(), 8u);
  const PromptTemplate tmpl{"", ": ", "; ", "\n"};
  const Prompt p = serialize(masked, tmpl, 4);
  EXPECT_EQ(count(p.text, "X"), 12u);
  EXPECT_EQ(count(p.text, "Y1: "), 4u);
  EXPECT_EQ(count(p.text, "Y2: "), 4u);
  EXPECT_EQ(count(p.text, "; ; "), 0u);
  EXPECT_EQ(count(p.text, "\n; "), 0u);
  EXPECT_EQ(count(p.text, "; \n"), 0u);
  EXPECT_EQ(count(p.text, "\n\n"), 0u);
  EXPECT_NE(p.text.substr(0, 2), "; ");
}

TEST(SerializeTest, ZeroShot) {
  const Table t({ColumnSpec::numeric("A", 0)}, {ColumnSpec::numeric("Y", 0)},
                {{Decimal(1, 0), Missing{}}}, {RowRole::kTest});
  const PromptTemplate tmpl{"p", ": ", "; ", "\n"};
  const Prompt p = serialize(t, tmpl, 0);
  EXPECT_EQ(p.text, "p\nA: 1;");
  EXPECT_EQ(p.pending, " ");
  EXPECT_EQ(p.boundary, 2u);
  EXPECT_EQ(continuation_for_target(p, {}, "Y", tmpl), "p\nA: 1; Y: ");
}

TEST(SerializeTest, EmptyConditioningIsAnError) {
  const Table t({ColumnSpec::numeric("A", 0)}, {ColumnSpec::numeric("Y", 0)},
                {{Missing{}, Missing{}}}, {RowRole::kTest});
  EXPECT_THROW(serialize(t, PromptTemplate{}, 0), ValidationError);
  const Prompt p = serialize(t, PromptTemplate{"prefix only", ": ", "; ", "\n"}, 0);
  EXPECT_EQ(continuation_for_target(p, {}, "Y", PromptTemplate{"prefix only", ": ", "; ", "\n"}),
            "prefix only\nY: ");
}

TEST(SerializeTest, TrainRowRejected) {
  const Table t = five_by_four_table();
  EXPECT_THROW(serialize(t, PromptTemplate{}, 0), ValidationError);
}

TEST(SerializeTest, TemplateValidation) {
  EXPECT_THROW(PromptTemplate({"", "", ";", "\n"}).validate(), ValidationError);
  EXPECT_THROW(PromptTemplate({"", ";", ";", "\n"}).validate(), ValidationError);
}

TEST(ContinuationTest, EquationTwoFactors) {
  const auto cfg_prompt = testing::fixture_prompt("wine");
  Prompt p;
  p.text = cfg_prompt;
  p.pending = " ";
  p.target_headers = {"alcohol", "quality"};
  const PromptTemplate tmpl{"", ": ", "; ", "\n"};
  EXPECT_EQ(continuation_for_target(p, {}, "alcohol", tmpl), cfg_prompt + " alcohol: ");
  const std::vector<HeaderValue> so_far = {{"alcohol", "11.0"}};
  const std::string second = continuation_for_target(p, so_far, "quality", tmpl);
  EXPECT_EQ(second, cfg_prompt + " alcohol: 11.0; quality: ");
  EXPECT_NE(second.find("color: white; alcohol: 11.0; quality: "), std::string::npos);
}

TEST(ContinuationTest, OrderAndHeaderErrors) {
  Prompt p;
  p.text = "x: 1;";
  p.pending = " ";
  p.target_headers = {"a", "b"};
  const PromptTemplate tmpl{"", ": ", "; ", "\n"};
  EXPECT_THROW(continuation_for_target(p, {}, "b", tmpl), ValidationError);
  EXPECT_THROW(continuation_for_target(p, {}, "x", tmpl), ValidationError);
  const std::vector<HeaderValue> wrong = {{"b", "1"}};
  EXPECT_THROW(continuation_for_target(p, wrong, "a", tmpl), ValidationError);
}

TEST(PermuteTest, ObservedColumnsFirst) {
  std::vector<ColumnSpec> features;
  for (int c = 1; c <= 5; ++c) features.push_back(ColumnSpec::numeric("X" + std::to_string(c), 0));
  const Table t(features, {},
                {{Decimal(1, 0), Decimal(2, 0), Decimal(3, 0), Decimal(4, 0), Decimal(5, 0)},
                 {Missing{}, Decimal(2, 0), Decimal(3, 0), Missing{}, Decimal(5, 0)}},
                {RowRole::kTrain, RowRole::kTrain});
  const ImputationView v = permute_for_imputation(t, 1);
  EXPECT_EQ(v.column_order, (std::vector<std::size_t>{1, 2, 4, 0, 3}));
  EXPECT_EQ(v.missing_columns, (std::vector<std::size_t>{0, 3}));
  ASSERT_EQ(v.table.target_count(), 2u);
  EXPECT_EQ(v.table.target_columns()[0].name, "X1");
  EXPECT_EQ(v.table.target_columns()[1].name, "X4");
  EXPECT_EQ(v.table.role(v.row), RowRole::kTest);
  EXPECT_EQ(v.table.role(0), RowRole::kTrain);
  const Prompt p = serialize(v.table, PromptTemplate{}, v.row);
  EXPECT_EQ(p.text, "X2: 2; X3: 3; X5: 5; X1: 1; X4: 4\nX2: 2; X3: 3; X5: 5;");
}

TEST(PermuteTest, NothingMissing) {
  const Table t({ColumnSpec::numeric("X", 0)}, {}, {{Decimal(1, 0)}}, {RowRole::kTrain});
  EXPECT_THROW(permute_for_imputation(t, 0), ValidationError);
}

TEST(PermuteTest, EverythingMissing) {
  const Table t({ColumnSpec::numeric("X1", 0), ColumnSpec::numeric("X2", 0)}, {},
                {{Decimal(1, 0), Decimal(2, 0)}, {Missing{}, Missing{}}},
                {RowRole::kTrain, RowRole::kTrain});
  const ImputationView v = permute_for_imputation(t, 1);
  EXPECT_EQ(v.table.feature_count(), 0u);
  EXPECT_EQ(v.missing_columns, (std::vector<std::size_t>{0, 1}));
  EXPECT_THROW(serialize(v.table, PromptTemplate{}, v.row), ValidationError);
  const PromptTemplate with_prefix{"medals", ": ", "; ", "\n"};
  EXPECT_EQ(serialize(v.table, with_prefix, v.row).text, "medals\nX1: 1; X2: 2\n");
}

TEST(SerializeTest, NestedShotsArePrefixMonotone) {
  const Table t = testing::harness_table(20, 1, 3);
  const PromptTemplate tmpl = testing::harness_template();
  const Table five = select_shots(t, 5, 4);
  const Table six = select_shots(t, 6, 4);
  const Prompt p5 = serialize(five, tmpl, five.test_rows()[0]);
  const Prompt p6 = serialize(six, tmpl, six.test_rows()[0]);
  const std::string head = p5.text.substr(0, p5.boundary);
  const std::string tail = p5.text.substr(p5.boundary);
  EXPECT_EQ(p6.text.substr(0, head.size()), head);
  EXPECT_EQ(p6.text.substr(p6.text.size() - tail.size()), tail);
  EXPECT_EQ(count(p6.text, "\n"), count(p5.text, "\n") + 1);
}

TEST(SerializeTest, Deterministic) {
  const Table t = mask_mcar(testing::harness_table(10, 2, 1), 0.3, 2);
  const PromptTemplate tmpl = testing::harness_template();
  EXPECT_EQ(serialize(t, tmpl, 10).text, serialize(t, tmpl, 10).text);
}

}  // namespace
}  // namespace jolt
