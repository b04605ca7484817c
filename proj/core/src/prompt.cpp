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

#include "jolt/errors.hpp"

namespace jolt {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

void append_field(std::string& out, const std::string& header, const std::string& value,
                  const PromptTemplate& tmpl) {
  out += header;
  out += tmpl.d;
  out += value;
}

}  // namespace

void PromptTemplate::validate() const {
  if (d.empty() || s.empty() || t.empty()) {
    throw ValidationError("template separators must be nonempty");
  }
  if (d == s || d == t || s == t) {
    throw ValidationError("template separators must be pairwise distinct");
  }
}

Prompt serialize(const Table& table, const PromptTemplate& tmpl, std::size_t test_row) {
  tmpl.validate();
  if (test_row >= table.row_count() || table.role(test_row) != RowRole::kTest) {
    throw ValidationError("row " + std::to_string(test_row) + " is not a test row");
  }
  Prompt prompt;
  for (const auto& spec : table.target_columns()) prompt.target_headers.push_back(spec.name);

  std::string& text = prompt.text;
  if (!tmpl.prefix.empty()) {
    text += tmpl.prefix;
    text += tmpl.t;
  }
  for (std::size_t r : table.train_rows()) {
    bool first = true;
    for (std::size_t c = 0; c < table.column_count(); ++c) {
      auto value = render(table.cell(r, c));
      if (!value) continue;
      if (!first) text += tmpl.s;
      append_field(text, table.column(c).name, *value, tmpl);
      first = false;
    }
    if (!first) text += tmpl.t;
  }

  prompt.boundary = text.size();
  bool any_feature = false;
  for (std::size_t c = 0; c < table.feature_count(); ++c) {
    auto value = render(table.cell(test_row, c));
    if (!value) continue;
    if (any_feature) text += tmpl.s;
    append_field(text, table.column(c).name, *value, tmpl);
    any_feature = true;
  }
  if (!any_feature && tmpl.prefix.empty()) {
    throw ValidationError("test row " + std::to_string(table.row_id(test_row)) +
                          " has no observed features and the template has no prefix");
  }
  if (any_feature) {
    std::size_t keep = tmpl.s.size();
    while (keep > 0 && is_space(tmpl.s[keep - 1])) --keep;
    text.append(tmpl.s, 0, keep);
    prompt.pending = tmpl.s.substr(keep);
  }
  return prompt;
}

std::string continuation_for_target(const Prompt& prompt,
                                    std::span<const HeaderValue> targets_so_far,
                                    std::string_view next_header,
                                    const PromptTemplate& tmpl) {
  const auto& headers = prompt.target_headers;
  if (targets_so_far.size() >= headers.size()) {
    throw ValidationError("more targets given than the table declares");
  }
  for (std::size_t k = 0; k < targets_so_far.size(); ++k) {
    if (targets_so_far[k].first != headers[k]) {
      throw ValidationError("target '" + targets_so_far[k].first +
                            "' out of declared order (expected '" + headers[k] + "')");
    }
  }
  if (next_header != headers[targets_so_far.size()]) {
    bool known = false;
    for (const auto& h : headers) known = known || h == next_header;
    throw ValidationError(known ? "target '" + std::string(next_header) +
                                      "' out of declared order"
                                : "'" + std::string(next_header) +
                                      "' is not a target column");
  }
  std::string out = prompt.text;
  out += prompt.pending;
  for (const auto& [header, value] : targets_so_far) {
    append_field(out, header, value, tmpl);
    out += tmpl.s;
  }
  out += next_header;
  out += tmpl.d;
  return out;
}

ImputationView permute_for_imputation(const Table& table, std::size_t row) {
  if (row >= table.row_count()) throw ValidationError("row index out of range");
  ImputationView view;
  view.row = row;
  std::vector<std::size_t> kept;
  for (std::size_t c = 0; c < table.column_count(); ++c) {
    if (table.is_feature(c) && is_missing(table.cell(row, c))) {
      view.missing_columns.push_back(c);
    } else {
      kept.push_back(c);
    }
  }
  if (view.missing_columns.empty()) {
    throw ValidationError("row " + std::to_string(table.row_id(row)) +
                          " has no missing feature cells to impute");
  }
  view.column_order = kept;
  view.column_order.insert(view.column_order.end(), view.missing_columns.begin(),
                           view.missing_columns.end());

  std::vector<ColumnSpec> features;
  std::vector<ColumnSpec> targets;
  for (std::size_t c : kept) features.push_back(table.column(c));
  for (std::size_t c : view.missing_columns) targets.push_back(table.column(c));

  std::vector<Row> rows;
  std::vector<RowRole> roles;
  std::vector<std::size_t> ids;
  rows.reserve(table.row_count());
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    Row permuted;
    permuted.reserve(view.column_order.size());
    for (std::size_t c : view.column_order) permuted.push_back(table.cell(r, c));
    rows.push_back(std::move(permuted));
    roles.push_back(r == row ? RowRole::kTest : RowRole::kTrain);
    ids.push_back(table.row_id(r));
  }
  view.table = Table(std::move(features), std::move(targets), std::move(rows),
                     std::move(roles), std::move(ids));
  return view;
}

}  // namespace jolt
