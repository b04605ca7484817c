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

#ifndef JOLT_PROMPT_HPP_
#define JOLT_PROMPT_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jolt/table.hpp"

namespace jolt {

// Side-information prefix plus the three separators: `d` between a header
// and its value, `s` between fields, `t` between examples.
struct PromptTemplate {
  std::string prefix;
  std::string d = ": ";
  std::string s = "; ";
  std::string t = "\n";

  // d, s, t nonempty and pairwise distinct.
  void validate() const;
};

struct Prompt {
  // Prefix, training rows and the test row's observed features. The test
  // fragment ends with `s` minus its trailing whitespace.
  std::string text;
  // Offset in `text` where the test-row fragment begins.
  std::size_t boundary = 0;
  // Whitespace trimmed from the final `s`; it precedes the first target
  // header in every conditioning string.
  std::string pending;
  // Target headers in declared order.
  std::vector<std::string> target_headers;
};

// Serializes every training row of `table` (features then targets, Missing
// cells omitted) followed by the observed features of `test_row`.
Prompt serialize(const Table& table, const PromptTemplate& tmpl, std::size_t test_row);

using HeaderValue = std::pair<std::string, std::string>;

// prompt ⊕ (header d value s)* ⊕ next_header d: the text that conditions the
// next target's value. Headers must follow the declared target order.
std::string continuation_for_target(const Prompt& prompt,
                                    std::span<const HeaderValue> targets_so_far,
                                    std::string_view next_header,
                                    const PromptTemplate& tmpl);

// Column layout for imputing one row: the row's observed columns first, then
// its missing feature columns, each group in original order.
struct ImputationView {
  // Observed columns become features and missing feature columns become
  // targets; `row` is the only test row, every other row is a training row.
  Table table;
  std::size_t row = 0;
  // Original column index of each view column.
  std::vector<std::size_t> column_order;
  // Original indices of the columns to impute, in prediction order.
  std::vector<std::size_t> missing_columns;
};

// Target cells that are Missing in `row` are not imputed; they stay in the
// observed group (and are omitted from that row's fragment as usual).
ImputationView permute_for_imputation(const Table& table, std::size_t row);

}  // namespace jolt

#endif  // JOLT_PROMPT_HPP_
