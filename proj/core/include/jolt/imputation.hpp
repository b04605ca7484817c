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

#ifndef JOLT_IMPUTATION_HPP_
#define JOLT_IMPUTATION_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jolt/inference.hpp"
#include "jolt/lm_backend.hpp"
#include "jolt/prompt.hpp"
#include "jolt/table.hpp"

namespace jolt {

struct CellProvenance {
  std::size_t row_id = 0;
  std::string column;
  // "llm" or "mean-mode".
  std::string method;
  std::string point;
  std::optional<std::pair<double, double>> interval;
  std::optional<CategoricalDist> distribution;
};

struct ImputedTable {
  Table table;
  std::vector<CellProvenance> provenance;
};

struct ImputeConfig {
  SamplingConfig sampling;
  // kHybrid: argmax for categorical columns, sampling median for numeric.
  PredictMode mode = PredictMode::kHybrid;
  // Rows imputed concurrently; 0 means machine parallelism.
  std::size_t jobs = 1;
};

// One prompt per incomplete row, conditioned on every other row of the
// original table. Missing values of a row are predicted jointly in column
// order, each conditioning the next. Only feature cells are imputed.
ImputedTable impute_llm(const LmBackend& backend, const Table& table,
                        const PromptTemplate& tmpl, const ImputeConfig& cfg);

// Column mean (numeric, rounded half away from zero at the column precision)
// or mode (categorical and text; first class in declared order, or first seen
// value, on ties) of the observed training rows.
ImputedTable impute_baseline(const Table& table);

// Mean absolute error over the imputed numeric cells of `columns` (all
// numeric columns when empty), against the same coordinates in `truth`.
double imputation_mae(const ImputedTable& imputed, const Table& truth,
                      std::span<const std::string> columns = {});

// Provenance as JSON lines, one record per imputed cell.
std::string provenance_jsonl(const ImputedTable& imputed);

}  // namespace jolt

#endif  // JOLT_IMPUTATION_HPP_
