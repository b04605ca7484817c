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

#include "jolt/imputation.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

#include "jolt/errors.hpp"
#include "jolt/parallel.hpp"
#include "jolt/random.hpp"

namespace jolt {

namespace {

constexpr std::uint64_t kImputeStream = 0x1a7e;

std::vector<std::size_t> incomplete_rows(const Table& table) {
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    for (std::size_t c = 0; c < table.feature_count(); ++c) {
      if (is_missing(table.cell(r, c))) {
        rows.push_back(r);
        break;
      }
    }
  }
  return rows;
}

CellValue to_cell(const ColumnSpec& spec, const std::string& point) {
  switch (spec.kind) {
    case ColumnKind::kNumeric: {
      auto d = Decimal::parse(point, spec.precision);
      if (!d) throw ValidationError("imputed value '" + point + "' is not a number");
      return *d;
    }
    case ColumnKind::kCategorical:
      return Category{point};
    case ColumnKind::kText:
      return Text{point};
  }
  return Missing{};
}

// Integer mean of scaled decimals, rounded half away from zero.
std::int64_t rounded_mean(__int128 sum, std::int64_t count) {
  const __int128 twice = 2 * sum + (sum < 0 ? -count : count);
  return static_cast<std::int64_t>(twice / (2 * static_cast<__int128>(count)));
}

}  // namespace

ImputedTable impute_llm(const LmBackend& backend, const Table& table,
                        const PromptTemplate& tmpl, const ImputeConfig& cfg) {
  const auto rows = incomplete_rows(table);
  if (rows.empty()) throw ValidationError("table has no missing feature cells to impute");

  std::vector<std::vector<Table::CellUpdate>> updates(rows.size());
  std::vector<std::vector<CellProvenance>> provenance(rows.size());
  parallel_for(rows.size(), cfg.jobs, [&](std::size_t i) {
    const std::size_t r = rows[i];
    try {
      const auto view = permute_for_imputation(table, r);
      const Prompt prompt = serialize(view.table, tmpl, view.row);
      SamplingConfig sampling = cfg.sampling;
      sampling.seed = derive_seed(cfg.sampling.seed, kImputeStream, table.row_id(r));
      const auto predictions = predict_point(backend, prompt, view.table.target_columns(),
                                             tmpl, cfg.mode, sampling);
      for (std::size_t k = 0; k < view.missing_columns.size(); ++k) {
        const std::size_t c = view.missing_columns[k];
        const auto& p = predictions[k];
        updates[i].push_back({r, c, to_cell(table.column(c), p.point)});
        provenance[i].push_back(
            {table.row_id(r), table.column(c).name, "llm", p.point, p.interval, p.distribution});
      }
    } catch (const SamplingError& e) {
      throw SamplingError("row " + std::to_string(table.row_id(r)) + ": " + e.what(),
                          e.acceptance_rate());
    } catch (const BackendError& e) {
      throw BackendError("row " + std::to_string(table.row_id(r)) + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError("row " + std::to_string(table.row_id(r)) + ": " + e.what());
    }
  });

  ImputedTable out;
  std::vector<Table::CellUpdate> all;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    all.insert(all.end(), updates[i].begin(), updates[i].end());
    out.provenance.insert(out.provenance.end(), provenance[i].begin(), provenance[i].end());
  }
  out.table = table.with_cells(all);
  return out;
}

ImputedTable impute_baseline(const Table& table) {
  const auto rows = incomplete_rows(table);
  if (rows.empty()) throw ValidationError("table has no missing feature cells to impute");
  const auto train = table.train_rows();

  std::vector<std::optional<CellValue>> fill(table.feature_count());
  for (std::size_t c = 0; c < table.feature_count(); ++c) {
    bool needed = false;
    for (std::size_t r : rows) needed = needed || is_missing(table.cell(r, c));
    if (!needed) continue;
    const auto& spec = table.column(c);
    std::vector<const CellValue*> observed;
    for (std::size_t r : train) {
      if (!is_missing(table.cell(r, c))) observed.push_back(&table.cell(r, c));
    }
    if (observed.empty()) {
      throw ValidationError("column '" + spec.name +
                            "' has no observed training values to impute from");
    }
    switch (spec.kind) {
      case ColumnKind::kNumeric: {
        __int128 sum = 0;
        for (const auto* v : observed) sum += std::get<Decimal>(*v).scaled();
        fill[c] = Decimal(rounded_mean(sum, static_cast<std::int64_t>(observed.size())),
                          spec.precision);
        break;
      }
      case ColumnKind::kCategorical: {
        std::vector<std::size_t> counts(spec.classes.size(), 0);
        for (const auto* v : observed) ++counts[*spec.class_index(std::get<Category>(*v).label)];
        const auto best = std::max_element(counts.begin(), counts.end()) - counts.begin();
        fill[c] = Category{spec.classes[static_cast<std::size_t>(best)]};
        break;
      }
      case ColumnKind::kText: {
        std::vector<std::pair<std::string, std::size_t>> counts;
        for (const auto* v : observed) {
          const auto& s = std::get<Text>(*v).content;
          auto it = std::find_if(counts.begin(), counts.end(),
                                 [&](const auto& e) { return e.first == s; });
          if (it == counts.end()) {
            counts.emplace_back(s, 1);
          } else {
            ++it->second;
          }
        }
        auto best = counts.begin();
        for (auto it = counts.begin(); it != counts.end(); ++it) {
          if (it->second > best->second) best = it;
        }
        fill[c] = Text{best->first};
        break;
      }
    }
  }

  ImputedTable out;
  std::vector<Table::CellUpdate> updates;
  for (std::size_t r : rows) {
    for (std::size_t c = 0; c < table.feature_count(); ++c) {
      if (!is_missing(table.cell(r, c))) continue;
      updates.push_back({r, c, *fill[c]});
      out.provenance.push_back({table.row_id(r), table.column(c).name, "mean-mode",
                                *render(*fill[c]), std::nullopt, std::nullopt});
    }
  }
  out.table = table.with_cells(updates);
  return out;
}

double imputation_mae(const ImputedTable& imputed, const Table& truth,
                      std::span<const std::string> columns) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& cell : imputed.provenance) {
    if (!columns.empty() &&
        std::find(columns.begin(), columns.end(), cell.column) == columns.end()) {
      continue;
    }
    const auto c = imputed.table.find_column(cell.column);
    if (!c || !imputed.table.column(*c).is_numeric()) continue;
    const auto tc = truth.find_column(cell.column);
    const auto tr = truth.find_row_id(cell.row_id);
    const auto ir = imputed.table.find_row_id(cell.row_id);
    if (!tc || !tr || !ir) {
      throw ValidationError("imputed cell (row " + std::to_string(cell.row_id) + ", '" +
                            cell.column + "') has no counterpart in the truth table");
    }
    const auto* expected = std::get_if<Decimal>(&truth.cell(*tr, *tc));
    const auto* got = std::get_if<Decimal>(&imputed.table.cell(*ir, *c));
    if (!expected || !got) {
      throw ValidationError("truth is not observed at (row " + std::to_string(cell.row_id) +
                            ", '" + cell.column + "')");
    }
    sum += std::abs(got->to_double() - expected->to_double());
    ++n;
  }
  if (n == 0) throw ValidationError("no imputed numeric cells to score");
  return sum / static_cast<double>(n);
}

std::string provenance_jsonl(const ImputedTable& imputed) {
  std::string out;
  for (const auto& cell : imputed.provenance) {
    nlohmann::json rec;
    rec["row_id"] = cell.row_id;
    rec["column"] = cell.column;
    rec["method"] = cell.method;
    rec["point"] = cell.point;
    if (cell.interval) rec["interval"] = {cell.interval->first, cell.interval->second};
    if (cell.distribution) {
      nlohmann::json dist = nlohmann::json::object();
      for (std::size_t i = 0; i < cell.distribution->classes.size(); ++i) {
        dist[cell.distribution->classes[i]] = cell.distribution->prob(i);
      }
      rec["distribution"] = dist;
    }
    out += rec.dump();
    out += '\n';
  }
  return out;
}

}  // namespace jolt
