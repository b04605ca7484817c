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

#include "jolt/experiment.hpp"

#include <cstdio>
#include <map>

#include <json.hpp>

#include "jolt/errors.hpp"
#include "jolt/imputation.hpp"
#include "jolt/parallel.hpp"
#include "jolt/random.hpp"

namespace jolt {

namespace {

constexpr std::uint64_t kRowStream = 0xe7a1;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void summarize(GridCell& cell) {
  // Keyed by (metric, target) in first-seen order.
  std::vector<std::pair<std::string, std::string>> keys;
  std::map<std::pair<std::string, std::string>, std::vector<double>> values;
  auto add = [&](const std::string& metric, const std::string& target, double v) {
    auto key = std::make_pair(metric, target);
    auto [it, inserted] = values.try_emplace(key);
    if (inserted) keys.push_back(key);
    it->second.push_back(v);
  };
  for (const auto& seed : cell.seeds) {
    if (!seed.metrics) continue;
    const auto& m = *seed.metrics;
    for (const auto& [t, v] : m.mae) add("mae", t, v);
    for (const auto& [t, v] : m.acc) add("acc", t, v);
    for (const auto& [t, v] : m.auc) add("auc", t, v);
    add("nll", "", m.nll);
    add("nll_excluded", "", static_cast<double>(m.nll_excluded));
  }
  cell.summary.clear();
  for (const auto& key : keys) {
    const auto& v = values[key];
    auto [mean, sd] = mean_and_stddev(v);
    cell.summary.push_back({key.first, key.second, mean, sd, v.size()});
  }
}

}  // namespace

const char* to_string(MissingMode mode) {
  return mode == MissingMode::kOmit ? "omit" : "impute-baseline";
}

void ExperimentConfig::validate(const Table& table) const {
  tmpl.validate();
  sampling.validate();
  if (shots.empty() || seeds.empty() || mcar_fractions.empty() || modes.empty()) {
    throw ValidationError("experiment grid lists must be nonempty");
  }
  const std::size_t train = table.train_rows().size();
  for (std::size_t s : shots) {
    if (s > train) {
      throw ValidationError("shot count " + std::to_string(s) + " exceeds the " +
                            std::to_string(train) + " training rows");
    }
  }
  if (n_test == 0 || n_test > table.test_rows().size()) {
    throw ValidationError("n_test must be in [1, " +
                          std::to_string(table.test_rows().size()) + "]");
  }
  for (double f : mcar_fractions) {
    if (!(f >= 0.0 && f <= 1.0)) throw ValidationError("MCAR fractions must be in [0, 1]");
  }
  if (table.target_count() == 0) throw ValidationError("experiment needs target columns");
}

MetricSet evaluate_point(const LmBackend& backend, const Table& table,
                         const ExperimentConfig& cfg, std::size_t shots,
                         std::uint64_t seed, double fraction, MissingMode mode) {
  Table working = select_shots(table, shots, seed);
  working = select_test_rows(working, cfg.n_test, seed);
  working = mask_mcar(working, fraction, seed);
  if (mode == MissingMode::kImputeBaseline && working.missing_feature_cells() > 0) {
    working = impute_baseline(working).table;
  }

  const auto test_rows = working.test_rows();
  const auto targets = working.target_columns();
  std::vector<RowOutcome> outcomes(test_rows.size());
  parallel_for(test_rows.size(), cfg.jobs, [&](std::size_t i) {
    const std::size_t r = test_rows[i];
    try {
      const Prompt prompt = serialize(working, cfg.tmpl, r);
      SamplingConfig sampling = cfg.sampling;
      sampling.jobs = 1;
      sampling.seed = derive_seed(cfg.sampling.seed, seed, working.row_id(r));
      RowOutcome& out = outcomes[i];
      const auto& row = working.row(r);
      out.truth.assign(row.begin() + static_cast<std::ptrdiff_t>(working.feature_count()),
                       row.end());
      out.predictions =
          predict_point(backend, prompt, targets, cfg.tmpl, cfg.predict_mode, sampling);
      out.joint = joint_logprob(backend, prompt, targets, out.truth, cfg.tmpl);
    } catch (const Error& e) {
      throw Error("row " + std::to_string(working.row_id(r)) + ": " + e.what());
    }
  });
  return compute_metrics(targets, outcomes);
}

std::size_t GridCell::failures() const {
  std::size_t n = 0;
  for (const auto& s : seeds) n += !s.metrics.has_value();
  return n;
}

bool ExperimentReport::partial() const {
  for (const auto& cell : cells) {
    if (cell.failures() > 0) return true;
  }
  return false;
}

ExperimentReport run_experiment(const Table& table, const ExperimentConfig& cfg,
                                const LmBackend& backend) {
  cfg.validate(table);
  ExperimentReport report;
  for (std::size_t shots : cfg.shots) {
    for (double fraction : cfg.mcar_fractions) {
      for (MissingMode mode : cfg.modes) {
        GridCell cell{shots, fraction, mode, {}, {}};
        for (std::uint64_t seed : cfg.seeds) {
          SeedOutcome outcome{seed, std::nullopt, {}};
          try {
            outcome.metrics = evaluate_point(backend, table, cfg, shots, seed, fraction, mode);
          } catch (const Error& e) {
            outcome.failure = e.what();
          }
          cell.seeds.push_back(std::move(outcome));
        }
        summarize(cell);
        report.cells.push_back(std::move(cell));
      }
    }
  }
  return report;
}

namespace {

nlohmann::json named_values(const std::vector<NamedValue>& values) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [name, v] : values) out[name] = v;
  return out;
}

}  // namespace

std::string report_jsonl(const ExperimentReport& report) {
  std::string out;
  for (const auto& cell : report.cells) {
    nlohmann::ordered_json rec;
    rec["shots"] = cell.shots;
    rec["missing_fraction"] = cell.mcar_fraction;
    rec["mode"] = to_string(cell.mode);
    nlohmann::ordered_json seeds = nlohmann::ordered_json::array();
    for (const auto& s : cell.seeds) {
      nlohmann::ordered_json sr;
      sr["seed"] = s.seed;
      if (s.metrics) {
        sr["mae"] = named_values(s.metrics->mae);
        sr["acc"] = named_values(s.metrics->acc);
        sr["auc"] = named_values(s.metrics->auc);
        sr["nll"] = s.metrics->nll;
        sr["nll_rows"] = s.metrics->nll_rows;
        sr["nll_excluded"] = s.metrics->nll_excluded;
      } else {
        sr["failure"] = s.failure;
      }
      seeds.push_back(sr);
    }
    rec["seeds"] = seeds;
    nlohmann::ordered_json summary = nlohmann::ordered_json::array();
    for (const auto& m : cell.summary) {
      summary.push_back({{"metric", m.metric},
                         {"target", m.target},
                         {"mean", m.mean},
                         {"std", m.stddev},
                         {"n_seeds", m.n}});
    }
    rec["summary"] = summary;
    rec["failures"] = cell.failures();
    out += rec.dump();
    out += '\n';
  }
  return out;
}

std::string report_long_csv(const ExperimentReport& report) {
  std::string out = "shots,missing_fraction,mode,metric,target,mean,std,n_seeds\n";
  for (const auto& cell : report.cells) {
    for (const auto& m : cell.summary) {
      out += std::to_string(cell.shots) + ',' + format_double(cell.mcar_fraction) + ',' +
             to_string(cell.mode) + ',' + m.metric + ',';
      // Target names may contain commas.
      if (m.target.find_first_of(",\"") != std::string::npos) {
        out += '"';
        for (char c : m.target) {
          if (c == '"') out += '"';
          out += c;
        }
        out += '"';
      } else {
        out += m.target;
      }
      out += ',' + format_double(m.mean) + ',' + format_double(m.stddev) + ',' +
             std::to_string(m.n) + '\n';
    }
  }
  return out;
}

}  // namespace jolt
