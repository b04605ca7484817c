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

#ifndef JOLT_EXPERIMENT_HPP_
#define JOLT_EXPERIMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jolt/inference.hpp"
#include "jolt/lm_backend.hpp"
#include "jolt/metrics.hpp"
#include "jolt/prompt.hpp"
#include "jolt/table.hpp"

namespace jolt {

enum class MissingMode {
  // Missing cells are left out of the prompt.
  kOmit,
  // Missing feature cells are filled with training mean/mode first.
  kImputeBaseline,
};

const char* to_string(MissingMode mode);

struct ExperimentConfig {
  PromptTemplate tmpl;
  std::vector<std::size_t> shots;
  std::vector<std::uint64_t> seeds;
  std::vector<double> mcar_fractions;
  std::vector<MissingMode> modes;
  std::size_t n_test = 0;
  SamplingConfig sampling;
  PredictMode predict_mode = PredictMode::kHybrid;
  // Rows scored concurrently within a grid cell; 0 means machine parallelism.
  std::size_t jobs = 1;

  void validate(const Table& table) const;
};

struct SeedOutcome {
  std::uint64_t seed = 0;
  std::optional<MetricSet> metrics;
  // Set when a row-level error aborted this seed.
  std::string failure;
};

struct MetricSummary {
  std::string metric;
  std::string target;
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t n = 0;
};

struct GridCell {
  std::size_t shots = 0;
  double mcar_fraction = 0.0;
  MissingMode mode = MissingMode::kOmit;
  std::vector<SeedOutcome> seeds;
  std::vector<MetricSummary> summary;

  std::size_t failures() const;
};

struct ExperimentReport {
  std::vector<GridCell> cells;

  bool partial() const;
};

// Metrics for one (shots, seed, fraction, mode) point: shot selection, test
// row selection, MCAR masking, optional baseline imputation, then prediction
// and joint scoring of every selected test row. Throws on any row error.
MetricSet evaluate_point(const LmBackend& backend, const Table& table,
                         const ExperimentConfig& cfg, std::size_t shots,
                         std::uint64_t seed, double fraction, MissingMode mode);

// The full grid, shots x fractions x modes, each over all seeds, with mean and
// sample standard deviation across the seeds that completed.
ExperimentReport run_experiment(const Table& table, const ExperimentConfig& cfg,
                                const LmBackend& backend);

// One JSON record per grid cell (per-seed metrics plus aggregates).
std::string report_jsonl(const ExperimentReport& report);

// Long format: shots,missing_fraction,mode,metric,target,mean,std,n_seeds.
std::string report_long_csv(const ExperimentReport& report);

}  // namespace jolt

#endif  // JOLT_EXPERIMENT_HPP_
