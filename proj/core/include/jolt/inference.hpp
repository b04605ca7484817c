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

#ifndef JOLT_INFERENCE_HPP_
#define JOLT_INFERENCE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jolt/lm_backend.hpp"
#include "jolt/prompt.hpp"
#include "jolt/table.hpp"

namespace jolt {

// Normalized distribution over a class set, in natural-log space.
struct CategoricalDist {
  std::vector<std::string> classes;
  std::vector<double> logprob;

  // First class with the highest probability.
  std::size_t argmax() const;
  double prob(std::size_t i) const;
  std::optional<std::size_t> index_of(std::string_view label) const;
};

struct NumericalLogPdf {
  std::string value;
  int precision = 0;
  // Log mass of the width-10^-precision bin containing `value`.
  double log_pmf = 0.0;
  // log_pmf + precision * ln 10.
  double log_pdf = 0.0;
};

struct JointResult {
  std::vector<double> per_target_logprob;
  double joint_logprob = 0.0;
  // Normalized class distribution scored for each categorical target
  // (nullopt for numeric targets).
  std::vector<std::optional<CategoricalDist>> distributions;
};

// Shifts log masses so that they exponentiate to a distribution. All -inf
// input throws ValidationError.
std::vector<double> log_normalize(std::span<const double> log_masses);

// log p(class | conditioning) for every class, each the sum of its tokens'
// log-probabilities, then normalized across classes with log-sum-exp. Throws
// ValidationError when no class receives any mass.
CategoricalDist categorical_logprobs(const LmBackend& backend,
                                     std::string_view conditioning,
                                     std::span<const std::string> classes);

// Chain-rule log mass of `value`'s tokens with every position restricted to
// the numeric token set (digits, '-', '.', and the template's s and t), then
// the bin-width correction. "-0.0"-style zeros are scored as "0.0".
NumericalLogPdf numerical_logpdf(const LmBackend& backend, std::string_view conditioning,
                                 std::string_view value, int precision,
                                 const PromptTemplate& tmpl);

// Product-rule joint log-probability of the ground-truth targets, each factor
// conditioned on the earlier ground-truth targets (teacher forcing).
JointResult joint_logprob(const LmBackend& backend, const Prompt& prompt,
                          std::span<const ColumnSpec> targets,
                          std::span<const CellValue> truth, const PromptTemplate& tmpl);

struct SamplingConfig {
  std::size_t n_samples = 100;
  double top_p = 0.9;
  double temperature = 1.0;
  int max_new_tokens = 64;
  std::size_t max_attempts_per_sample = 20;
  std::uint64_t seed = 0;
  // Central interval level for numeric targets.
  double interval_level = 0.95;
  // Concurrent sample slots; 0 means machine parallelism.
  std::size_t jobs = 1;

  void validate() const;
};

struct TargetSummary {
  ColumnKind kind = ColumnKind::kNumeric;
  // Numeric targets.
  std::vector<double> values;
  double median = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  // Categorical targets: frequency per declared class and the modal class
  // (first class in declared order on ties).
  std::vector<double> frequencies;
  std::size_t mode = 0;
  // Text targets: most frequent sampled string (first seen on ties).
  std::string modal_text;
};

struct SampleSummary {
  // Accepted samples, parsed per target.
  std::vector<std::vector<std::string>> raw;
  std::vector<TargetSummary> targets;
  std::size_t attempts = 0;
  std::size_t accepted = 0;
  double acceptance_rate = 0.0;
};

// Splits a generated continuation "v1 s H2 d v2 ... vT" into the T target
// values, or nullopt when it does not have that shape or a value is not a
// valid number / known class. A trailing `s` after the last value is allowed.
std::optional<std::vector<std::string>> parse_sample(std::string_view text,
                                                     std::span<const ColumnSpec> targets,
                                                     const PromptTemplate& tmpl);

// Linear-interpolation quantile of already sorted values, q in [0, 1].
double empirical_quantile(std::span<const double> sorted, double q);

// Draws cfg.n_samples accepted samples of all targets after
// "prompt ... Y1 d". Slot i, attempt a uses seed derive_seed(cfg.seed, i, a),
// so results do not depend on cfg.jobs. Throws SamplingError when any slot
// exhausts max_attempts_per_sample.
SampleSummary rejection_sample(const LmBackend& backend, const Prompt& prompt,
                               std::span<const ColumnSpec> targets,
                               const PromptTemplate& tmpl, const SamplingConfig& cfg);

// Same, from an explicit conditioning string. With `stop_at_field` the
// generation also stops at `s`, for sampling a single target in the middle of
// a row.
SampleSummary sample_from(const LmBackend& backend, const std::string& conditioning,
                          std::span<const ColumnSpec> targets, const PromptTemplate& tmpl,
                          const SamplingConfig& cfg, bool stop_at_field = false);

SampleSummary summarize_samples(std::vector<std::vector<std::string>> accepted,
                                std::span<const ColumnSpec> targets,
                                double interval_level);

enum class PredictMode {
  // Argmax of the class distribution per target, chained on predictions.
  // Categorical targets only.
  kLogits,
  // One rejection-sampling pass over all targets.
  kSampling,
  // Argmax for categorical targets, per-target sampling median for numeric
  // ones, chained on predictions.
  kHybrid,
};

struct TargetPrediction {
  // Label, or the numeric point rendered at the column precision.
  std::string point;
  std::optional<double> value;
  std::optional<std::pair<double, double>> interval;
  std::optional<CategoricalDist> distribution;
  std::optional<double> acceptance_rate;
};

std::vector<TargetPrediction> predict_point(const LmBackend& backend, const Prompt& prompt,
                                            std::span<const ColumnSpec> targets,
                                            const PromptTemplate& tmpl, PredictMode mode,
                                            const SamplingConfig& cfg);

const char* to_string(PredictMode mode);

}  // namespace jolt

#endif  // JOLT_INFERENCE_HPP_
