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

#ifndef JOLT_CLI_CONFIG_HPP_
#define JOLT_CLI_CONFIG_HPP_

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "jolt/csv.hpp"
#include "jolt/experiment.hpp"
#include "jolt/inference.hpp"
#include "jolt/lm_backend.hpp"
#include "jolt/prompt.hpp"

namespace jolt::cli {

enum class BackendKind { kMock, kHttp };

struct BackendConfig {
  BackendKind kind = BackendKind::kMock;
  std::string url;
  std::filesystem::path mock_spec;
  std::size_t max_in_flight = 4;
};

struct ExperimentGrid {
  std::vector<std::size_t> shots;
  std::vector<std::uint64_t> seeds;
  std::vector<double> mcar_fractions = {0.0};
  std::vector<MissingMode> modes = {MissingMode::kOmit};
  std::size_t n_test = 0;
};

// Config document (JSON). Relative paths resolve against the document's
// directory. Template strings accept \n, \t, \r and \\ escapes.
//
// {
//   "dataset": {"path": "rows.csv", "train_rows": 10,
//               "features": [{"name": "x", "kind": "numeric", "precision": 1}],
//               "targets": [{"name": "y", "kind": "categorical",
//                            "classes": ["a", "b"]}]},
//   "template": {"prefix": "...", "d": ": ", "s": "; ", "t": "\\n"},
//   "backend": {"kind": "mock", "mock_spec": "mock.json"}
//            | {"kind": "http", "url": "http://127.0.0.1:8000", "max_in_flight": 4},
//   "sampling": {"n_samples": 100, "top_p": 0.9, "temperature": 1.0,
//                "max_new_tokens": 64, "max_attempts_per_sample": 20,
//                "seed": 0, "interval_level": 0.95},
//   "predict": {"mode": "hybrid"},
//   "experiment": {"shots": [5, 10], "seeds": [0, 1, 2],
//                  "mcar_fractions": [0.0, 0.2], "modes": ["omit", "impute-baseline"],
//                  "n_test": 20}
// }
struct CliConfig {
  std::filesystem::path dataset_path;
  Schema schema;
  PromptTemplate tmpl;
  BackendConfig backend;
  SamplingConfig sampling;
  PredictMode predict_mode = PredictMode::kHybrid;
  std::optional<ExperimentGrid> experiment;
};

// Throws ValidationError on unknown keys, wrong types or invalid values.
CliConfig parse_config(std::string_view text, const std::filesystem::path& base_dir);
CliConfig load_config(const std::filesystem::path& path);

// Decodes \n, \t, \r and \; any other escape is an error.
std::string decode_escapes(std::string_view text);

PredictMode parse_predict_mode(std::string_view text);
MissingMode parse_missing_mode(std::string_view text);

std::unique_ptr<LmBackend> make_backend(const BackendConfig& config);

}  // namespace jolt::cli

#endif  // JOLT_CLI_CONFIG_HPP_
