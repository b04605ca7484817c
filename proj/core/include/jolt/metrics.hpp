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

#ifndef JOLT_METRICS_HPP_
#define JOLT_METRICS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jolt/inference.hpp"
#include "jolt/table.hpp"

namespace jolt {

// Mann-Whitney AUC: the fraction of (positive, negative) pairs where the
// positive scores higher, ties counting one half. Throws ValidationError
// unless both labels occur.
double auc(std::span<const double> scores, std::span<const int> labels);

using NamedValue = std::pair<std::string, double>;

struct MetricSet {
  std::vector<NamedValue> mae;  // per numeric target
  std::vector<NamedValue> acc;  // per categorical target
  // Macro-averaged one-vs-rest AUC per categorical target; classes absent
  // from (or covering all of) the truth are skipped, and targets with no
  // scorable class are left out.
  std::vector<NamedValue> auc;
  // Mean joint negative log-likelihood over rows with a finite joint.
  double nll = 0.0;
  std::size_t nll_rows = 0;
  // Rows whose joint log-probability was -inf.
  std::size_t nll_excluded = 0;

  friend bool operator==(const MetricSet&, const MetricSet&) = default;
};

// Everything known about one scored test row.
struct RowOutcome {
  std::vector<TargetPrediction> predictions;
  JointResult joint;
  std::vector<CellValue> truth;
};

MetricSet compute_metrics(std::span<const ColumnSpec> targets,
                          std::span<const RowOutcome> rows);

// Sample mean and (n - 1) standard deviation; the deviation is 0 when n < 2.
std::pair<double, double> mean_and_stddev(std::span<const double> values);

}  // namespace jolt

#endif  // JOLT_METRICS_HPP_
