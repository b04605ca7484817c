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

#include "jolt/metrics.hpp"

#include <cmath>

#include "jolt/errors.hpp"
#include "jolt/lm_backend.hpp"

namespace jolt {

double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw ValidationError("AUC needs one score per label");
  }
  std::vector<double> pos;
  std::vector<double> neg;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    (labels[i] ? pos : neg).push_back(scores[i]);
  }
  if (pos.empty() || neg.empty()) {
    throw ValidationError("AUC needs both positive and negative labels");
  }
  double wins = 0.0;
  for (double p : pos) {
    for (double n : neg) {
      if (p > n) {
        wins += 1.0;
      } else if (p == n) {
        wins += 0.5;
      }
    }
  }
  return wins / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

std::pair<double, double> mean_and_stddev(std::span<const double> values) {
  if (values.empty()) return {0.0, 0.0};
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

MetricSet compute_metrics(std::span<const ColumnSpec> targets,
                          std::span<const RowOutcome> rows) {
  if (rows.empty()) throw ValidationError("no rows to score");
  for (const auto& row : rows) {
    if (row.predictions.size() != targets.size() || row.truth.size() != targets.size()) {
      throw ValidationError("prediction, truth and target lists are misaligned");
    }
  }
  MetricSet out;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const auto& spec = targets[k];
    if (spec.is_numeric()) {
      double sum = 0.0;
      for (const auto& row : rows) {
        const auto* truth = std::get_if<Decimal>(&row.truth[k]);
        if (!truth || !row.predictions[k].value) {
          throw ValidationError("numeric target '" + spec.name + "' lacks a value");
        }
        sum += std::abs(*row.predictions[k].value - truth->to_double());
      }
      out.mae.emplace_back(spec.name, sum / static_cast<double>(rows.size()));
    } else if (spec.is_categorical()) {
      std::size_t hits = 0;
      for (const auto& row : rows) {
        const auto* truth = std::get_if<Category>(&row.truth[k]);
        if (!truth) throw ValidationError("categorical target '" + spec.name + "' lacks truth");
        hits += row.predictions[k].point == truth->label;
      }
      out.acc.emplace_back(spec.name,
                           static_cast<double>(hits) / static_cast<double>(rows.size()));

      double auc_sum = 0.0;
      std::size_t auc_classes = 0;
      for (std::size_t c = 0; c < spec.classes.size(); ++c) {
        std::vector<double> scores;
        std::vector<int> labels;
        bool have_pos = false;
        bool have_neg = false;
        for (const auto& row : rows) {
          const auto& dist = row.joint.distributions.size() > k
                                 ? row.joint.distributions[k]
                                 : row.predictions[k].distribution;
          if (!dist) throw ValidationError("no class distribution for '" + spec.name + "'");
          scores.push_back(dist->prob(c));
          const int label = std::get<Category>(row.truth[k]).label == spec.classes[c];
          labels.push_back(label);
          have_pos = have_pos || label;
          have_neg = have_neg || !label;
        }
        if (!have_pos || !have_neg) continue;
        auc_sum += auc(scores, labels);
        ++auc_classes;
      }
      if (auc_classes > 0) {
        out.auc.emplace_back(spec.name, auc_sum / static_cast<double>(auc_classes));
      }
    }
  }
  double total = 0.0;
  for (const auto& row : rows) {
    if (row.joint.joint_logprob == kNegInf) {
      ++out.nll_excluded;
      continue;
    }
    total += row.joint.joint_logprob;
    ++out.nll_rows;
  }
  out.nll = out.nll_rows ? -total / static_cast<double>(out.nll_rows) : 0.0;
  return out;
}

}  // namespace jolt
