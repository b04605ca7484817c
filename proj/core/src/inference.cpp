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

#include "jolt/inference.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "jolt/decimal.hpp"
#include "jolt/errors.hpp"
#include "jolt/parallel.hpp"
#include "jolt/random.hpp"
#include "jolt/tokenizer.hpp"

namespace jolt {

namespace {

constexpr std::uint64_t kHybridStream = 0x4b1d;

double parse_double(std::string_view text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ValidationError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::string canonical_number(std::string_view value) {
  if (!value.empty() && value.front() == '-' &&
      value.find_first_not_of("-0.") == std::string_view::npos) {
    return std::string(value.substr(1));
  }
  return std::string(value);
}

std::vector<TokenId> allowed_numeric_ids(const LmBackend& backend,
                                         const PromptTemplate& tmpl) {
  std::set<TokenId> ids;
  for (const auto& a : default_numeric_allowed(tmpl.s, tmpl.t)) {
    for (TokenId id : backend.tokenize(a)) ids.insert(id);
  }
  return {ids.begin(), ids.end()};
}

std::string_view trim_trailing_space(std::string_view text) {
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  return text;
}

bool valid_value(const ColumnSpec& spec, std::string_view value) {
  switch (spec.kind) {
    case ColumnKind::kNumeric:
      return is_plain_number(value);
    case ColumnKind::kCategorical:
      return spec.class_index(value).has_value();
    case ColumnKind::kText:
      return !value.empty();
  }
  return false;
}

std::string truth_text(const ColumnSpec& spec, const CellValue& value) {
  auto text = render(value);
  if (!text) throw ValidationError("target '" + spec.name + "' has no ground truth");
  return *text;
}

}  // namespace

std::size_t CategoricalDist::argmax() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < logprob.size(); ++i) {
    if (logprob[i] > logprob[best]) best = i;
  }
  return best;
}

double CategoricalDist::prob(std::size_t i) const { return std::exp(logprob.at(i)); }

std::optional<std::size_t> CategoricalDist::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i] == label) return i;
  }
  return std::nullopt;
}

std::vector<double> log_normalize(std::span<const double> log_masses) {
  if (log_masses.empty()) throw ValidationError("cannot normalize an empty class set");
  const double peak = *std::max_element(log_masses.begin(), log_masses.end());
  if (peak == kNegInf) throw ValidationError("no class receives any probability mass");
  double sum = 0.0;
  for (double m : log_masses) sum += std::exp(m - peak);
  const double log_z = peak + std::log(sum);
  std::vector<double> out;
  out.reserve(log_masses.size());
  for (double m : log_masses) out.push_back(m - log_z);
  return out;
}

CategoricalDist categorical_logprobs(const LmBackend& backend,
                                     std::string_view conditioning,
                                     std::span<const std::string> classes) {
  if (classes.empty()) throw ValidationError("class set is empty");
  std::vector<double> raw;
  raw.reserve(classes.size());
  for (const auto& label : classes) {
    if (label.empty()) throw ValidationError("class label is empty");
    ScoreRequest request{std::string(conditioning), label, std::nullopt};
    const auto response = backend.score(request);
    if (response.per_token_logprob.empty()) {
      throw ValidationError("class '" + label + "' tokenizes to nothing");
    }
    raw.push_back(response.total());
  }
  return {std::vector<std::string>(classes.begin(), classes.end()), log_normalize(raw)};
}

NumericalLogPdf numerical_logpdf(const LmBackend& backend, std::string_view conditioning,
                                 std::string_view value, int precision,
                                 const PromptTemplate& tmpl) {
  if (value.find_first_not_of("0123456789-.") != std::string_view::npos) {
    throw ValidationError("'" + std::string(value) +
                          "' contains a character outside the numeric alphabet");
  }
  if (!is_plain_number(value)) {
    throw ValidationError("'" + std::string(value) + "' is not a plain number");
  }
  if (fractional_digits(value) != precision) {
    throw ValidationError("'" + std::string(value) + "' is not rendered with " +
                          std::to_string(precision) + " decimal digits");
  }
  NumericalLogPdf out;
  out.value = canonical_number(value);
  out.precision = precision;
  ScoreRequest request{std::string(conditioning), out.value,
                       allowed_numeric_ids(backend, tmpl)};
  out.log_pmf = backend.score(request).total();
  out.log_pdf = out.log_pmf + precision * std::numbers::ln10;
  return out;
}

JointResult joint_logprob(const LmBackend& backend, const Prompt& prompt,
                          std::span<const ColumnSpec> targets,
                          std::span<const CellValue> truth, const PromptTemplate& tmpl) {
  if (targets.size() != truth.size()) {
    throw ValidationError("target and ground-truth counts differ");
  }
  JointResult out;
  std::vector<HeaderValue> so_far;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const auto& spec = targets[k];
    const std::string value = truth_text(spec, truth[k]);
    const std::string conditioning =
        continuation_for_target(prompt, so_far, spec.name, tmpl);
    double logprob = 0.0;
    switch (spec.kind) {
      case ColumnKind::kCategorical: {
        auto dist = categorical_logprobs(backend, conditioning, spec.classes);
        auto idx = dist.index_of(value);
        if (!idx) throw ValidationError("unknown class '" + value + "'");
        logprob = dist.logprob[*idx];
        out.distributions.emplace_back(std::move(dist));
        break;
      }
      case ColumnKind::kNumeric:
        logprob = numerical_logpdf(backend, conditioning, value, spec.precision, tmpl).log_pdf;
        out.distributions.emplace_back(std::nullopt);
        break;
      case ColumnKind::kText:
        throw ValidationError("target '" + spec.name +
                              "' is a text column; only numeric and categorical "
                              "targets can be scored");
    }
    out.per_target_logprob.push_back(logprob);
    so_far.emplace_back(spec.name, value);
  }
  out.joint_logprob = 0.0;
  for (double lp : out.per_target_logprob) out.joint_logprob += lp;
  return out;
}

void SamplingConfig::validate() const {
  if (n_samples == 0) throw ValidationError("n_samples must be at least 1");
  if (max_attempts_per_sample == 0) {
    throw ValidationError("max_attempts_per_sample must be at least 1");
  }
  if (!(interval_level > 0.0 && interval_level < 1.0)) {
    throw ValidationError("interval_level must be in (0, 1)");
  }
  GenRequest probe;
  probe.top_p = top_p;
  probe.temperature = temperature;
  probe.max_new_tokens = max_new_tokens;
  jolt::validate(probe);
}

std::optional<std::vector<std::string>> parse_sample(std::string_view text,
                                                     std::span<const ColumnSpec> targets,
                                                     const PromptTemplate& tmpl) {
  std::vector<std::string> values;
  std::size_t pos = 0;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    std::string_view value;
    if (k + 1 < targets.size()) {
      const auto sep = text.find(tmpl.s, pos);
      if (sep == std::string_view::npos) return std::nullopt;
      value = text.substr(pos, sep - pos);
      pos = sep + tmpl.s.size();
      const std::string next = targets[k + 1].name + tmpl.d;
      if (text.substr(pos, next.size()) != next) return std::nullopt;
      pos += next.size();
    } else {
      value = text.substr(pos);
      // A trailing separator may come with or without its whitespace.
      const std::string_view trimmed = trim_trailing_space(tmpl.s);
      if (value.ends_with(tmpl.s)) {
        value.remove_suffix(tmpl.s.size());
      } else if (!trimmed.empty() && value.ends_with(trimmed)) {
        value.remove_suffix(trimmed.size());
      }
    }
    if (!valid_value(targets[k], value)) return std::nullopt;
    values.emplace_back(value);
  }
  return values;
}

double empirical_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw ValidationError("quantile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

SampleSummary summarize_samples(std::vector<std::vector<std::string>> accepted,
                                std::span<const ColumnSpec> targets,
                                double interval_level) {
  SampleSummary out;
  out.accepted = accepted.size();
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const auto& spec = targets[k];
    TargetSummary summary;
    summary.kind = spec.kind;
    switch (spec.kind) {
      case ColumnKind::kNumeric: {
        for (const auto& sample : accepted) summary.values.push_back(parse_double(sample[k]));
        std::sort(summary.values.begin(), summary.values.end());
        if (!summary.values.empty()) {
          const double tail = (1.0 - interval_level) / 2.0;
          summary.median = empirical_quantile(summary.values, 0.5);
          summary.lo = empirical_quantile(summary.values, tail);
          summary.hi = empirical_quantile(summary.values, 1.0 - tail);
        }
        break;
      }
      case ColumnKind::kCategorical: {
        std::vector<std::size_t> counts(spec.classes.size(), 0);
        for (const auto& sample : accepted) ++counts[*spec.class_index(sample[k])];
        for (std::size_t c = 0; c < counts.size(); ++c) {
          summary.frequencies.push_back(
              accepted.empty() ? 0.0
                               : static_cast<double>(counts[c]) /
                                     static_cast<double>(accepted.size()));
          if (counts[c] > counts[summary.mode]) summary.mode = c;
        }
        break;
      }
      case ColumnKind::kText: {
        std::map<std::string, std::size_t> counts;
        std::size_t best = 0;
        for (const auto& sample : accepted) {
          const std::size_t n = ++counts[sample[k]];
          if (n > best) {
            best = n;
            summary.modal_text = sample[k];
          }
        }
        break;
      }
    }
    out.targets.push_back(std::move(summary));
  }
  out.raw = std::move(accepted);
  return out;
}

SampleSummary sample_from(const LmBackend& backend, const std::string& conditioning,
                          std::span<const ColumnSpec> targets, const PromptTemplate& tmpl,
                          const SamplingConfig& cfg, bool stop_at_field) {
  cfg.validate();
  if (targets.empty()) throw ValidationError("no targets to sample");
  GenRequest base;
  base.context = conditioning;
  base.top_p = cfg.top_p;
  base.temperature = cfg.temperature;
  base.max_new_tokens = cfg.max_new_tokens;
  base.stop = {tmpl.t};
  if (stop_at_field) base.stop.push_back(tmpl.s);

  std::vector<std::optional<std::vector<std::string>>> slots(cfg.n_samples);
  std::vector<std::size_t> attempts(cfg.n_samples, 0);
  parallel_for(cfg.n_samples, cfg.jobs, [&](std::size_t slot) {
    GenRequest request = base;
    for (std::size_t a = 0; a < cfg.max_attempts_per_sample; ++a) {
      request.seed = derive_seed(cfg.seed, slot, a);
      ++attempts[slot];
      auto parsed = parse_sample(backend.generate(request), targets, tmpl);
      if (parsed) {
        slots[slot] = std::move(parsed);
        return;
      }
    }
  });

  std::size_t total_attempts = 0;
  std::vector<std::vector<std::string>> accepted;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    total_attempts += attempts[i];
    if (slots[i]) accepted.push_back(std::move(*slots[i]));
  }
  const double rate =
      static_cast<double>(accepted.size()) / static_cast<double>(total_attempts);
  if (accepted.size() < cfg.n_samples) {
    throw SamplingError("rejection sampling exhausted " +
                            std::to_string(cfg.max_attempts_per_sample) +
                            " attempts for a sample (acceptance rate " +
                            std::to_string(rate) + ")",
                        rate);
  }
  auto out = summarize_samples(std::move(accepted), targets, cfg.interval_level);
  out.attempts = total_attempts;
  out.acceptance_rate = rate;
  return out;
}

SampleSummary rejection_sample(const LmBackend& backend, const Prompt& prompt,
                               std::span<const ColumnSpec> targets,
                               const PromptTemplate& tmpl, const SamplingConfig& cfg) {
  if (targets.empty()) throw ValidationError("no targets to sample");
  const std::string conditioning =
      continuation_for_target(prompt, {}, targets.front().name, tmpl);
  return sample_from(backend, conditioning, targets, tmpl, cfg);
}

namespace {

TargetPrediction from_summary(const ColumnSpec& spec, const TargetSummary& summary,
                              double acceptance_rate) {
  TargetPrediction p;
  p.acceptance_rate = acceptance_rate;
  switch (spec.kind) {
    case ColumnKind::kNumeric:
      p.value = summary.median;
      p.point = Decimal::from_double(summary.median, spec.precision).to_string();
      p.interval = std::make_pair(summary.lo, summary.hi);
      break;
    case ColumnKind::kCategorical: {
      p.point = spec.classes[summary.mode];
      CategoricalDist dist{spec.classes, {}};
      for (double f : summary.frequencies) {
        dist.logprob.push_back(f > 0.0 ? std::log(f) : kNegInf);
      }
      p.distribution = std::move(dist);
      break;
    }
    case ColumnKind::kText:
      p.point = summary.modal_text;
      break;
  }
  return p;
}

TargetPrediction argmax_prediction(CategoricalDist dist) {
  TargetPrediction p;
  p.point = dist.classes[dist.argmax()];
  p.distribution = std::move(dist);
  return p;
}

}  // namespace

std::vector<TargetPrediction> predict_point(const LmBackend& backend, const Prompt& prompt,
                                            std::span<const ColumnSpec> targets,
                                            const PromptTemplate& tmpl, PredictMode mode,
                                            const SamplingConfig& cfg) {
  std::vector<TargetPrediction> out;
  if (mode == PredictMode::kLogits) {
    for (const auto& spec : targets) {
      if (!spec.is_categorical()) {
        throw ValidationError("logits mode needs categorical targets; '" + spec.name +
                              "' is " + to_string(spec.kind) +
                              " (use sampling for numeric targets)");
      }
    }
  }
  if (mode == PredictMode::kSampling) {
    const auto summary = rejection_sample(backend, prompt, targets, tmpl, cfg);
    for (std::size_t k = 0; k < targets.size(); ++k) {
      out.push_back(from_summary(targets[k], summary.targets[k], summary.acceptance_rate));
    }
    return out;
  }
  std::vector<HeaderValue> so_far;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const auto& spec = targets[k];
    const std::string conditioning =
        continuation_for_target(prompt, so_far, spec.name, tmpl);
    TargetPrediction p;
    if (spec.is_categorical()) {
      p = argmax_prediction(categorical_logprobs(backend, conditioning, spec.classes));
    } else {
      SamplingConfig local = cfg;
      local.seed = derive_seed(cfg.seed, kHybridStream, k);
      const auto summary =
          sample_from(backend, conditioning, std::span(&spec, 1), tmpl, local, true);
      p = from_summary(spec, summary.targets[0], summary.acceptance_rate);
    }
    so_far.emplace_back(spec.name, p.point);
    out.push_back(std::move(p));
  }
  return out;
}

const char* to_string(PredictMode mode) {
  switch (mode) {
    case PredictMode::kLogits:
      return "logits";
    case PredictMode::kSampling:
      return "sampling";
    case PredictMode::kHybrid:
      return "hybrid";
  }
  return "unknown";
}

}  // namespace jolt
