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

#include "jolt/mock_lm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "jolt/errors.hpp"

namespace jolt {

namespace {

constexpr double kMaxEnumeration = 1e6;

double checked_sum(std::span<const double> probs) {
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw ValidationError("mock probabilities must be finite and nonnegative");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > MockLm::kSumTolerance) {
    throw ValidationError("mock probability vector sums to " +
                          std::to_string(sum) + ", expected 1");
  }
  return sum;
}

}  // namespace

std::size_t MockLm::SeqHash::operator()(const TokenSeq& seq) const noexcept {
  std::uint64_t h = seq.size();
  for (TokenId id : seq) h = mix_seed(h ^ id);
  return static_cast<std::size_t>(h);
}

MockLm::MockLm(Tokenizer tokenizer, std::size_t order, std::vector<TokenId> fallback)
    : tokenizer_(std::move(tokenizer)), order_(order), fallback_ids_(std::move(fallback)) {
  const std::size_t v = vocab().size();
  if (v == 0) throw ValidationError("mock vocabulary is empty");
  fallback_.assign(v, 0.0);
  if (fallback_ids_.empty()) {
    std::fill(fallback_.begin(), fallback_.end(), 1.0 / static_cast<double>(v));
  } else {
    std::sort(fallback_ids_.begin(), fallback_ids_.end());
    fallback_ids_.erase(std::unique(fallback_ids_.begin(), fallback_ids_.end()),
                        fallback_ids_.end());
    for (TokenId id : fallback_ids_) {
      if (id >= v) throw ValidationError("fallback token id out of vocabulary");
      fallback_[id] = 1.0 / static_cast<double>(fallback_ids_.size());
    }
  }
}

void MockLm::set_next(std::span<const TokenId> key, std::vector<double> probs) {
  if (key.size() > order_) {
    throw ValidationError("mock context key longer than the model order");
  }
  for (TokenId id : key) {
    if (id >= vocab().size()) throw ValidationError("mock key token out of vocabulary");
  }
  if (probs.size() != vocab().size()) {
    throw ValidationError("mock probability vector length differs from vocab size");
  }
  checked_sum(probs);
  table_[TokenSeq(key.begin(), key.end())] = std::move(probs);
}

void MockLm::set_next(std::string_view context,
                      const std::map<std::string, double>& probs) {
  const TokenSeq ids = tokenizer_.tokenize(context);
  const std::size_t keep = std::min(order_, ids.size());
  std::vector<double> dense(vocab().size(), 0.0);
  for (const auto& [token, p] : probs) {
    auto id = vocab().find(token);
    if (!id) throw ValidationError("mock entry names unknown token '" + token + "'");
    dense[*id] = p;
  }
  set_next(std::span(ids).last(keep), std::move(dense));
}

std::span<const double> MockLm::next_distribution(
    std::span<const TokenId> context) const {
  if (!table_.empty()) {
    TokenSeq key;
    for (std::size_t len = std::min(order_, context.size());; --len) {
      auto suffix = context.last(len);
      key.assign(suffix.begin(), suffix.end());
      auto it = table_.find(key);
      if (it != table_.end()) return it->second;
      if (len == 0) break;
    }
  }
  return fallback_;
}

ScoreResponse MockLm::score_tokens(std::span<const TokenId> context,
                                   std::span<const TokenId> continuation,
                                   const std::vector<bool>* excluded) const {
  if (continuation.empty()) {
    throw ValidationError("score request needs a nonempty continuation");
  }
  const std::size_t v = vocab().size();
  if (excluded && excluded->size() != v) {
    throw ValidationError("constraint mask length differs from vocab size");
  }
  TokenSeq history(context.begin(), context.end());
  ScoreResponse out;
  out.token_ids.assign(continuation.begin(), continuation.end());
  out.per_token_logprob.reserve(continuation.size());
  for (TokenId token : continuation) {
    if (token >= v) throw ValidationError("continuation token out of vocabulary");
    auto dist = next_distribution(history);
    double p = dist[token];
    if (excluded) {
      if ((*excluded)[token]) {
        p = 0.0;
      } else {
        double allowed_mass = 0.0;
        for (std::size_t i = 0; i < v; ++i) {
          if (!(*excluded)[i]) allowed_mass += dist[i];
        }
        p = allowed_mass > 0.0 ? p / allowed_mass : 0.0;
      }
    }
    out.per_token_logprob.push_back(p > 0.0 ? std::log(p) : kNegInf);
    history.push_back(token);
  }
  return out;
}

std::size_t sample_nucleus(std::span<const double> probs, double top_p,
                           double temperature, Rng& rng) {
  if (probs.empty()) throw ValidationError("cannot sample from an empty distribution");
  std::vector<double> weights(probs.begin(), probs.end());
  if (temperature != 1.0) {
    const double inv_t = 1.0 / temperature;
    for (double& w : weights) w = w > 0.0 ? std::pow(w, inv_t) : 0.0;
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw BackendError("next-token distribution has no mass");

  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });

  const double threshold = top_p * total;
  double nucleus_mass = 0.0;
  std::size_t nucleus = 0;
  while (nucleus < order.size()) {
    nucleus_mass += weights[order[nucleus]];
    ++nucleus;
    if (nucleus_mass >= threshold) break;
  }
  const double u = rng.uniform01() * nucleus_mass;
  double cum = 0.0;
  for (std::size_t i = 0; i < nucleus; ++i) {
    cum += weights[order[i]];
    if (u < cum) return order[i];
  }
  // Rounding left u at the top edge; return the last entry with mass.
  for (std::size_t i = nucleus; i-- > 0;) {
    if (weights[order[i]] > 0.0) return order[i];
  }
  return order.front();
}

TokenSeq MockLm::sample_tokens(std::span<const TokenId> context, double top_p,
                               double temperature, int max_new_tokens,
                               const std::vector<std::string>& stop, Rng& rng) const {
  TokenSeq history(context.begin(), context.end());
  TokenSeq generated;
  std::string text;
  for (int step = 0; step < max_new_tokens; ++step) {
    const auto next = static_cast<TokenId>(
        sample_nucleus(next_distribution(history), top_p, temperature, rng));
    history.push_back(next);
    generated.push_back(next);
    text += vocab().token(next);
    std::string probe = text;
    if (truncate_at_stop(probe, stop)) break;
  }
  return generated;
}

BackendInfo MockLm::info() const {
  return {vocab().size(), validate_single_digit(vocab()), model_name_};
}

TokenSeq MockLm::tokenize(std::string_view text) const {
  return tokenizer_.tokenize(text);
}

ScoreResponse MockLm::score(const ScoreRequest& request) const {
  validate(request);
  const TokenSeq context = tokenizer_.tokenize(request.context);
  const TokenSeq continuation = tokenizer_.tokenize(request.continuation);
  if (!request.allowed_token_ids) return score_tokens(context, continuation);
  std::vector<bool> excluded(vocab().size(), true);
  for (TokenId id : *request.allowed_token_ids) {
    if (id >= excluded.size()) throw ValidationError("allowed token id out of vocabulary");
    excluded[id] = false;
  }
  return score_tokens(context, continuation, &excluded);
}

std::string MockLm::generate(const GenRequest& request) const {
  validate(request);
  Rng rng(request.seed.value_or(0));
  const TokenSeq context = tokenizer_.tokenize(request.context);
  const TokenSeq out = sample_tokens(context, request.top_p, request.temperature,
                                     request.max_new_tokens, request.stop, rng);
  std::string text = tokenizer_.detokenize(out);
  truncate_at_stop(text, request.stop);
  return text;
}

MockLm MockLm::from_json(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("mock spec is not valid JSON: ") + e.what());
  }
  static const std::vector<std::string> kKeys = {"vocab", "order", "fallback",
                                                 "model_name", "entries"};
  if (!doc.is_object()) throw ValidationError("mock spec must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
      throw ValidationError("mock spec: unknown key '" + key + "'");
    }
  }
  try {
    const auto& v = doc.at("vocab");
    Vocab vocab;
    if (v.contains("tokens")) {
      vocab = Vocab(v.at("tokens").get<std::vector<std::string>>());
    } else {
      if (!v.value("printable_ascii", true)) {
        throw ValidationError("mock spec: vocab needs 'tokens' or printable_ascii");
      }
      auto words = v.value("words", std::vector<std::string>{});
      vocab = Vocab::printable_ascii(words);
    }
    const auto order = doc.value("order", kDefaultOrder);
    std::vector<TokenId> fallback;
    for (const auto& token : doc.value("fallback", std::vector<std::string>{})) {
      auto id = vocab.find(token);
      if (!id) throw ValidationError("mock spec: unknown fallback token '" + token + "'");
      fallback.push_back(*id);
    }
    MockLm mock(Tokenizer(std::move(vocab)), order, std::move(fallback));
    if (doc.contains("model_name")) mock.set_model_name(doc.at("model_name").get<std::string>());
    std::size_t index = 0;
    for (const auto& entry : doc.value("entries", json::array())) {
      try {
        const auto next = entry.at("next").get<std::map<std::string, double>>();
        if (entry.contains("context_tokens")) {
          TokenSeq key;
          for (const auto& t : entry.at("context_tokens").get<std::vector<std::string>>()) {
            auto id = mock.vocab().find(t);
            if (!id) throw ValidationError("unknown context token '" + t + "'");
            key.push_back(*id);
          }
          std::vector<double> dense(mock.vocab().size(), 0.0);
          for (const auto& [token, p] : next) {
            auto id = mock.vocab().find(token);
            if (!id) throw ValidationError("unknown token '" + token + "'");
            dense[*id] = p;
          }
          mock.set_next(key, std::move(dense));
        } else {
          mock.set_next(entry.at("context").get<std::string>(), next);
        }
      } catch (const ValidationError& e) {
        throw ValidationError("mock spec entry " + std::to_string(index) + ": " + e.what());
      }
      ++index;
    }
    return mock;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("mock spec: ") + e.what());
  }
}

std::string MockLm::to_json() const {
  using nlohmann::json;
  json doc;
  doc["vocab"]["tokens"] = std::vector<std::string>(vocab().tokens().begin(),
                                                     vocab().tokens().end());
  doc["order"] = order_;
  doc["model_name"] = model_name_;
  std::vector<std::string> fallback;
  for (TokenId id : fallback_ids_) fallback.push_back(vocab().token(id));
  doc["fallback"] = fallback;
  // Sorted by key so the document is byte-stable.
  std::map<TokenSeq, const std::vector<double>*> sorted;
  for (const auto& [key, probs] : table_) sorted.emplace(key, &probs);
  json entries = json::array();
  for (const auto& [key, probs] : sorted) {
    std::vector<std::string> context;
    for (TokenId id : key) context.push_back(vocab().token(id));
    json next = json::object();
    for (std::size_t i = 0; i < probs->size(); ++i) {
      if ((*probs)[i] > 0.0) next[vocab().token(static_cast<TokenId>(i))] = (*probs)[i];
    }
    entries.push_back({{"context_tokens", context}, {"next", next}});
  }
  doc["entries"] = entries;
  return doc.dump(2);
}

namespace {

void enumerate_from(const MockLm& mock, TokenSeq& history, std::size_t context_len,
                    std::span<const TokenId> alphabet, std::size_t max_len,
                    std::span<const TokenId> terminators,
                    const std::vector<bool>* excluded, double prefix_prob,
                    std::vector<ContinuationMass>& out) {
  const auto dist = mock.next_distribution(history);
  double norm = 1.0;
  if (excluded) {
    norm = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
      if (!(*excluded)[i]) norm += dist[i];
    }
  }
  for (TokenId token : alphabet) {
    double p = dist[token];
    if (excluded) p = ((*excluded)[token] || norm <= 0.0) ? 0.0 : p / norm;
    history.push_back(token);
    const std::size_t depth = history.size() - context_len;
    const bool terminal =
        std::find(terminators.begin(), terminators.end(), token) != terminators.end();
    ContinuationMass entry;
    entry.tokens.assign(history.begin() + static_cast<std::ptrdiff_t>(context_len),
                        history.end());
    entry.text = mock.tokenizer().detokenize(entry.tokens);
    entry.probability = prefix_prob * p;
    entry.complete = terminal || depth == max_len;
    out.push_back(entry);
    if (!entry.complete) {
      enumerate_from(mock, history, context_len, alphabet, max_len, terminators,
                     excluded, prefix_prob * p, out);
    }
    history.pop_back();
  }
}

}  // namespace

std::vector<ContinuationMass> enumerate_continuations(
    const MockLm& mock, std::span<const TokenId> context,
    std::span<const TokenId> alphabet, std::size_t max_len,
    std::span<const TokenId> terminators, const std::vector<bool>* excluded) {
  if (std::pow(static_cast<double>(alphabet.size()), static_cast<double>(max_len)) >
      kMaxEnumeration) {
    throw ValidationError("enumeration of " + std::to_string(alphabet.size()) + "^" +
                          std::to_string(max_len) + " continuations is intractable");
  }
  for (TokenId id : alphabet) {
    if (id >= mock.vocab().size()) throw ValidationError("alphabet token out of vocabulary");
  }
  if (excluded && excluded->size() != mock.vocab().size()) {
    throw ValidationError("constraint mask length differs from vocab size");
  }
  std::vector<ContinuationMass> out;
  if (alphabet.empty() || max_len == 0) return out;
  TokenSeq history(context.begin(), context.end());
  enumerate_from(mock, history, context.size(), alphabet, max_len, terminators,
                 excluded, 1.0, out);
  return out;
}

}  // namespace jolt
