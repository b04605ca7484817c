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

#ifndef JOLT_MOCK_LM_HPP_
#define JOLT_MOCK_LM_HPP_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "jolt/lm_backend.hpp"
#include "jolt/random.hpp"
#include "jolt/tokenizer.hpp"

namespace jolt {

// Backoff lookup-table language model whose distributions are explicit, so
// every quantity derived from it can be enumerated exactly.
//
// The next-token distribution for a context is the stored vector of the
// longest context suffix (at most `order` tokens) that has an entry. With no
// matching entry, including the empty suffix, the distribution is uniform over
// the fallback token set (the whole vocabulary when that set is empty).
//
// Entries are added with set_next() while building the model; once shared
// between threads the model must not be modified. Sampling keeps all state in
// a per-call generator.
class MockLm : public LmBackend {
 public:
  static constexpr std::size_t kDefaultOrder = 3;
  static constexpr double kSumTolerance = 1e-12;

  explicit MockLm(Tokenizer tokenizer, std::size_t order = kDefaultOrder,
                  std::vector<TokenId> fallback = {});

  // Mock configuration document (JSON):
  //   {"vocab": {"printable_ascii": true, "words": [...]} | {"tokens": [...]},
  //    "order": 3, "fallback": ["0", "1"], "model_name": "...",
  //    "entries": [{"context": "text", "next": {"token": p, ...}}]}
  // Entry contexts are tokenized with the mock's tokenizer and keyed by their
  // last `order` tokens. An entry may give "context_tokens" (a list of token
  // strings) instead, which is used as the key verbatim; to_json() writes
  // that form so keys round-trip exactly.
  static MockLm from_json(std::string_view json);
  std::string to_json() const;

  const Tokenizer& tokenizer() const { return tokenizer_; }
  const Vocab& vocab() const { return tokenizer_.vocab(); }
  std::size_t order() const { return order_; }
  std::size_t entry_count() const { return table_.size(); }
  void set_model_name(std::string name) { model_name_ = std::move(name); }

  // `key` holds at most `order` tokens; `probs` is dense over the vocabulary
  // and must be nonnegative and sum to 1 within kSumTolerance.
  void set_next(std::span<const TokenId> key, std::vector<double> probs);

  // Sparse form keyed by token strings; tokens not listed get probability 0.
  // The context text is tokenized and its last `order` tokens form the key.
  void set_next(std::string_view context, const std::map<std::string, double>& probs);

  std::span<const double> next_distribution(std::span<const TokenId> context) const;

  // `excluded` (when non-null) flags vocabulary entries removed before
  // renormalization at every position.
  ScoreResponse score_tokens(std::span<const TokenId> context,
                             std::span<const TokenId> continuation,
                             const std::vector<bool>* excluded = nullptr) const;

  TokenSeq sample_tokens(std::span<const TokenId> context, double top_p,
                         double temperature, int max_new_tokens,
                         const std::vector<std::string>& stop, Rng& rng) const;

  BackendInfo info() const override;
  TokenSeq tokenize(std::string_view text) const override;
  ScoreResponse score(const ScoreRequest& request) const override;
  std::string generate(const GenRequest& request) const override;

 private:
  struct SeqHash {
    std::size_t operator()(const TokenSeq& seq) const noexcept;
  };

  Tokenizer tokenizer_;
  std::size_t order_;
  std::vector<TokenId> fallback_ids_;
  std::vector<double> fallback_;
  std::unordered_map<TokenSeq, std::vector<double>, SeqHash> table_;
  std::string model_name_ = "mock";
};

// Draws one index from `probs` after temperature scaling (p^(1/T),
// renormalized) and nucleus truncation: the smallest prefix of the
// probability-sorted entries (ties broken by lower index) whose mass reaches
// top_p, renormalized.
std::size_t sample_nucleus(std::span<const double> probs, double top_p,
                           double temperature, Rng& rng);

// One enumerated continuation and its exact probability.
struct ContinuationMass {
  TokenSeq tokens;
  std::string text;
  double probability = 0.0;
  // True for leaves: paths that ended in a terminator token or reached
  // max_len. Leaves form a prefix-free set.
  bool complete = false;
};

// Every token path over `alphabet` of length 1..max_len from `context`, with
// its exact chain-rule probability under `mock`. Paths stop growing after a
// token in `terminators`. When `excluded` is given, each position's
// distribution is renormalized over the non-excluded entries first. Throws
// ValidationError when |alphabet|^max_len exceeds 10^6.
std::vector<ContinuationMass> enumerate_continuations(
    const MockLm& mock, std::span<const TokenId> context,
    std::span<const TokenId> alphabet, std::size_t max_len,
    std::span<const TokenId> terminators = {},
    const std::vector<bool>* excluded = nullptr);

}  // namespace jolt

#endif  // JOLT_MOCK_LM_HPP_
