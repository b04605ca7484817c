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

#ifndef JOLT_TOKENIZER_HPP_
#define JOLT_TOKENIZER_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace jolt {

using TokenId = std::uint32_t;
using TokenSeq = std::vector<TokenId>;

// Ordered list of unique, nonempty token strings.
class Vocab {
 public:
  Vocab() = default;
  explicit Vocab(std::vector<std::string> tokens);

  // Tab, newline and printable ASCII (0x20-0x7e) as single-character tokens,
  // followed by `words` as extra multi-character tokens.
  static Vocab printable_ascii(std::span<const std::string> words = {});

  std::size_t size() const { return tokens_.size(); }
  const std::string& token(TokenId id) const { return tokens_.at(id); }
  std::span<const std::string> tokens() const { return tokens_; }
  std::optional<TokenId> find(std::string_view token) const;
  std::size_t max_token_length() const { return max_len_; }

  // {"tokens": [...]} in id order.
  std::string to_json() const;
  static Vocab from_json(std::string_view json);

  friend bool operator==(const Vocab& a, const Vocab& b) {
    return a.tokens_ == b.tokens_;
  }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;
  std::size_t max_len_ = 0;
};

// Greedy longest-match tokenizer over a Vocab. With only single-character
// tokens this is a plain character tokenizer; registered words are emitted as
// one token wherever they occur.
class Tokenizer {
 public:
  explicit Tokenizer(Vocab vocab) : vocab_(std::move(vocab)) {}

  const Vocab& vocab() const { return vocab_; }

  // Throws ValidationError naming the first unencodable character and its
  // byte offset.
  TokenSeq tokenize(std::string_view text) const;
  std::string detokenize(std::span<const TokenId> ids) const;

  bool can_encode(std::string_view text) const;

 private:
  Vocab vocab_;
};

// Characters a numeric value may be generated from: digits, '-', '.', plus the
// field and example separators so the model can end the number.
std::vector<std::string> default_numeric_allowed(std::string_view field_sep,
                                                 std::string_view example_sep);

// mask[id] is true exactly when vocab.token(id) is not in `allowed`.
std::vector<bool> numeric_token_mask(const Vocab& vocab,
                                     std::span<const std::string> allowed);

// True iff every digit "0".."9" is a token and no other token is made only of
// digits.
bool validate_single_digit(const Vocab& vocab);

}  // namespace jolt

#endif  // JOLT_TOKENIZER_HPP_
