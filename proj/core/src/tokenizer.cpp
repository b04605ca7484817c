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

#include "jolt/tokenizer.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include <json.hpp>

#include "jolt/errors.hpp"

namespace jolt {

Vocab::Vocab(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i].empty()) throw ValidationError("vocab token must be nonempty");
    if (!index_.emplace(tokens_[i], static_cast<TokenId>(i)).second) {
      throw ValidationError("duplicate vocab token '" + tokens_[i] + "'");
    }
    max_len_ = std::max(max_len_, tokens_[i].size());
  }
}

Vocab Vocab::printable_ascii(std::span<const std::string> words) {
  std::vector<std::string> tokens{"\t", "\n"};
  for (char c = 0x20; c < 0x7f; ++c) tokens.emplace_back(1, c);
  tokens.insert(tokens.end(), words.begin(), words.end());
  return Vocab(std::move(tokens));
}

std::optional<TokenId> Vocab::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string Vocab::to_json() const {
  nlohmann::json doc;
  doc["tokens"] = tokens_;
  return doc.dump(2);
}

Vocab Vocab::from_json(std::string_view json) {
  try {
    auto doc = nlohmann::json::parse(json);
    return Vocab(doc.at("tokens").get<std::vector<std::string>>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed vocab document: ") + e.what());
  }
}

TokenSeq Tokenizer::tokenize(std::string_view text) const {
  TokenSeq out;
  std::size_t pos = 0;
  const std::size_t max_len = vocab_.max_token_length();
  while (pos < text.size()) {
    bool matched = false;
    for (std::size_t len = std::min(max_len, text.size() - pos); len > 0; --len) {
      if (auto id = vocab_.find(text.substr(pos, len))) {
        out.push_back(*id);
        pos += len;
        matched = true;
        break;
      }
    }
    if (!matched) {
      char code[8];
      std::snprintf(code, sizeof code, "0x%02x",
                    static_cast<unsigned>(static_cast<unsigned char>(text[pos])));
      throw ValidationError("cannot encode character " + std::string(code) +
                            " at offset " + std::to_string(pos));
    }
  }
  return out;
}

std::string Tokenizer::detokenize(std::span<const TokenId> ids) const {
  std::string out;
  for (TokenId id : ids) {
    if (id >= vocab_.size()) {
      throw ValidationError("token id " + std::to_string(id) + " out of vocabulary");
    }
    out += vocab_.token(id);
  }
  return out;
}

bool Tokenizer::can_encode(std::string_view text) const {
  try {
    tokenize(text);
    return true;
  } catch (const ValidationError&) {
    return false;
  }
}

std::vector<std::string> default_numeric_allowed(std::string_view field_sep,
                                                 std::string_view example_sep) {
  std::vector<std::string> allowed;
  for (char c = '0'; c <= '9'; ++c) allowed.emplace_back(1, c);
  allowed.emplace_back("-");
  allowed.emplace_back(".");
  allowed.emplace_back(example_sep);
  allowed.emplace_back(field_sep);
  return allowed;
}

std::vector<bool> numeric_token_mask(const Vocab& vocab,
                                     std::span<const std::string> allowed) {
  std::set<std::string_view> allowed_set(allowed.begin(), allowed.end());
  std::vector<bool> mask(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    mask[i] = !allowed_set.contains(vocab.token(static_cast<TokenId>(i)));
  }
  return mask;
}

bool validate_single_digit(const Vocab& vocab) {
  for (char c = '0'; c <= '9'; ++c) {
    if (!vocab.find(std::string(1, c))) return false;
  }
  for (const auto& token : vocab.tokens()) {
    if (token.size() > 1 && std::all_of(token.begin(), token.end(), [](char c) {
          return c >= '0' && c <= '9';
        })) {
      return false;
    }
  }
  return true;
}

}  // namespace jolt
