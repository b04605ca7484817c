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

#ifndef JOLT_LM_BACKEND_HPP_
#define JOLT_LM_BACKEND_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jolt/tokenizer.hpp"

namespace jolt {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Score `continuation` given `context`. When `allowed_token_ids` is set, each
// position's distribution is restricted to those ids and renormalized before
// the continuation token is read off.
struct ScoreRequest {
  std::string context;
  std::string continuation;
  std::optional<std::vector<TokenId>> allowed_token_ids;
};

// per_token_logprob[j] = log p(token j | context + tokens before j), natural
// log. A token excluded by the allowed set scores kNegInf.
struct ScoreResponse {
  std::vector<double> per_token_logprob;
  TokenSeq token_ids;

  double total() const;
};

struct GenRequest {
  std::string context;
  double top_p = 1.0;
  double temperature = 1.0;
  int max_new_tokens = 64;
  std::vector<std::string> stop;
  std::optional<std::uint64_t> seed;
};

struct BackendInfo {
  std::size_t vocab_size = 0;
  bool single_digit = false;
  std::string model_name;
};

// Language model contract shared by the in-process mock and the HTTP client.
// Implementations must be safe to call concurrently.
class LmBackend {
 public:
  virtual ~LmBackend() = default;

  virtual BackendInfo info() const = 0;
  virtual TokenSeq tokenize(std::string_view text) const = 0;
  virtual ScoreResponse score(const ScoreRequest& request) const = 0;

  // Temperature scaling, then nucleus truncation, sampled token by token. The
  // returned text is cut just before the first stop string, if one appears.
  virtual std::string generate(const GenRequest& request) const = 0;
};

// Throw ValidationError on malformed requests.
void validate(const ScoreRequest& request);
void validate(const GenRequest& request);

// Cuts `text` before the earliest occurrence of any stop string. Returns true
// when a stop string was found.
bool truncate_at_stop(std::string& text, const std::vector<std::string>& stop);

}  // namespace jolt

#endif  // JOLT_LM_BACKEND_HPP_
