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

#include "jolt/lm_backend.hpp"

#include <cmath>
#include <numeric>

#include "jolt/errors.hpp"

namespace jolt {

double ScoreResponse::total() const {
  return std::accumulate(per_token_logprob.begin(), per_token_logprob.end(), 0.0);
}

void validate(const ScoreRequest& request) {
  if (request.continuation.empty()) {
    throw ValidationError("score request needs a nonempty continuation");
  }
}

void validate(const GenRequest& request) {
  if (!(request.top_p > 0.0 && request.top_p <= 1.0)) {
    throw ValidationError("top_p must be in (0, 1]");
  }
  if (!(request.temperature > 0.0) || !std::isfinite(request.temperature)) {
    throw ValidationError("temperature must be positive");
  }
  if (request.max_new_tokens <= 0) {
    throw ValidationError("max_new_tokens must be positive");
  }
}

bool truncate_at_stop(std::string& text, const std::vector<std::string>& stop) {
  std::size_t cut = std::string::npos;
  for (const auto& s : stop) {
    if (s.empty()) continue;
    cut = std::min(cut, text.find(s));
  }
  if (cut == std::string::npos) return false;
  text.resize(cut);
  return true;
}

}  // namespace jolt
