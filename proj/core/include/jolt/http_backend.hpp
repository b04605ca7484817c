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

#ifndef JOLT_HTTP_BACKEND_HPP_
#define JOLT_HTTP_BACKEND_HPP_

#include <chrono>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "jolt/lm_backend.hpp"

namespace jolt {

struct HttpBackendOptions {
  // e.g. "http://127.0.0.1:8000" or "http://host:8000/prefix".
  std::string url;
  std::size_t max_in_flight = 4;
  // Attempts after the first for retryable calls.
  int retries = 3;
  std::chrono::milliseconds backoff{100};
  std::chrono::milliseconds timeout{60000};
};

// Client for the v1 JSON protocol. Tokenization happens server-side; results
// of tokenize() are memoized per text.
class HttpBackend final : public LmBackend {
 public:
  explicit HttpBackend(HttpBackendOptions options);
  ~HttpBackend() override;

  HttpBackend(const HttpBackend&) = delete;
  HttpBackend& operator=(const HttpBackend&) = delete;

  BackendInfo info() const override;
  TokenSeq tokenize(std::string_view text) const override;
  ScoreResponse score(const ScoreRequest& request) const override;
  std::string generate(const GenRequest& request) const override;

  const HttpBackendOptions& options() const { return options_; }

 private:
  struct State;
  HttpBackendOptions options_;
  std::unique_ptr<State> state_;
};

// Wire encoding shared by the client and any in-process server. Decoders throw
// BackendError on malformed documents. Non-finite log-probabilities travel as
// JSON null.
namespace wire {

std::string encode_tokenize_request(std::string_view text);
std::string decode_tokenize_request(std::string_view body);
std::string encode_tokenize_response(const TokenSeq& ids);
TokenSeq decode_tokenize_response(std::string_view body);

std::string encode_score_request(const ScoreRequest& request);
ScoreRequest decode_score_request(std::string_view body);
std::string encode_score_response(const ScoreResponse& response);
ScoreResponse decode_score_response(std::string_view body);

std::string encode_generate_request(const GenRequest& request);
GenRequest decode_generate_request(std::string_view body);
std::string encode_generate_response(std::string_view text);
std::string decode_generate_response(std::string_view body);

std::string encode_info(const BackendInfo& info);
BackendInfo decode_info(std::string_view body);

std::string encode_error(std::string_view message);

}  // namespace wire

// Serves `backend` over the v1 protocol until stop() is called. Used for
// sidecar-free end-to-end runs against the mock.
class BackendServer {
 public:
  explicit BackendServer(const LmBackend& backend);
  ~BackendServer();

  BackendServer(const BackendServer&) = delete;
  BackendServer& operator=(const BackendServer&) = delete;

  // Binds and returns the port; port 0 picks a free one.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void listen();
  // Runs listen() on a background thread.
  void start();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace jolt

#endif  // JOLT_HTTP_BACKEND_HPP_
