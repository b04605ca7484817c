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

#include "jolt/http_backend.hpp"

#include <cmath>
#include <mutex>
#include <semaphore>
#include <thread>
#include <unordered_map>

#include <httplib.h>
#include <json.hpp>

#include "jolt/errors.hpp"

namespace jolt {

namespace wire {

namespace {

using nlohmann::json;

json parse_body(std::string_view body) {
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw BackendError(std::string("malformed JSON: ") + e.what());
  }
}

template <typename T>
T field(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw BackendError(std::string("missing field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw BackendError(std::string("bad type for field '") + key + "'");
  }
}

json logprobs_to_json(const std::vector<double>& values) {
  json out = json::array();
  for (double v : values) {
    if (std::isfinite(v)) {
      out.push_back(v);
    } else {
      out.push_back(nullptr);
    }
  }
  return out;
}

std::vector<double> logprobs_from_json(const json& doc) {
  auto it = doc.find("per_token_logprob");
  if (it == doc.end() || !it->is_array()) {
    throw BackendError("missing field 'per_token_logprob'");
  }
  std::vector<double> out;
  out.reserve(it->size());
  for (const auto& v : *it) {
    if (v.is_null()) {
      out.push_back(kNegInf);
    } else if (v.is_number()) {
      out.push_back(v.get<double>());
    } else {
      throw BackendError("bad type in 'per_token_logprob'");
    }
  }
  return out;
}

}  // namespace

std::string encode_tokenize_request(std::string_view text) {
  return json{{"text", text}}.dump();
}

std::string decode_tokenize_request(std::string_view body) {
  return field<std::string>(parse_body(body), "text");
}

std::string encode_tokenize_response(const TokenSeq& ids) {
  return json{{"token_ids", ids}}.dump();
}

TokenSeq decode_tokenize_response(std::string_view body) {
  return field<TokenSeq>(parse_body(body), "token_ids");
}

std::string encode_score_request(const ScoreRequest& request) {
  json doc{{"context_text", request.context}, {"continuation_text", request.continuation}};
  if (request.allowed_token_ids) doc["allowed_token_ids"] = *request.allowed_token_ids;
  return doc.dump();
}

ScoreRequest decode_score_request(std::string_view body) {
  const json doc = parse_body(body);
  ScoreRequest out;
  out.context = field<std::string>(doc, "context_text");
  out.continuation = field<std::string>(doc, "continuation_text");
  if (doc.contains("allowed_token_ids") && !doc["allowed_token_ids"].is_null()) {
    out.allowed_token_ids = field<std::vector<TokenId>>(doc, "allowed_token_ids");
  }
  return out;
}

std::string encode_score_response(const ScoreResponse& response) {
  return json{{"per_token_logprob", logprobs_to_json(response.per_token_logprob)},
              {"token_ids", response.token_ids}}
      .dump();
}

ScoreResponse decode_score_response(std::string_view body) {
  const json doc = parse_body(body);
  ScoreResponse out;
  out.per_token_logprob = logprobs_from_json(doc);
  out.token_ids = field<TokenSeq>(doc, "token_ids");
  if (out.token_ids.size() != out.per_token_logprob.size()) {
    throw BackendError("score response lengths disagree");
  }
  return out;
}

std::string encode_generate_request(const GenRequest& request) {
  json doc{{"context_text", request.context},
           {"top_p", request.top_p},
           {"temperature", request.temperature},
           {"max_new_tokens", request.max_new_tokens},
           {"stop", request.stop}};
  if (request.seed) doc["seed"] = *request.seed;
  return doc.dump();
}

GenRequest decode_generate_request(std::string_view body) {
  const json doc = parse_body(body);
  GenRequest out;
  out.context = field<std::string>(doc, "context_text");
  out.top_p = field<double>(doc, "top_p");
  out.temperature = field<double>(doc, "temperature");
  out.max_new_tokens = field<int>(doc, "max_new_tokens");
  out.stop = field<std::vector<std::string>>(doc, "stop");
  if (doc.contains("seed") && !doc["seed"].is_null()) {
    out.seed = field<std::uint64_t>(doc, "seed");
  }
  return out;
}

std::string encode_generate_response(std::string_view text) {
  return json{{"text", text}}.dump();
}

std::string decode_generate_response(std::string_view body) {
  return field<std::string>(parse_body(body), "text");
}

std::string encode_info(const BackendInfo& info) {
  return json{{"vocab_size", info.vocab_size},
              {"single_digit", info.single_digit},
              {"model_name", info.model_name}}
      .dump();
}

BackendInfo decode_info(std::string_view body) {
  const json doc = parse_body(body);
  BackendInfo out;
  out.vocab_size = field<std::size_t>(doc, "vocab_size");
  out.single_digit = field<bool>(doc, "single_digit");
  out.model_name = field<std::string>(doc, "model_name");
  return out;
}

std::string encode_error(std::string_view message) {
  return json{{"error", message}}.dump();
}

}  // namespace wire

namespace {

struct Endpoint {
  std::string scheme_host_port;
  std::string base_path;
};

Endpoint split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos || url.compare(0, scheme, "http") != 0) {
    throw ValidationError("backend url must start with http://: '" + url + "'");
  }
  const auto slash = url.find('/', scheme + 3);
  Endpoint out;
  if (slash == std::string::npos) {
    out.scheme_host_port = url;
  } else {
    out.scheme_host_port = url.substr(0, slash);
    out.base_path = url.substr(slash);
    while (!out.base_path.empty() && out.base_path.back() == '/') out.base_path.pop_back();
  }
  if (out.scheme_host_port.size() <= scheme + 3) {
    throw ValidationError("backend url has no host: '" + url + "'");
  }
  return out;
}

}  // namespace

struct HttpBackend::State {
  explicit State(const HttpBackendOptions& o)
      : endpoint(split_url(o.url)),
        slots(static_cast<std::ptrdiff_t>(o.max_in_flight)) {}

  Endpoint endpoint;
  std::counting_semaphore<> slots;
  mutable std::mutex memo_mu;
  std::unordered_map<std::string, TokenSeq> memo;
};

HttpBackend::HttpBackend(HttpBackendOptions options) : options_(std::move(options)) {
  if (options_.max_in_flight == 0) throw ValidationError("max_in_flight must be positive");
  if (options_.retries < 0) throw ValidationError("retries must be non-negative");
  state_ = std::make_unique<State>(options_);
}

HttpBackend::~HttpBackend() = default;

namespace {

class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<>& s) : s_(s) { s_.acquire(); }
  ~SlotGuard() { s_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  std::counting_semaphore<>& s_;
};

struct CallFailure {
  std::string message;
  bool retryable = false;
};

// One round trip. Returns the body or fills `failure`.
std::optional<std::string> call_once(const Endpoint& ep, const HttpBackendOptions& o,
                                     const std::string& path, const std::string* body,
                                     CallFailure& failure) {
  httplib::Client client(ep.scheme_host_port);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(o.timeout);
  const auto usecs =
      std::chrono::duration_cast<std::chrono::microseconds>(o.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  const std::string full = ep.base_path + path;
  auto res = body ? client.Post(full, *body, "application/json") : client.Get(full);
  if (!res) {
    failure = {"request to " + ep.scheme_host_port + full + " failed: " +
                   httplib::to_string(res.error()),
               true};
    return std::nullopt;
  }
  if (res->status != 200) {
    std::string detail = res->body;
    try {
      auto doc = nlohmann::json::parse(res->body);
      if (doc.contains("error")) detail = doc["error"].get<std::string>();
    } catch (const std::exception&) {
    }
    failure = {full + " returned HTTP " + std::to_string(res->status) + ": " + detail,
               res->status >= 500 || res->status == 429};
    return std::nullopt;
  }
  return std::move(res->body);
}


std::string call_with_retry(const Endpoint& ep, const HttpBackendOptions& o,
                            std::counting_semaphore<>& slots, const std::string& path,
                            const std::string* body, bool retry) {
  const int attempts = retry ? o.retries + 1 : 1;
  auto delay = o.backoff;
  CallFailure failure;
  for (int a = 0; a < attempts; ++a) {
    if (a > 0) {
      std::this_thread::sleep_for(delay);
      delay *= 2;
    }
    std::optional<std::string> out;
    {
      SlotGuard guard(slots);
      out = call_once(ep, o, path, body, failure);
    }
    if (out) return std::move(*out);
    if (!failure.retryable) break;
  }
  throw BackendError(failure.message);
}

}  // namespace

BackendInfo HttpBackend::info() const {
  return wire::decode_info(
      call_with_retry(state_->endpoint, options_, state_->slots, "/v1/info", nullptr, true));
}

TokenSeq HttpBackend::tokenize(std::string_view text) const {
  {
    std::lock_guard lock(state_->memo_mu);
    auto it = state_->memo.find(std::string(text));
    if (it != state_->memo.end()) return it->second;
  }
  const std::string body = wire::encode_tokenize_request(text);
  TokenSeq ids = wire::decode_tokenize_response(
      call_with_retry(state_->endpoint, options_, state_->slots, "/v1/tokenize", &body, true));
  std::lock_guard lock(state_->memo_mu);
  state_->memo.emplace(std::string(text), ids);
  return ids;
}

ScoreResponse HttpBackend::score(const ScoreRequest& request) const {
  validate(request);
  const std::string body = wire::encode_score_request(request);
  return wire::decode_score_response(
      call_with_retry(state_->endpoint, options_, state_->slots, "/v1/score", &body, true));
}

std::string HttpBackend::generate(const GenRequest& request) const {
  validate(request);
  const std::string body = wire::encode_generate_request(request);
  std::string text = wire::decode_generate_response(call_with_retry(
      state_->endpoint, options_, state_->slots, "/v1/generate", &body, request.seed.has_value()));
  truncate_at_stop(text, request.stop);
  return text;
}

struct BackendServer::Impl {
  explicit Impl(const LmBackend& b) : backend(b) {}

  const LmBackend& backend;
  httplib::Server server;
  std::thread thread;
};

namespace {

template <typename Fn>
void handle(httplib::Response& res, Fn&& fn) {
  try {
    res.set_content(fn(), "application/json");
  } catch (const ValidationError& e) {
    res.status = 400;
    res.set_content(wire::encode_error(e.what()), "application/json");
  } catch (const BackendError& e) {
    res.status = 400;
    res.set_content(wire::encode_error(e.what()), "application/json");
  } catch (const std::exception& e) {
    res.status = 500;
    res.set_content(wire::encode_error(e.what()), "application/json");
  }
}

}  // namespace

BackendServer::BackendServer(const LmBackend& backend) : impl_(std::make_unique<Impl>(backend)) {
  auto& srv = impl_->server;
  const LmBackend& b = impl_->backend;
  srv.Get("/v1/info", [&b](const httplib::Request&, httplib::Response& res) {
    handle(res, [&] { return wire::encode_info(b.info()); });
  });
  srv.Post("/v1/tokenize", [&b](const httplib::Request& req, httplib::Response& res) {
    handle(res, [&] {
      return wire::encode_tokenize_response(b.tokenize(wire::decode_tokenize_request(req.body)));
    });
  });
  srv.Post("/v1/score", [&b](const httplib::Request& req, httplib::Response& res) {
    handle(res, [&] {
      return wire::encode_score_response(b.score(wire::decode_score_request(req.body)));
    });
  });
  srv.Post("/v1/generate", [&b](const httplib::Request& req, httplib::Response& res) {
    handle(res, [&] {
      return wire::encode_generate_response(b.generate(wire::decode_generate_request(req.body)));
    });
  });
}

BackendServer::~BackendServer() { stop(); }

int BackendServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw BackendError("could not bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw BackendError("could not bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void BackendServer::listen() { impl_->server.listen_after_bind(); }

void BackendServer::start() {
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void BackendServer::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace jolt
