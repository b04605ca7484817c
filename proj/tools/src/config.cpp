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

#include "jolt_cli/config.hpp"

#include <algorithm>
#include <initializer_list>

#include <json.hpp>

#include "jolt/errors.hpp"
#include "jolt/http_backend.hpp"
#include "jolt/io.hpp"
#include "jolt/mock_lm.hpp"

namespace jolt::cli {

namespace {

using nlohmann::json;

void check_object(const json& doc, std::string_view where,
                  std::initializer_list<std::string_view> allowed) {
  if (!doc.is_object()) throw ValidationError(std::string(where) + " must be an object");
  for (const auto& [key, _] : doc.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ValidationError("config: unknown key '" + key + "' in " + std::string(where));
    }
  }
}

template <typename T>
T get(const json& doc, const char* key, std::string_view where) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError("config: " + std::string(where) + "." + key +
                          " is missing or has the wrong type");
  }
}

template <typename T>
void get_opt(const json& doc, const char* key, std::string_view where, T& out) {
  if (doc.contains(key)) out = get<T>(doc, key, where);
}

ColumnSpec parse_column(const json& doc, std::string_view where) {
  check_object(doc, where, {"name", "kind", "precision", "classes"});
  const auto name = get<std::string>(doc, "name", where);
  const auto kind = get<std::string>(doc, "kind", where);
  if (kind == "numeric") {
    if (doc.contains("classes")) {
      throw ValidationError("config: numeric column '" + name + "' cannot list classes");
    }
    return ColumnSpec::numeric(
        name, doc.contains("precision") ? get<int>(doc, "precision", where) : 0);
  }
  if (doc.contains("precision")) {
    throw ValidationError("config: column '" + name + "' is not numeric but sets precision");
  }
  if (kind == "categorical") {
    return ColumnSpec::categorical(name, get<std::vector<std::string>>(doc, "classes", where));
  }
  if (kind == "text") {
    if (doc.contains("classes")) {
      throw ValidationError("config: text column '" + name + "' cannot list classes");
    }
    return ColumnSpec::text(name);
  }
  throw ValidationError("config: column '" + name + "' has unknown kind '" + kind + "'");
}

std::vector<ColumnSpec> parse_columns(const json& doc, const char* key) {
  const std::string where = std::string("dataset.") + key;
  if (!doc.contains(key)) return {};
  if (!doc[key].is_array()) throw ValidationError("config: " + where + " must be a list");
  std::vector<ColumnSpec> out;
  for (const auto& c : doc[key]) out.push_back(parse_column(c, where));
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

std::string decode_escapes(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '\\') {
      out += text[i];
      continue;
    }
    if (i + 1 == text.size()) throw ValidationError("dangling backslash in template string");
    switch (text[++i]) {
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      case 'r': out += '\r'; break;
      case '\\': out += '\\'; break;
      default:
        throw ValidationError(std::string("unknown escape '\\") + text[i] +
                              "' in template string");
    }
  }
  return out;
}

PredictMode parse_predict_mode(std::string_view text) {
  if (text == "logits") return PredictMode::kLogits;
  if (text == "sampling") return PredictMode::kSampling;
  if (text == "hybrid") return PredictMode::kHybrid;
  throw ValidationError("unknown predict mode '" + std::string(text) +
                        "' (expected logits, sampling or hybrid)");
}

MissingMode parse_missing_mode(std::string_view text) {
  if (text == "omit") return MissingMode::kOmit;
  if (text == "impute-baseline") return MissingMode::kImputeBaseline;
  throw ValidationError("unknown missing-value mode '" + std::string(text) +
                        "' (expected omit or impute-baseline)");
}

CliConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  check_object(doc, "config",
               {"dataset", "template", "backend", "sampling", "predict", "experiment"});
  CliConfig cfg;

  if (!doc.contains("dataset")) throw ValidationError("config: missing 'dataset'");
  const json& ds = doc["dataset"];
  check_object(ds, "dataset", {"path", "features", "targets", "train_rows"});
  if (ds.contains("path")) {
    cfg.dataset_path = resolve(base_dir, get<std::string>(ds, "path", "dataset"));
  }
  cfg.schema.features = parse_columns(ds, "features");
  cfg.schema.targets = parse_columns(ds, "targets");
  if (ds.contains("train_rows")) {
    cfg.schema.train_rows = get<std::size_t>(ds, "train_rows", "dataset");
  }
  cfg.schema.validate();

  if (doc.contains("template")) {
    const json& t = doc["template"];
    check_object(t, "template", {"prefix", "d", "s", "t"});
    for (auto [key, field] : {std::pair{"prefix", &cfg.tmpl.prefix}, std::pair{"d", &cfg.tmpl.d},
                              std::pair{"s", &cfg.tmpl.s}, std::pair{"t", &cfg.tmpl.t}}) {
      if (t.contains(key)) *field = decode_escapes(get<std::string>(t, key, "template"));
    }
  }
  cfg.tmpl.validate();

  if (doc.contains("backend")) {
    const json& b = doc["backend"];
    check_object(b, "backend", {"kind", "url", "mock_spec", "max_in_flight"});
    const auto kind = get<std::string>(b, "kind", "backend");
    if (kind == "mock") {
      cfg.backend.kind = BackendKind::kMock;
      if (b.contains("mock_spec")) {
        cfg.backend.mock_spec = resolve(base_dir, get<std::string>(b, "mock_spec", "backend"));
      }
    } else if (kind == "http") {
      cfg.backend.kind = BackendKind::kHttp;
      get_opt(b, "url", "backend", cfg.backend.url);
    } else {
      throw ValidationError("config: backend.kind must be mock or http, got '" + kind + "'");
    }
    get_opt(b, "max_in_flight", "backend", cfg.backend.max_in_flight);
  }

  if (doc.contains("sampling")) {
    const json& s = doc["sampling"];
    check_object(s, "sampling", {"n_samples", "top_p", "temperature", "max_new_tokens",
                                 "max_attempts_per_sample", "seed", "interval_level"});
    auto& c = cfg.sampling;
    get_opt(s, "n_samples", "sampling", c.n_samples);
    get_opt(s, "top_p", "sampling", c.top_p);
    get_opt(s, "temperature", "sampling", c.temperature);
    get_opt(s, "max_new_tokens", "sampling", c.max_new_tokens);
    get_opt(s, "max_attempts_per_sample", "sampling", c.max_attempts_per_sample);
    get_opt(s, "seed", "sampling", c.seed);
    get_opt(s, "interval_level", "sampling", c.interval_level);
  }
  cfg.sampling.validate();

  if (doc.contains("predict")) {
    const json& p = doc["predict"];
    check_object(p, "predict", {"mode"});
    if (p.contains("mode")) {
      cfg.predict_mode = parse_predict_mode(get<std::string>(p, "mode", "predict"));
    }
  }

  if (doc.contains("experiment")) {
    const json& e = doc["experiment"];
    check_object(e, "experiment", {"shots", "seeds", "mcar_fractions", "modes", "n_test"});
    ExperimentGrid grid;
    grid.shots = get<std::vector<std::size_t>>(e, "shots", "experiment");
    grid.seeds = get<std::vector<std::uint64_t>>(e, "seeds", "experiment");
    grid.n_test = get<std::size_t>(e, "n_test", "experiment");
    get_opt(e, "mcar_fractions", "experiment", grid.mcar_fractions);
    if (e.contains("modes")) {
      grid.modes.clear();
      for (const auto& m : get<std::vector<std::string>>(e, "modes", "experiment")) {
        grid.modes.push_back(parse_missing_mode(m));
      }
    }
    cfg.experiment = std::move(grid);
  }
  return cfg;
}

CliConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path), path.parent_path());
}

std::unique_ptr<LmBackend> make_backend(const BackendConfig& config) {
  if (config.kind == BackendKind::kHttp) {
    if (config.url.empty()) throw ValidationError("http backend needs a url");
    HttpBackendOptions options;
    options.url = config.url;
    options.max_in_flight = config.max_in_flight;
    return std::make_unique<HttpBackend>(std::move(options));
  }
  if (config.mock_spec.empty()) throw ValidationError("mock backend needs backend.mock_spec");
  return std::make_unique<MockLm>(MockLm::from_json(read_file(config.mock_spec)));
}

}  // namespace jolt::cli
