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

#include "jolt_cli/commands.hpp"

#include <cstdlib>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "jolt/csv.hpp"
#include "jolt/errors.hpp"
#include "jolt/experiment.hpp"
#include "jolt/http_backend.hpp"
#include "jolt/imputation.hpp"
#include "jolt/io.hpp"
#include "jolt/mock_lm.hpp"
#include "jolt/parallel.hpp"
#include "jolt/random.hpp"
#include "jolt_cli/config.hpp"

namespace jolt::cli {

namespace {

constexpr std::uint64_t kPredictStream = 0x9ed1;

struct CommonFlags {
  std::string config;
  std::optional<std::size_t> jobs;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> backend_url;
};

void add_common(CLI::App* sub, CommonFlags& flags) {
  sub->add_option("--config", flags.config, "config document (JSON)")->required();
  sub->add_option("--jobs", flags.jobs, "worker threads (default: machine parallelism)");
  sub->add_option("--seed", flags.seed, "sampling seed, overrides sampling.seed");
  sub->add_option("--backend-url", flags.backend_url,
                  "use the HTTP backend at this URL, overrides config and " +
                      std::string(kBackendUrlEnv));
}

// Precedence: flags, then environment, then config, then defaults.
CliConfig load_with_overrides(const CommonFlags& flags) {
  CliConfig cfg = load_config(flags.config);
  if (flags.seed) cfg.sampling.seed = *flags.seed;
  if (flags.backend_url) {
    cfg.backend.kind = BackendKind::kHttp;
    cfg.backend.url = *flags.backend_url;
  } else if (cfg.backend.kind == BackendKind::kHttp) {
    if (const char* env = std::getenv(kBackendUrlEnv); env != nullptr && *env != '\0') {
      cfg.backend.url = env;
    }
  }
  return cfg;
}

std::size_t jobs_of(const CommonFlags& flags) {
  return flags.jobs ? *flags.jobs : default_jobs();
}

Table load_dataset(const CliConfig& cfg, const std::string& override_path = {}) {
  const std::filesystem::path path =
      override_path.empty() ? cfg.dataset_path : std::filesystem::path(override_path);
  if (path.empty()) throw ValidationError("no dataset path given");
  return load_csv(path, cfg.schema);
}

nlohmann::ordered_json dist_json(const CategoricalDist& dist) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < dist.classes.size(); ++i) out[dist.classes[i]] = dist.prob(i);
  return out;
}

nlohmann::ordered_json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

int cmd_serialize(const CommonFlags& flags, std::size_t row_id, std::ostream& out) {
  const CliConfig cfg = load_with_overrides(flags);
  const Table table = load_dataset(cfg);
  const auto r = table.find_row_id(row_id);
  if (!r) throw ValidationError("no row with id " + std::to_string(row_id));
  out << serialize(table, cfg.tmpl, *r).text;
  out.flush();
  return kExitOk;
}

int cmd_predict(const CommonFlags& flags, const std::optional<std::string>& mode,
                const std::string& out_path, std::ostream& out) {
  CliConfig cfg = load_with_overrides(flags);
  if (mode) cfg.predict_mode = parse_predict_mode(*mode);
  const Table table = load_dataset(cfg);
  const auto targets = table.target_columns();
  if (cfg.predict_mode == PredictMode::kLogits) {
    for (const auto& t : targets) {
      if (t.kind != ColumnKind::kCategorical) {
        throw ValidationError("--mode logits needs categorical targets; '" + t.name + "' is " +
                              to_string(t.kind) + " (use sampling or hybrid)");
      }
    }
  }
  const auto backend = make_backend(cfg.backend);
  const auto rows = table.test_rows();
  if (rows.empty()) throw ValidationError("dataset has no test rows");
  const bool any_text = std::any_of(targets.begin(), targets.end(), [](const ColumnSpec& c) {
    return c.kind == ColumnKind::kText;
  });

  std::vector<std::string> records(rows.size());
  parallel_for(rows.size(), jobs_of(flags), [&](std::size_t i) {
    const std::size_t r = rows[i];
    const Prompt prompt = serialize(table, cfg.tmpl, r);
    SamplingConfig sampling = cfg.sampling;
    sampling.jobs = 1;
    sampling.seed = derive_seed(cfg.sampling.seed, kPredictStream, table.row_id(r));
    const auto preds =
        predict_point(*backend, prompt, targets, cfg.tmpl, cfg.predict_mode, sampling);

    nlohmann::ordered_json rec;
    rec["row_id"] = table.row_id(r);
    rec["mode"] = to_string(cfg.predict_mode);
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < targets.size(); ++k) {
      nlohmann::ordered_json p;
      p["target"] = targets[k].name;
      p["point"] = preds[k].point;
      if (preds[k].value) p["value"] = *preds[k].value;
      if (preds[k].interval) p["interval"] = {preds[k].interval->first, preds[k].interval->second};
      if (preds[k].distribution) p["distribution"] = dist_json(*preds[k].distribution);
      if (preds[k].acceptance_rate) p["acceptance_rate"] = *preds[k].acceptance_rate;
      list.push_back(std::move(p));
    }
    rec["predictions"] = std::move(list);

    const std::span<const CellValue> row = table.row(r);
    const auto truth = row.subspan(table.feature_count());
    const bool observed = std::none_of(truth.begin(), truth.end(),
                                       [](const CellValue& v) { return is_missing(v); });
    if (observed && !any_text) {
      const JointResult joint = joint_logprob(*backend, prompt, targets, truth, cfg.tmpl);
      rec["joint_logprob"] = finite_or_null(joint.joint_logprob);
      nlohmann::ordered_json per = nlohmann::ordered_json::array();
      for (double v : joint.per_target_logprob) per.push_back(finite_or_null(v));
      rec["per_target_logprob"] = std::move(per);
    }
    records[i] = rec.dump();
  });

  std::string content;
  for (const auto& r : records) content += r + '\n';
  write_file_atomic(out_path, content);
  out << "wrote " << records.size() << " prediction records to " << out_path << '\n';
  return kExitOk;
}

int cmd_impute(const CommonFlags& flags, const std::string& method, const std::string& in_path,
               const std::string& out_path, const std::optional<std::string>& mode,
               std::ostream& out) {
  CliConfig cfg = load_with_overrides(flags);
  if (mode) cfg.predict_mode = parse_predict_mode(*mode);
  const Table table = load_dataset(cfg, in_path);
  ImputedTable result;
  if (method == "mean-mode") {
    result = impute_baseline(table);
  } else if (method == "llm") {
    const auto backend = make_backend(cfg.backend);
    ImputeConfig ic;
    ic.sampling = cfg.sampling;
    ic.mode = cfg.predict_mode;
    ic.jobs = jobs_of(flags);
    result = impute_llm(*backend, table, cfg.tmpl, ic);
  } else {
    throw ValidationError("unknown imputation method '" + method + "' (expected llm or mean-mode)");
  }
  write_file_atomic(out_path + ".provenance.jsonl", provenance_jsonl(result));
  write_file_atomic(out_path, to_csv(result.table));
  out << "imputed " << result.provenance.size() << " cells into " << out_path << '\n';
  return kExitOk;
}

int cmd_evaluate(const CommonFlags& flags, const std::string& out_path, std::ostream& out,
                 std::ostream& err) {
  const CliConfig cfg = load_with_overrides(flags);
  if (!cfg.experiment) throw ValidationError("config has no 'experiment' block");
  const Table table = load_dataset(cfg);
  const auto backend = make_backend(cfg.backend);

  ExperimentConfig ec;
  ec.tmpl = cfg.tmpl;
  ec.shots = cfg.experiment->shots;
  ec.seeds = cfg.experiment->seeds;
  ec.mcar_fractions = cfg.experiment->mcar_fractions;
  ec.modes = cfg.experiment->modes;
  ec.n_test = cfg.experiment->n_test;
  ec.sampling = cfg.sampling;
  ec.predict_mode = cfg.predict_mode;
  ec.jobs = jobs_of(flags);
  const ExperimentReport report = run_experiment(table, ec, *backend);

  std::filesystem::path csv_path(out_path);
  csv_path.replace_extension(".csv");
  if (csv_path == std::filesystem::path(out_path)) csv_path += ".long.csv";
  write_file_atomic(out_path, report_jsonl(report));
  write_file_atomic(csv_path, report_long_csv(report));
  out << "wrote " << report.cells.size() << " grid cells to " << out_path << " and "
      << csv_path.string() << '\n';
  if (report.partial()) {
    for (const auto& cell : report.cells) {
      for (const auto& s : cell.seeds) {
        if (!s.metrics) {
          err << "failed: shots=" << cell.shots << " fraction=" << cell.mcar_fraction
              << " mode=" << to_string(cell.mode) << " seed=" << s.seed << ": " << s.failure
              << '\n';
        }
      }
    }
    return kExitPartial;
  }
  return kExitOk;
}

int cmd_mock_validate(const std::string& path, std::ostream& out) {
  const MockLm mock = MockLm::from_json(read_file(path));
  const BackendInfo info = mock.info();
  out << "ok: " << mock.entry_count() << " entries, vocab " << info.vocab_size << ", order "
      << mock.order() << ", single_digit " << (info.single_digit ? "true" : "false") << '\n';
  return kExitOk;
}

int cmd_serve_mock(const std::string& spec, const std::string& host, int port,
                   std::ostream& out) {
  const MockLm mock = MockLm::from_json(read_file(spec));
  BackendServer server(mock);
  const int bound = server.bind(host, port);
  out << "serving on http://" << host << ':' << bound << '\n';
  out.flush();
  server.listen();
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"In-context tabular prediction with language models", "jolt"};
  app.require_subcommand(1);

  CommonFlags serialize_flags;
  std::size_t row_id = 0;
  auto* serialize_cmd = app.add_subcommand("serialize", "print the prompt for one test row");
  add_common(serialize_cmd, serialize_flags);
  serialize_cmd->add_option("--row", row_id, "row id (0-based data row)")->required();

  CommonFlags predict_flags;
  std::optional<std::string> predict_mode;
  std::string predict_out;
  auto* predict_cmd = app.add_subcommand("predict", "predict the targets of every test row");
  add_common(predict_cmd, predict_flags);
  predict_cmd->add_option("--mode", predict_mode, "logits, sampling or hybrid");
  predict_cmd->add_option("--out", predict_out, "prediction records (JSON lines)")->required();

  CommonFlags impute_flags;
  std::string impute_method;
  std::string impute_in;
  std::string impute_out;
  std::optional<std::string> impute_mode;
  auto* impute_cmd = app.add_subcommand("impute", "fill missing feature cells");
  add_common(impute_cmd, impute_flags);
  impute_cmd->add_option("--method", impute_method, "llm or mean-mode")->required();
  impute_cmd->add_option("--in", impute_in, "input CSV (default: dataset.path)");
  impute_cmd->add_option("--out", impute_out, "completed CSV")->required();
  impute_cmd->add_option("--mode", impute_mode, "prediction mode for --method llm");

  CommonFlags evaluate_flags;
  std::string evaluate_out;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "run the experiment grid");
  add_common(evaluate_cmd, evaluate_flags);
  evaluate_cmd
      ->add_option("--out", evaluate_out, "report (JSON lines); a .csv is written beside it")
      ->required();

  std::string mock_path;
  auto* mock_cmd = app.add_subcommand("mock-spec", "mock backend specifications");
  mock_cmd->require_subcommand(1);
  auto* validate_cmd = mock_cmd->add_subcommand("validate", "check a mock specification");
  validate_cmd->add_option("path", mock_path, "mock spec (JSON)")->required();

  std::string serve_spec;
  std::string serve_host = "127.0.0.1";
  int serve_port = 8000;
  auto* serve_cmd = app.add_subcommand("serve-mock", "serve a mock over the HTTP protocol");
  serve_cmd->add_option("path", serve_spec, "mock spec (JSON)")->required();
  serve_cmd->add_option("--host", serve_host);
  serve_cmd->add_option("--port", serve_port, "0 picks a free port");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    if (*serialize_cmd) return cmd_serialize(serialize_flags, row_id, out);
    if (*predict_cmd) return cmd_predict(predict_flags, predict_mode, predict_out, out);
    if (*impute_cmd) {
      return cmd_impute(impute_flags, impute_method, impute_in, impute_out, impute_mode, out);
    }
    if (*evaluate_cmd) return cmd_evaluate(evaluate_flags, evaluate_out, out, err);
    if (*validate_cmd) return cmd_mock_validate(mock_path, out);
    if (*serve_cmd) return cmd_serve_mock(serve_spec, serve_host, serve_port, out);
  } catch (const BackendError& e) {
    err << "backend error: " << e.what() << '\n';
    return kExitBackend;
  } catch (const SamplingError& e) {
    err << "sampling error: " << e.what() << '\n';
    return kExitBackend;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace jolt::cli
