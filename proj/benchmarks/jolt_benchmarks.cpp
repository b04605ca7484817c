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

#include <benchmark/benchmark.h>

#include <map>
#include <string>
#include <vector>

#include "jolt/inference.hpp"
#include "jolt/mock_lm.hpp"
#include "jolt/prompt.hpp"
#include "jolt/random.hpp"
#include "jolt/table.hpp"

namespace {

using namespace jolt;

const PromptTemplate kTmpl{"rows", ": ", "; ", "\n"};

Table make_table(std::size_t rows) {
  std::vector<ColumnSpec> features;
  for (int c = 0; c < 8; ++c) features.push_back(ColumnSpec::numeric("x" + std::to_string(c), 2));
  std::vector<Row> data;
  std::vector<RowRole> roles;
  Rng rng(1);
  for (std::size_t r = 0; r < rows; ++r) {
    Row row;
    for (int c = 0; c < 8; ++c) {
      row.push_back(Decimal(static_cast<std::int64_t>(rng.below(10000)), 2));
    }
    row.push_back(r + 1 < rows ? CellValue(Category{"b"}) : CellValue(Missing{}));
    data.push_back(row);
    roles.push_back(r + 1 < rows ? RowRole::kTrain : RowRole::kTest);
  }
  return Table(features, {ColumnSpec::categorical("y", {"a", "b", "c"})}, data, roles);
}

MockLm make_mock() {
  const std::vector<std::string> words = {"alpha", "beta", "gamma"};
  MockLm mock(Tokenizer(Vocab::printable_ascii(words)), 3);
  mock.set_next("y: ", {{"alpha", 0.5}, {"beta", 0.3}, {"g", 0.2}});
  mock.set_next(": g", {{"a", 0.5}, {"\n", 0.5}});
  std::map<std::string, double> digits;
  for (char d = '0'; d <= '9'; ++d) digits[std::string(1, d)] = 0.09;
  digits["\n"] = 0.1;
  mock.set_next("z: ", digits);
  return mock;
}

void BM_Serialize(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const Table table = make_table(rows);
  for (auto _ : state) {
    benchmark::DoNotOptimize(serialize(table, kTmpl, rows - 1));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Serialize)->Arg(10)->Arg(100)->Arg(1000);

void BM_CategoricalLogprobs(benchmark::State& state) {
  const MockLm mock = make_mock();
  const std::vector<std::string> classes = {"alpha", "beta", "gamma", "ga"};
  for (auto _ : state) {
    benchmark::DoNotOptimize(categorical_logprobs(mock, "x: 1; y: ", classes));
  }
}
BENCHMARK(BM_CategoricalLogprobs);

void BM_NumericalLogPdf(benchmark::State& state) {
  const MockLm mock = make_mock();
  for (auto _ : state) {
    benchmark::DoNotOptimize(numerical_logpdf(mock, "x: 1; z: ", "12.34", 2, kTmpl));
  }
}
BENCHMARK(BM_NumericalLogPdf);

void BM_MockGenerate(benchmark::State& state) {
  const MockLm mock = make_mock();
  GenRequest request;
  request.context = "x: 1; z: ";
  request.max_new_tokens = static_cast<int>(state.range(0));
  request.stop = {"\n"};
  std::uint64_t seed = 0;
  for (auto _ : state) {
    request.seed = seed++;
    benchmark::DoNotOptimize(mock.generate(request));
  }
}
BENCHMARK(BM_MockGenerate)->Arg(8)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
