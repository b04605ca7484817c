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

#include "fixtures.hpp"

#include <stdlib.h>

#include <map>

#include "jolt/csv.hpp"
#include "jolt/random.hpp"
#include "jolt_cli/config.hpp"

namespace jolt::testing {

std::filesystem::path data_dir() { return JOLT_TEST_DATA_DIR; }

const char* const kWinePrompt =
    "The data contains features that determine the quality of wine. Predict the alcohol "
    "content and the quality score of each wine based on the features.\n"
    "fixed_acidity: 6.2; volatile_acidity: 0.23; citric_acid: 0.35; residual_sugar: 0.7; "
    "chlorides: 0.051; free_sulfur_dioxide: 24.0; total_sulfur_dioxide: 111.0; density: 0.992; "
    "pH: 3.37; sulphates: 0.43; color: white; alcohol: 11.0; quality: 3\n"
    "fixed_acidity: 9.9; volatile_acidity: 0.49; citric_acid: 0.23; residual_sugar: 2.4; "
    "chlorides: 0.087; free_sulfur_dioxide: 19.0; total_sulfur_dioxide: 115.0; density: 0.995; "
    "pH: 2.77; sulphates: 0.44; color: white;";

const char* const kMoviesPrompt =
    "Each example contains 10 columns: Movie Name, Revenue in Millions of Dollars, Rating, and "
    "8 genre tags (Adventure, Comedy, Family, Action, Fantasy, Thriller, Drama, and Horror). "
    "Predict the movie rating and genre tags.\n"
    "Movie Name:Kung Fu Panda 4;ID:36;Revenue in $Millions:547.7;Rating:7.1;Adventure:No;"
    "Comedy:No;Family:Yes;Action:Yes;Fantasy:Yes;Thriller:No;Drama:No;Horror:No\n"
    "Movie Name:Speak No Evil;ID:120;Revenue in $Millions:76.8;";

const char* const kMedalsPrompt =
    "Each example contains five columns: Olympic Year, Country, Bronze Medal Count, Silver "
    "Medal Count, and Gold Medal Count that describe what type and how many medals a country "
    "won at the Olympic games that year. Predict the number of silver and gold medals won by "
    "that country in that year.\n"
    "Olympic Year:2020;Country:Netherlands;Bronze Medal Count:14;Silver Medal Count:12;"
    "Gold Medal Count:10\n"
    "Olympic Year:2024;Country:USA;Bronze Medal Count:42;";

const char* const kParisImputationPrompt =
    "Each example contains four columns: Country, Silver Medal Count, Bronze Medal Count, and "
    "Gold Medal Count that describe what type and how many medals a country won at the Paris "
    "2024 olympics.\n"
    "Country:Thailand;Silver Medal Count:3;Bronze Medal Count:2;Gold Medal Count:1\n"
    "Country:Slovakia;Silver Medal Count:0;Bronze Medal Count:1;";

std::string fixture_prompt(const std::string& config_name) {
  const auto cfg = cli::load_config(data_dir() / (config_name + ".json"));
  const Table table = load_csv(cfg.dataset_path, cfg.schema);
  const std::size_t row = table.test_rows().at(0);
  if (table.target_count() == 0) {
    const ImputationView view = permute_for_imputation(table, row);
    return serialize(view.table, cfg.tmpl, view.row).text;
  }
  return serialize(table, cfg.tmpl, row).text;
}

PromptTemplate harness_template() { return PromptTemplate{"rows", ": ", "; ", "\n"}; }

Table harness_table(std::size_t n_train, std::size_t n_test, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Row> rows;
  std::vector<RowRole> roles;
  for (std::size_t i = 0; i < n_train + n_test; ++i) {
    const bool q = rng.below(2) == 1;
    const auto b = static_cast<std::int64_t>(rng.below(10));
    rows.push_back({Category{q ? "q" : "p"}, Decimal(b, 0), Category{q ? "yes" : "no"},
                    Decimal(b, 0)});
    roles.push_back(i < n_train ? RowRole::kTrain : RowRole::kTest);
  }
  return Table({ColumnSpec::categorical("A", {"p", "q"}), ColumnSpec::numeric("B", 0)},
               {ColumnSpec::categorical("Y", {"no", "yes"}), ColumnSpec::numeric("Z", 0)},
               std::move(rows), std::move(roles));
}

MockLm harness_mock() {
  const std::vector<std::string> words = {"A: ", "B: ", "Y: ", "Z: ", "; ", "yes", "no"};
  MockLm mock(Tokenizer(Vocab::printable_ascii(words)), 16);
  mock.set_model_name("harness-mock");
  std::map<std::string, double> uniform_digits;
  for (char d = '0'; d <= '9'; ++d) uniform_digits[std::string(1, d)] = 0.1;

  const std::vector<std::string> a_values = {"", "p", "q"};
  std::vector<std::string> b_values = {""};
  for (char d = '0'; d <= '9'; ++d) b_values.emplace_back(1, d);
  for (const auto& a : a_values) {
    for (const auto& b : b_values) {
      std::string ctx = "\n";
      if (!a.empty()) ctx += "A: " + a + "; ";
      if (!b.empty()) ctx += "B: " + b + "; ";
      ctx += "Y: ";
      if (a.empty()) {
        mock.set_next(ctx, {{"no", 0.5}, {"yes", 0.5}});
      } else {
        mock.set_next(ctx, {{a == "q" ? "yes" : "no", 1.0}});
      }
      for (const std::string y : {"no", "yes"}) {
        mock.set_next(ctx + y, {{"; ", 1.0}});
        mock.set_next(ctx + y + "; ", {{"Z: ", 1.0}});
        const std::string zctx = ctx + y + "; Z: ";
        if (b.empty()) {
          mock.set_next(zctx, uniform_digits);
        } else {
          mock.set_next(zctx, {{b, 1.0}});
        }
        for (char d = '0'; d <= '9'; ++d) mock.set_next(zctx + d, {{"\n", 1.0}});
      }
    }
  }
  return mock;
}

std::vector<MedalRow> medal_rows() {
  return {{"USA", 42, 44, 40},         {"China", 24, 27, 40},    {"Japan", 13, 12, 20},
          {"Australia", 16, 19, 18},   {"France", 22, 26, 16},   {"Netherlands", 12, 7, 15},
          {"Great Britain", 29, 22, 14}, {"Italy", 15, 13, 12},  {"Germany", 8, 13, 12},
          {"Canada", 11, 7, 9}};
}

PromptTemplate medals_template() {
  return PromptTemplate{
      "Each example contains four columns that describe how many medals a country won.", ":",
      ";", "\n"};
}

namespace {

const std::vector<std::string> kMedalHeaders = {"Bronze Medal Count", "Silver Medal Count",
                                                "Gold Medal Count"};

int medal(const MedalRow& r, std::size_t k) {
  return k == 0 ? r.bronze : (k == 1 ? r.silver : r.gold);
}

}  // namespace

Table medals_table() {
  std::vector<Row> rows;
  for (const auto& r : medal_rows()) {
    rows.push_back({Decimal(r.bronze, 0), Decimal(r.silver, 0), Decimal(r.gold, 0),
                    Text{r.country}});
  }
  std::vector<RowRole> roles(rows.size(), RowRole::kTrain);
  return Table({ColumnSpec::numeric(kMedalHeaders[0], 0), ColumnSpec::numeric(kMedalHeaders[1], 0),
                ColumnSpec::numeric(kMedalHeaders[2], 0)},
               {ColumnSpec::text("Country")}, std::move(rows), std::move(roles));
}

MockLm medals_mock() {
  std::vector<std::string> words = kMedalHeaders;
  for (const auto& r : medal_rows()) words.push_back(r.country);
  MockLm mock(Tokenizer(Vocab::printable_ascii(words)), 16);
  mock.set_model_name("medals-mock");
  for (const auto& r : medal_rows()) {
    // Every nonempty subset of the counts, predicted in column order.
    for (unsigned mask = 1; mask < 8; ++mask) {
      std::string ctx = r.country + ";";
      bool first = true;
      for (std::size_t k = 0; k < 3; ++k) {
        if ((mask & (1u << k)) == 0) continue;
        if (!first) ctx += ";";
        first = false;
        ctx += kMedalHeaders[k] + ":";
        for (char digit : std::to_string(medal(r, k))) {
          mock.set_next(ctx, {{std::string(1, digit), 1.0}});
          ctx += digit;
        }
        mock.set_next(ctx, {{";", 1.0}});
      }
    }
  }
  return mock;
}

TempDir::TempDir() {
  std::string pattern = (std::filesystem::temp_directory_path() / "jolt-test-XXXXXX").string();
  if (mkdtemp(pattern.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
  path_ = pattern;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace jolt::testing
