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

#ifndef JOLT_TESTS_SUPPORT_FIXTURES_HPP_
#define JOLT_TESTS_SUPPORT_FIXTURES_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "jolt/mock_lm.hpp"
#include "jolt/prompt.hpp"
#include "jolt/table.hpp"

namespace jolt::testing {

std::filesystem::path data_dir();

// Printed sample prompts, transcribed byte for byte.
extern const char* const kWinePrompt;
extern const char* const kMoviesPrompt;
extern const char* const kMedalsPrompt;
extern const char* const kParisImputationPrompt;

// Serializes the test row of one of the data/ fixture configs.
std::string fixture_prompt(const std::string& config_name);

// Synthetic table whose truth the harness mock encodes:
// A in {p, q}, B a digit; Y = yes iff A = q, Z = B.
PromptTemplate harness_template();
Table harness_table(std::size_t n_train, std::size_t n_test, std::uint64_t seed);
MockLm harness_mock();

// Medal counts keyed by country, and a mock that completes any subset of a
// country's counts given the country name.
struct MedalRow {
  std::string country;
  int bronze;
  int silver;
  int gold;
};
std::vector<MedalRow> medal_rows();
PromptTemplate medals_template();
// Features: the three counts; target: Country (text). All rows train.
Table medals_table();
MockLm medals_mock();

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace jolt::testing

#endif  // JOLT_TESTS_SUPPORT_FIXTURES_HPP_
