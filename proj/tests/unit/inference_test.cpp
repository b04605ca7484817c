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

#include "jolt/inference.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "jolt/errors.hpp"
#include "jolt/mock_lm.hpp"

namespace jolt {
namespace {

const PromptTemplate kTmpl{"", ": ", "; ", "\n"};

Prompt one_feature_prompt() {
  const Table t({ColumnSpec::numeric("A", 0)}, {ColumnSpec::categorical("Y", {"no", "yes"})},
                {{Decimal(1, 0), Missing{}}}, {RowRole::kTest});
  return serialize(t, kTmpl, 0);
}

MockLm word_mock(std::size_t order = 3) {
  const std::vector<std::string> words = {"yes", "no"};
  return MockLm(Tokenizer(Vocab::printable_ascii(words)), order);
}

TEST(LogNormalizeTest, ScaleInvariant) {
  const std::vector<double> a = {std::log(0.03), std::log(0.01)};
  const std::vector<double> b = {std::log(0.03) - 700.0, std::log(0.01) - 700.0};
  const auto na = log_normalize(a);
  const auto nb = log_normalize(b);
  EXPECT_NEAR(std::exp(na[0]), 0.75, 1e-15);
  EXPECT_NEAR(std::exp(na[1]), 0.25, 1e-15);
  EXPECT_NEAR(na[0], nb[0], 1e-12);
  EXPECT_NEAR(na[1], nb[1], 1e-12);
}

TEST(LogNormalizeTest, AllNegInfIsAnError) {
  const std::vector<double> a = {kNegInf, kNegInf};
  EXPECT_THROW(log_normalize(a), ValidationError);
}

TEST(CategoricalTest, NormalizesRawMasses) {
  MockLm mock = word_mock();
  mock.set_next("Y: ", {{"yes", 0.03}, {"no", 0.01}, {"z", 0.96}});
  const std::vector<std::string> classes = {"yes", "no"};
  const CategoricalDist d = categorical_logprobs(mock, "A: 1; Y: ", classes);
  EXPECT_NEAR(d.prob(0), 0.75, 1e-12);
  EXPECT_NEAR(d.prob(1), 0.25, 1e-12);
  EXPECT_EQ(d.argmax(), 0u);
  EXPECT_EQ(d.index_of("no"), 1u);
  EXPECT_FALSE(d.index_of("maybe"));
}

TEST(CategoricalTest, MultiTokenClassesUseChainRule) {
  MockLm mock(Tokenizer(Vocab::printable_ascii()), 3);
  mock.set_next("Y: ", {{"n", 0.2}, {"y", 0.6}, {"z", 0.2}});
  mock.set_next(": n", {{"o", 0.5}, {"x", 0.5}});
  mock.set_next(": y", {{"e", 1.0}});
  mock.set_next(" ye", {{"s", 0.5}, {"x", 0.5}});
  const std::vector<std::string> classes = {"no", "yes"};
  const CategoricalDist d = categorical_logprobs(mock, "Y: ", classes);
  EXPECT_NEAR(d.prob(0), 0.1 / 0.4, 1e-12);
  EXPECT_NEAR(d.prob(1), 0.3 / 0.4, 1e-12);
}

TEST(CategoricalTest, SingleClassIsCertain) {
  MockLm mock = word_mock();
  const std::vector<std::string> classes = {"yes"};
  const CategoricalDist d = categorical_logprobs(mock, "Y: ", classes);
  EXPECT_EQ(d.logprob[0], 0.0);
}

TEST(CategoricalTest, TiesPickFirstClass) {
  MockLm mock = word_mock();
  mock.set_next("Y: ", {{"yes", 0.5}, {"no", 0.5}});
  const std::vector<std::string> classes = {"no", "yes"};
  EXPECT_EQ(categorical_logprobs(mock, "Y: ", classes).argmax(), 0u);
}

TEST(CategoricalTest, ZeroMassEverywhereIsAnError) {
  MockLm mock = word_mock();
  mock.set_next("Y: ", {{"z", 1.0}});
  const std::vector<std::string> classes = {"no", "yes"};
  EXPECT_THROW(categorical_logprobs(mock, "Y: ", classes), ValidationError);
}

class NumericTest : public ::testing::Test {
 protected:
  NumericTest() : mock_(Tokenizer(Vocab::printable_ascii()), 3) {
    mock_.set_next("Z: ", {{"7", 0.25}, {"1", 0.25}, {"a", 0.5}});
    mock_.set_next(": 7", {{".", 1.0}});
    mock_.set_next(" 7.", {{"4", 0.1}, {"5", 0.9}});
    mock_.set_next(": 1", {{"0", 0.5}, {"x", 0.5}});
  }
  MockLm mock_;
};

TEST_F(NumericTest, LogPdfAddsPrecisionScale) {
  const NumericalLogPdf r = numerical_logpdf(mock_, "Z: ", "7.4", 1, kTmpl);
  EXPECT_NEAR(r.log_pmf, std::log(0.05), 1e-12);
  EXPECT_NEAR(r.log_pdf, std::log(0.5), 1e-12);
  EXPECT_EQ(r.log_pdf, r.log_pmf + 1 * std::numbers::ln10);
}

TEST_F(NumericTest, ZeroPrecisionIsPmf) {
  const NumericalLogPdf r = numerical_logpdf(mock_, "Z: ", "10", 0, kTmpl);
  EXPECT_NEAR(r.log_pmf, std::log(0.5 * 1.0), 1e-12);
  EXPECT_EQ(r.log_pdf, r.log_pmf);
}

TEST_F(NumericTest, RejectsMalformedValues) {
  EXPECT_THROW(numerical_logpdf(mock_, "Z: ", "7.40", 1, kTmpl), ValidationError);
  EXPECT_THROW(numerical_logpdf(mock_, "Z: ", "7e1", 0, kTmpl), ValidationError);
  EXPECT_THROW(numerical_logpdf(mock_, "Z: ", "7.", 0, kTmpl), ValidationError);
  EXPECT_THROW(numerical_logpdf(mock_, "Z: ", "1-2", 0, kTmpl), ValidationError);
}

TEST(JointTest, TeacherForcedSum) {
  MockLm mock = word_mock(16);
  mock.set_next("A: 1; Y: ", {{"yes", 0.2}, {"no", 0.6}, {"z", 0.2}});
  mock.set_next("A: 1; Y: yes; Z: ", {{"4", 0.5}, {"5", 0.5}});
  mock.set_next("A: 1; Y: no; Z: ", {{"4", 0.1}, {"5", 0.9}});
  const Table t({ColumnSpec::numeric("A", 0)},
                {ColumnSpec::categorical("Y", {"no", "yes"}), ColumnSpec::numeric("Z", 0)},
                {{Decimal(1, 0), Missing{}, Missing{}}}, {RowRole::kTest});
  const Prompt p = serialize(t, kTmpl, 0);
  const std::vector<CellValue> truth = {Category{"yes"}, Decimal(4, 0)};
  const JointResult r = joint_logprob(mock, p, t.target_columns(), truth, kTmpl);
  ASSERT_EQ(r.per_target_logprob.size(), 2u);
  EXPECT_NEAR(r.per_target_logprob[0], std::log(0.25), 1e-12);
  EXPECT_NEAR(r.per_target_logprob[1], std::log(0.5), 1e-12);
  EXPECT_EQ(r.joint_logprob, r.per_target_logprob[0] + r.per_target_logprob[1]);
  ASSERT_TRUE(r.distributions[0]);
  EXPECT_FALSE(r.distributions[1]);

  const std::vector<CellValue> other = {Category{"no"}, Decimal(4, 0)};
  const JointResult s = joint_logprob(mock, p, t.target_columns(), other, kTmpl);
  EXPECT_NEAR(s.per_target_logprob[1], std::log(0.1), 1e-12);
}

TEST(JointTest, ImpossibleValueIsNegInf) {
  MockLm mock = word_mock(16);
  mock.set_next("A: 1; Z: ", {{"4", 1.0}});
  const Table t({ColumnSpec::numeric("A", 0)}, {ColumnSpec::numeric("Z", 0)},
                {{Decimal(1, 0), Missing{}}}, {RowRole::kTest});
  const std::vector<CellValue> truth = {Decimal(5, 0)};
  const JointResult r = joint_logprob(mock, serialize(t, kTmpl, 0), t.target_columns(), truth, kTmpl);
  EXPECT_EQ(r.joint_logprob, kNegInf);
}

TEST(JointTest, TextAndMissingTruthRejected) {
  MockLm mock = word_mock();
  const Table t({ColumnSpec::numeric("A", 0)}, {ColumnSpec::text("T")},
                {{Decimal(1, 0), Missing{}}}, {RowRole::kTest});
  const std::vector<CellValue> truth = {Text{"x"}};
  EXPECT_THROW(joint_logprob(mock, serialize(t, kTmpl, 0), t.target_columns(), truth, kTmpl),
               ValidationError);
  const Table n({ColumnSpec::numeric("A", 0)}, {ColumnSpec::numeric("Z", 0)},
                {{Decimal(1, 0), Missing{}}}, {RowRole::kTest});
  const std::vector<CellValue> missing = {Missing{}};
  EXPECT_THROW(joint_logprob(mock, serialize(n, kTmpl, 0), n.target_columns(), missing, kTmpl),
               ValidationError);
}

TEST(ParseSampleTest, Fields) {
  const std::vector<ColumnSpec> targets = {ColumnSpec::categorical("Y", {"no", "yes"}),
                                           ColumnSpec::numeric("Z", 1)};
  EXPECT_EQ(parse_sample("yes; Z: 1.5", targets, kTmpl),
            (std::vector<std::string>{"yes", "1.5"}));
  EXPECT_EQ(parse_sample("no; Z: -0.5;", targets, kTmpl),
            (std::vector<std::string>{"no", "-0.5"}));
  EXPECT_EQ(parse_sample("no; Z: -0.5; ", targets, kTmpl),
            (std::vector<std::string>{"no", "-0.5"}));
  EXPECT_FALSE(parse_sample("maybe; Z: 1.5", targets, kTmpl));
  EXPECT_FALSE(parse_sample("yes; W: 1.5", targets, kTmpl));
  EXPECT_FALSE(parse_sample("yes; Z: 1.5.0", targets, kTmpl));
  EXPECT_FALSE(parse_sample("yes; Z: abc", targets, kTmpl));
  EXPECT_FALSE(parse_sample("yes", targets, kTmpl));
}

TEST(SummaryTest, MedianAndInterval) {
  const std::vector<ColumnSpec> targets = {ColumnSpec::numeric("Z", 0)};
  const SampleSummary s = summarize_samples({{"3"}, {"1"}, {"2"}}, targets, 0.5);
  EXPECT_EQ(s.targets[0].median, 2.0);
  EXPECT_EQ(s.targets[0].lo, 1.5);
  EXPECT_EQ(s.targets[0].hi, 2.5);
  EXPECT_EQ(s.accepted, 3u);
}

TEST(SummaryTest, CategoricalFrequenciesAndTies) {
  const std::vector<ColumnSpec> targets = {ColumnSpec::categorical("Y", {"a", "b", "c"})};
  const SampleSummary s = summarize_samples({{"b"}, {"c"}, {"c"}, {"b"}}, targets, 0.9);
  EXPECT_EQ(s.targets[0].frequencies, (std::vector<double>{0.0, 0.5, 0.5}));
  EXPECT_EQ(s.targets[0].mode, 1u);
}

TEST(QuantileTest, Interpolates) {
  const std::vector<double> v = {0.0, 10.0};
  EXPECT_EQ(empirical_quantile(v, 0.25), 2.5);
  EXPECT_THROW(empirical_quantile(std::vector<double>{}, 0.5), ValidationError);
}

TEST(SamplingConfigTest, Validation) {
  SamplingConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.n_samples = 0;
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = {};
  cfg.interval_level = 1.0;
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = {};
  cfg.top_p = 0.0;
  EXPECT_THROW(cfg.validate(), ValidationError);
}

class PredictTest : public ::testing::Test {
 protected:
  PredictTest() : mock_(word_mock()) {
    mock_.set_next("Y: ", {{"yes", 0.6}, {"no", 0.4}});
    mock_.set_next(" yes", {{"\n", 1.0}});
    mock_.set_next(" no", {{"\n", 1.0}});
    targets_ = {ColumnSpec::categorical("Y", {"no", "yes"})};
  }
  MockLm mock_;
  std::vector<ColumnSpec> targets_;
};

TEST_F(PredictTest, GreedySamplingAgreesWithLogits) {
  SamplingConfig cfg;
  cfg.n_samples = 5;
  cfg.top_p = 1e-9;
  const Prompt p = one_feature_prompt();
  const auto logits = predict_point(mock_, p, targets_, kTmpl, PredictMode::kLogits, cfg);
  const auto sampled = predict_point(mock_, p, targets_, kTmpl, PredictMode::kSampling, cfg);
  EXPECT_EQ(logits[0].point, "yes");
  EXPECT_EQ(sampled[0].point, "yes");
  EXPECT_EQ(*sampled[0].acceptance_rate, 1.0);
  EXPECT_NEAR(logits[0].distribution->prob(1), 0.6, 1e-12);
}

TEST_F(PredictTest, SamplingFrequenciesAndDeterminism) {
  SamplingConfig cfg;
  cfg.n_samples = 400;
  cfg.top_p = 1.0;
  cfg.seed = 11;
  const Prompt p = one_feature_prompt();
  const auto a = predict_point(mock_, p, targets_, kTmpl, PredictMode::kSampling, cfg);
  cfg.jobs = 4;
  const auto b = predict_point(mock_, p, targets_, kTmpl, PredictMode::kSampling, cfg);
  EXPECT_EQ(a[0].distribution->logprob, b[0].distribution->logprob);
  EXPECT_NEAR(a[0].distribution->prob(1), 0.6, 0.08);
}

TEST_F(PredictTest, LogitsRejectsNumericTargets) {
  const std::vector<ColumnSpec> numeric = {ColumnSpec::numeric("Y", 0)};
  EXPECT_THROW(predict_point(mock_, one_feature_prompt(), numeric, kTmpl, PredictMode::kLogits,
                             SamplingConfig{}),
               ValidationError);
}

TEST_F(PredictTest, ExhaustedSamplingReportsRate) {
  MockLm bad = word_mock();
  bad.set_next("Y: ", {{"z", 1.0}});
  bad.set_next(": z", {{"\n", 1.0}});
  SamplingConfig cfg;
  cfg.n_samples = 3;
  cfg.max_attempts_per_sample = 4;
  try {
    predict_point(bad, one_feature_prompt(), targets_, kTmpl, PredictMode::kSampling, cfg);
    FAIL() << "expected SamplingError";
  } catch (const SamplingError& e) {
    EXPECT_EQ(e.acceptance_rate(), 0.0);
  }
}

TEST(HybridTest, NumericMedianChainsOnPredictions) {
  MockLm mock = word_mock(16);
  mock.set_next("A: 1; Y: ", {{"yes", 0.7}, {"no", 0.3}});
  mock.set_next("A: 1; Y: yes; Z: ", {{"4", 0.5}, {"6", 0.5}});
  mock.set_next("A: 1; Y: yes; Z: 4", {{"\n", 1.0}});
  mock.set_next("A: 1; Y: yes; Z: 6", {{"\n", 1.0}});
  mock.set_next("A: 1; Y: no; Z: ", {{"9", 1.0}});
  const Table t({ColumnSpec::numeric("A", 0)},
                {ColumnSpec::categorical("Y", {"no", "yes"}), ColumnSpec::numeric("Z", 0)},
                {{Decimal(1, 0), Missing{}, Missing{}}}, {RowRole::kTest});
  SamplingConfig cfg;
  cfg.n_samples = 201;
  cfg.seed = 5;
  const auto out = predict_point(mock, serialize(t, kTmpl, 0), t.target_columns(), kTmpl,
                                 PredictMode::kHybrid, cfg);
  EXPECT_EQ(out[0].point, "yes");
  ASSERT_TRUE(out[1].value);
  EXPECT_TRUE(*out[1].value == 4.0 || *out[1].value == 6.0);
  EXPECT_EQ(out[1].interval->first, 4.0);
  EXPECT_EQ(out[1].interval->second, 6.0);
}

}  // namespace
}  // namespace jolt
