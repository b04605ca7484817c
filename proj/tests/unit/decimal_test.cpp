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

#include "jolt/decimal.hpp"

#include <gtest/gtest.h>

namespace jolt {
namespace {

TEST(DecimalTest, ParsePadsShortFractions) {
  auto d = Decimal::parse("24", 1);
  ASSERT_TRUE(d.has_value());
  EXPECT_EQ(d->scaled(), 240);
  EXPECT_EQ(d->to_string(), "24.0");
}

TEST(DecimalTest, ParseRejectsExtraDigits) {
  EXPECT_FALSE(Decimal::parse("0.051", 2).has_value());
  EXPECT_TRUE(Decimal::parse("0.051", 3).has_value());
}

TEST(DecimalTest, ParseRejectsMalformed) {
  for (const char* bad : {"", "-", ".5", "5.", "1e3", "+1", "1.2.3", " 1", "0x10"}) {
    EXPECT_FALSE(Decimal::parse(bad, 2).has_value()) << bad;
  }
}

TEST(DecimalTest, NegativeRendering) {
  EXPECT_EQ(Decimal::parse("-0.5", 2)->to_string(), "-0.50");
  EXPECT_EQ(Decimal::parse("-12", 0)->to_string(), "-12");
  EXPECT_EQ(Decimal(-5, 3).to_string(), "-0.005");
}

TEST(DecimalTest, ZeroHasNoSign) {
  EXPECT_EQ(Decimal::parse("-0.0", 1)->to_string(), "0.0");
  EXPECT_EQ(Decimal::from_double(-0.04, 1).to_string(), "0.0");
}

TEST(DecimalTest, FromDoubleRoundsHalfAwayFromZero) {
  EXPECT_EQ(Decimal::from_double(2.5, 0).to_string(), "3");
  EXPECT_EQ(Decimal::from_double(-2.5, 0).to_string(), "-3");
  EXPECT_EQ(Decimal::from_double(0.125, 2).to_string(), "0.13");
  EXPECT_EQ(Decimal::from_double(11.04, 1).to_string(), "11.0");
}

TEST(DecimalTest, ToDouble) {
  EXPECT_DOUBLE_EQ(Decimal::parse("3.37", 2)->to_double(), 3.37);
  EXPECT_DOUBLE_EQ(Decimal(-1234, 3).to_double(), -1.234);
}

TEST(DecimalTest, PlainNumberHelpers) {
  EXPECT_TRUE(is_plain_number("-12.50"));
  EXPECT_FALSE(is_plain_number("12."));
  EXPECT_EQ(fractional_digits("12.50"), 2);
  EXPECT_EQ(fractional_digits("7"), 0);
  EXPECT_EQ(pow10_i64(0), 1);
  EXPECT_EQ(pow10_i64(18), 1000000000000000000LL);
}

TEST(DecimalTest, RoundTripAtPrecision) {
  for (const char* text : {"0.992", "111.000", "-3.140", "0.000"}) {
    EXPECT_EQ(Decimal::parse(text, 3)->to_string(), text);
  }
}

}  // namespace
}  // namespace jolt
