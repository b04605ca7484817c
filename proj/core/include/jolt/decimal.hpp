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

#ifndef JOLT_DECIMAL_HPP_
#define JOLT_DECIMAL_HPP_

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace jolt {

// Fixed-point decimal stored as value * 10^precision. Rendering is exact, so
// the same number always serializes to the same bytes.
class Decimal {
 public:
  Decimal() = default;
  Decimal(std::int64_t scaled, int precision);

  // Parses "-?digits(.digits)?". Inputs with fewer fractional digits than
  // `precision` are zero-padded; inputs with more are rejected (nullopt).
  static std::optional<Decimal> parse(std::string_view text, int precision);

  // Rounds half away from zero.
  static Decimal from_double(double value, int precision);

  std::int64_t scaled() const { return scaled_; }
  int precision() const { return precision_; }
  double to_double() const;

  // Exactly `precision` digits after the point; zero never carries a sign.
  std::string to_string() const;

  friend bool operator==(const Decimal&, const Decimal&) = default;

 private:
  std::int64_t scaled_ = 0;
  int precision_ = 0;
};

// 10^n as an integer; n must be in [0, 18].
std::int64_t pow10_i64(int n);

// True when `text` is a syntactically valid plain decimal number
// ("-?digits(.digits)?").
bool is_plain_number(std::string_view text);

// Number of digits after the decimal point in a plain number.
int fractional_digits(std::string_view text);

}  // namespace jolt

#endif  // JOLT_DECIMAL_HPP_
