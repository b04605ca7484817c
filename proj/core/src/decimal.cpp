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

#include <cmath>
#include <cstdlib>
#include <limits>

#include "jolt/errors.hpp"

namespace jolt {

std::int64_t pow10_i64(int n) {
  if (n < 0 || n > 18) throw ValidationError("decimal precision out of range");
  std::int64_t p = 1;
  for (int i = 0; i < n; ++i) p *= 10;
  return p;
}

Decimal::Decimal(std::int64_t scaled, int precision)
    : scaled_(scaled), precision_(precision) {
  pow10_i64(precision);
}

bool is_plain_number(std::string_view text) {
  std::size_t i = 0;
  if (i < text.size() && text[i] == '-') ++i;
  const std::size_t int_start = i;
  while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
  if (i == int_start) return false;
  if (i == text.size()) return true;
  if (text[i] != '.') return false;
  ++i;
  const std::size_t frac_start = i;
  while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
  return i == text.size() && i > frac_start;
}

int fractional_digits(std::string_view text) {
  const auto dot = text.find('.');
  if (dot == std::string_view::npos) return 0;
  return static_cast<int>(text.size() - dot - 1);
}

std::optional<Decimal> Decimal::parse(std::string_view text, int precision) {
  if (!is_plain_number(text)) return std::nullopt;
  const int frac = fractional_digits(text);
  if (frac > precision) return std::nullopt;
  const bool negative = text.front() == '-';
  std::int64_t scaled = 0;
  constexpr auto kMax = std::numeric_limits<std::int64_t>::max();
  for (char c : text) {
    if (c < '0' || c > '9') continue;
    const int digit = c - '0';
    if (scaled > (kMax - digit) / 10) return std::nullopt;
    scaled = scaled * 10 + digit;
  }
  for (int i = frac; i < precision; ++i) {
    if (scaled > kMax / 10) return std::nullopt;
    scaled *= 10;
  }
  return Decimal(negative ? -scaled : scaled, precision);
}

Decimal Decimal::from_double(double value, int precision) {
  const double scaled = value * static_cast<double>(pow10_i64(precision));
  return Decimal(static_cast<std::int64_t>(std::round(scaled)), precision);
}

double Decimal::to_double() const {
  return static_cast<double>(scaled_) / static_cast<double>(pow10_i64(precision_));
}

std::string Decimal::to_string() const {
  const std::int64_t unit = pow10_i64(precision_);
  const std::uint64_t magnitude =
      scaled_ < 0 ? static_cast<std::uint64_t>(-(scaled_ + 1)) + 1
                  : static_cast<std::uint64_t>(scaled_);
  std::string out = scaled_ < 0 ? "-" : "";
  out += std::to_string(magnitude / static_cast<std::uint64_t>(unit));
  if (precision_ > 0) {
    std::string frac = std::to_string(magnitude % static_cast<std::uint64_t>(unit));
    out += '.';
    out.append(static_cast<std::size_t>(precision_) - frac.size(), '0');
    out += frac;
  }
  return out;
}

}  // namespace jolt
