// Copyright 2026 The Cheaptalk Authors.
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

#pragma once

// Numeric backends. Every algorithm in the library is templated on a scalar
// type that is either `Rational` (exact, arbitrary precision) or `double`.

#include <cmath>
#include <concepts>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

#include <boost/multiprecision/cpp_int.hpp>

namespace cheaptalk {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

template <typename T>
concept Scalar = std::same_as<T, Rational> || std::same_as<T, double>;

template <Scalar T>
inline constexpr bool kIsExact = std::same_as<T, Rational>;

// Absolute tolerance used by float-mode comparisons of gains and payoffs.
inline constexpr double kFloatTolerance = 1e-9;

// Tolerance for the "masses sum to one" check on floating distributions.
inline constexpr double kMassTolerance = 1e-12;

enum class NumericMode { kExact, kFloat };

inline std::string_view ToString(NumericMode mode) {
  return mode == NumericMode::kExact ? "exact" : "float";
}

template <Scalar T>
double ToDouble(const T& x) {
  if constexpr (kIsExact<T>) {
    return x.template convert_to<double>();
  } else {
    return x;
  }
}

// Converts between backends. double -> Rational is exact (binary expansion).
template <Scalar To, Scalar From>
To Convert(const From& x) {
  if constexpr (std::same_as<To, From>) {
    return x;
  } else if constexpr (kIsExact<To>) {
    if (!std::isfinite(x)) throw std::domain_error("non-finite value");
    return Rational(x);
  } else {
    return ToDouble(x);
  }
}

template <Scalar T>
T FromInt(std::int64_t v) {
  return T(v);
}

template <Scalar T>
bool IsZero(const T& x) {
  if constexpr (kIsExact<T>) {
    return x == 0;
  } else {
    return std::abs(x) <= kFloatTolerance;
  }
}

template <Scalar T>
T Abs(const T& x) {
  return x < 0 ? T(-x) : x;
}

// Parses "3", "-2/7", "0.125", "1e-3" or "-1.5E2" as an exact rational.
inline Rational ParseRational(std::string_view text) {
  auto fail = [&]() -> Rational {
    throw std::invalid_argument("cannot parse number '" + std::string(text) +
                                "'");
  };
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
      s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
      s.remove_suffix(1);
    }
    return s;
  };
  text = trim(text);
  if (text.empty()) return fail();

  auto parse_integer = [&](std::string_view s) -> BigInt {
    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
      negative = s.front() == '-';
      s.remove_prefix(1);
    }
    if (s.empty()) fail();
    BigInt value = 0;
    for (char c : s) {
      if (c < '0' || c > '9') fail();
      value = value * 10 + (c - '0');
    }
    return negative ? BigInt(-value) : value;
  };

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(trim(text.substr(0, slash)));
    BigInt den = parse_integer(trim(text.substr(slash + 1)));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  }

  std::string_view mantissa = text;
  std::int64_t exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = text.substr(0, e);
    std::string_view exp_text = text.substr(e + 1);
    BigInt big_exp = parse_integer(exp_text);
    if (big_exp > 4096 || big_exp < -4096) fail();
    exponent = big_exp.convert_to<std::int64_t>();
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa.front() == '+' || mantissa.front() == '-')) {
    negative = mantissa.front() == '-';
    mantissa.remove_prefix(1);
  }
  BigInt digits = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (char c : mantissa) {
    if (c == '.') {
      if (seen_point) fail();
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      digits = digits * 10 + (c - '0');
      seen_digit = true;
      if (seen_point) --exponent;
    } else {
      fail();
    }
  }
  if (!seen_digit) fail();
  BigInt scale = boost::multiprecision::pow(BigInt(10),
                                            static_cast<unsigned>(
                                                exponent < 0 ? -exponent
                                                             : exponent));
  Rational value = exponent < 0 ? Rational(digits, scale)
                                : Rational(digits * scale);
  return negative ? Rational(-value) : value;
}

template <Scalar T>
T ParseScalar(std::string_view text) {
  return Convert<T>(ParseRational(text));
}

// "p/q" for rationals ("p" when q = 1), shortest round-trip for doubles.
template <Scalar T>
std::string FormatScalar(const T& x) {
  if constexpr (kIsExact<T>) {
    return x.str();
  } else {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.17g", x);
    // Prefer the shortest representation that still round-trips.
    for (int precision = 1; precision < 17; ++precision) {
      char shorter[32];
      std::snprintf(shorter, sizeof(shorter), "%.*g", precision, x);
      if (std::strtod(shorter, nullptr) == x) return shorter;
    }
    return buffer;
  }
}

}  // namespace cheaptalk
