// Copyright 2026 The AFC Authors. All Rights Reserved.
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
// =============================================================================

#ifndef AFC_RATIONAL_HPP_
#define AFC_RATIONAL_HPP_

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <string>
#include <string_view>

#include "afc/errors.hpp"

namespace afc {

/// Exact rational number num/den with den >= 1, always in lowest terms.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t num) : num_(num), den_(1) {}  // NOLINT
  constexpr Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (den_ == 0) throw DomainError("Rational: zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  constexpr std::int64_t num() const { return num_; }
  constexpr std::int64_t den() const { return den_; }
  constexpr double value() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }
  constexpr bool is_integer() const { return den_ == 1; }

  friend constexpr Rational operator+(Rational a, Rational b) {
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
  }
  friend constexpr Rational operator-(Rational a) { return {-a.num_, a.den_}; }
  friend constexpr Rational operator-(Rational a, Rational b) { return a + (-b); }
  friend constexpr Rational operator*(Rational a, Rational b) {
    return {a.num_ * b.num_, a.den_ * b.den_};
  }
  friend constexpr Rational operator/(Rational a, Rational b) {
    if (b.num_ == 0) throw DomainError("Rational: division by zero");
    return {a.num_ * b.den_, a.den_ * b.num_};
  }
  friend constexpr bool operator==(Rational a, Rational b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend constexpr std::strong_ordering operator<=>(Rational a, Rational b) {
    return a.num_ * b.den_ <=> b.num_ * a.den_;
  }

  std::string to_string() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Parses "m/n" or "m".
  static Rational parse(std::string_view s) {
    const auto slash = s.find('/');
    auto to_int = [&](std::string_view part) {
      if (part.empty()) throw ConfigError("bad rational '" + std::string(s) + "'");
      std::size_t used = 0;
      std::int64_t v = 0;
      try {
        v = std::stoll(std::string(part), &used);
      } catch (const std::exception&) {
        throw ConfigError("bad rational '" + std::string(s) + "'");
      }
      if (used != part.size()) {
        throw ConfigError("bad rational '" + std::string(s) + "'");
      }
      return v;
    };
    if (slash == std::string_view::npos) return Rational(to_int(s));
    const auto den = to_int(s.substr(slash + 1));
    if (den <= 0) throw ConfigError("bad rational '" + std::string(s) + "'");
    return Rational(to_int(s.substr(0, slash)), den);
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// 2-D translation in pixels: dy along rows (height), dx along columns (width).
struct RationalShift {
  Rational dy;
  Rational dx;

  bool is_zero() const { return dy.num() == 0 && dx.num() == 0; }
  RationalShift operator-() const { return {-dy, -dx}; }
  RationalShift scaled(Rational f) const { return {dy * f, dx * f}; }

  std::string to_string() const { return dy.to_string() + "," + dx.to_string(); }

  /// Parses "m1/n1,m2/n2".
  static RationalShift parse(std::string_view s) {
    const auto comma = s.find(',');
    if (comma == std::string_view::npos) {
      throw ConfigError("bad shift '" + std::string(s) + "', expected m1/n1,m2/n2");
    }
    return {Rational::parse(s.substr(0, comma)), Rational::parse(s.substr(comma + 1))};
  }

  friend bool operator==(const RationalShift&, const RationalShift&) = default;
  friend auto operator<=>(const RationalShift& a, const RationalShift& b) {
    if (auto c = a.dy <=> b.dy; c != 0) return c;
    return a.dx <=> b.dx;
  }
};

}  // namespace afc

#endif  // AFC_RATIONAL_HPP_
