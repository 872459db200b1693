// Copyright 2026 The socrep Authors
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

#include "socrep/rational.hpp"

#include <charconv>
#include <numeric>
#include <ostream>

#include "socrep/error.hpp"

namespace socrep {

namespace detail {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw OverflowError("rational arithmetic overflow");
  }
  return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw OverflowError("rational arithmetic overflow");
  }
  return out;
}

}  // namespace detail

using detail::checked_add;
using detail::checked_mul;

Rational::Rational(std::int64_t num) : num_(num), den_(1) {}

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InvalidInput("rational with zero denominator");
  if (den < 0) {
    num = checked_mul(num, -1);
    den = checked_mul(den, -1);
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

double Rational::to_double() const {
  return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
  auto parse_int = [&](std::string_view part) {
    std::int64_t v = 0;
    if (!part.empty() && part.front() == '+') part.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc() || ptr != part.data() + part.size()) {
      throw ParseError("not a rational number: '" + std::string(text) + "'");
    }
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  const std::int64_t den = parse_int(text.substr(slash + 1));
  if (den == 0) {
    throw ParseError("zero denominator in '" + std::string(text) + "'");
  }
  return Rational(parse_int(text.substr(0, slash)), den);
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = checked_mul(num_, -1);
  r.den_ = den_;
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  const std::int64_t g = std::gcd(den_, o.den_);
  const std::int64_t left = checked_mul(num_, o.den_ / g);
  const std::int64_t right = checked_mul(o.num_, den_ / g);
  *this = Rational(checked_add(left, right), checked_mul(den_, o.den_ / g));
  return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
  const std::int64_t g1 = std::gcd(num_, o.den_);
  const std::int64_t g2 = std::gcd(o.num_, den_);
  const std::int64_t n = checked_mul(num_ / (g1 ? g1 : 1), o.num_ / (g2 ? g2 : 1));
  const std::int64_t d = checked_mul(den_ / (g2 ? g2 : 1), o.den_ / (g1 ? g1 : 1));
  *this = Rational(n, d);
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_ == 0) throw DomainError("division by zero");
  return *this *= Rational(o.den_, o.num_);
}

__extension__ typedef __int128 Wide;

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const Wide lhs = static_cast<Wide>(a.num_) * b.den_;
  const Wide rhs = static_cast<Wide>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.str();
}

}  // namespace socrep
