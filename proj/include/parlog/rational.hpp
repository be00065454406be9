// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>

#include "parlog/error.hpp"

namespace parlog {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number, always in lowest terms with a positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(int v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(long long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(long long num, long long den) {
    if (den == 0) throw Error(ErrorKind::InvalidInput, "zero denominator");
    v_ = boost::multiprecision::cpp_rational(num, den);
  }
  explicit Rational(boost::multiprecision::cpp_rational v) : v_(std::move(v)) {}

  BigInt numerator() const { return boost::multiprecision::numerator(v_); }
  BigInt denominator() const { return boost::multiprecision::denominator(v_); }

  bool is_zero() const { return v_.is_zero(); }
  bool is_integer() const { return denominator() == 1; }
  int sign() const { return v_.sign(); }

  /// Floor toward negative infinity.
  BigInt floor() const {
    BigInt n = numerator();
    BigInt d = denominator();
    BigInt q = n / d;  // truncates toward zero
    if (n < 0 && q * d != n) --q;
    return q;
  }

  /// Floor as a machine integer; throws when it does not fit.
  long long floor_ll() const { return to_ll(floor()); }

  /// Exact conversion to a machine integer; throws unless integral.
  long long to_ll() const {
    if (!is_integer()) throw Error(ErrorKind::InvalidInput, "rational " + str() + " is not an integer");
    return to_ll(numerator());
  }

  std::string str() const {
    if (is_integer()) return numerator().str();
    return numerator().str() + "/" + denominator().str();
  }

  /// Accepts `p`, `-p`, `p/q` with optional surrounding whitespace.
  static Rational parse(std::string_view text) {
    auto trim = [](std::string_view s) {
      while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
      while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
      return s;
    };
    text = trim(text);
    auto slash = text.find('/');
    auto parse_int = [&](std::string_view s) -> BigInt {
      s = trim(s);
      bool neg = false;
      if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        neg = s.front() == '-';
        s.remove_prefix(1);
      }
      if (s.empty()) throw Error(ErrorKind::Parse, "malformed rational '" + std::string(text) + "'");
      for (char c : s)
        if (c < '0' || c > '9') throw Error(ErrorKind::Parse, "malformed rational '" + std::string(text) + "'");
      BigInt v{std::string(s)};
      return neg ? BigInt(-v) : v;
    };
    if (slash == std::string_view::npos) return Rational(boost::multiprecision::cpp_rational(parse_int(text)));
    BigInt num = parse_int(text.substr(0, slash));
    BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0) throw Error(ErrorKind::Parse, "zero denominator in '" + std::string(text) + "'");
    return Rational(boost::multiprecision::cpp_rational(num, den));
  }

  const boost::multiprecision::cpp_rational& value() const { return v_; }

  Rational operator-() const { return Rational(boost::multiprecision::cpp_rational(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw Error(ErrorKind::InvalidInput, "division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.str(); }

 private:
  static long long to_ll(const BigInt& v) {
    if (v > std::numeric_limits<long long>::max() || v < std::numeric_limits<long long>::min())
      throw Error(ErrorKind::InvalidInput, "integer out of range: " + v.str());
    return v.convert_to<long long>();
  }

  boost::multiprecision::cpp_rational v_;
};

/// Non-negative remainder of `a` modulo `m > 0`.
inline long long mod_floor(long long a, long long m) {
  long long q = a % m;
  return q < 0 ? q + m : q;
}

}  // namespace parlog
