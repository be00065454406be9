// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "parlog/error.hpp"
#include "parlog/rational.hpp"

namespace parlog {

/// Which formal variable a series is written in. On the cyclic cover the
/// coordinate is `t`; on the base it is `z`, with `t^order == z`.
enum class VarTag { T, Z };

inline char var_char(VarTag tag) { return tag == VarTag::T ? 't' : 'z'; }

struct Variable {
  VarTag tag = VarTag::T;
  int order = 1;

  Variable() = default;
  Variable(VarTag tag_, int order_) : tag(tag_), order(order_) {
    if (order_ < 1) throw Error(ErrorKind::InvalidInput, "variable order r must be >= 1");
  }

  friend bool operator==(const Variable&, const Variable&) = default;
};

/// Truncated Laurent series with exact rational coefficients.
///
/// Coefficients are known for every exponent `<= truncation()` and unknown
/// above it. Only nonzero coefficients are stored.
class LaurentSeries {
 public:
  LaurentSeries() = default;

  /// The zero series known up to `truncation`.
  LaurentSeries(Variable var, int truncation) : var_(var), trunc_(truncation) {}

  LaurentSeries(Variable var, std::map<int, Rational> terms, int truncation)
      : var_(var), trunc_(truncation) {
    for (auto& [k, c] : terms)
      if (k <= trunc_ && !c.is_zero()) terms_.emplace(k, std::move(c));
  }

  static LaurentSeries monomial(Variable var, Rational coeff, int exponent, int truncation) {
    return LaurentSeries(var, {{exponent, std::move(coeff)}}, truncation);
  }

  const Variable& variable() const { return var_; }
  int truncation() const { return trunc_; }
  const std::map<int, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Lowest exponent with a nonzero coefficient; empty for the zero series.
  std::optional<int> order() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.begin()->first;
  }

  /// Lower bound on the true valuation: the order if nonzero, otherwise
  /// the first unknown exponent.
  int valuation_bound() const { return terms_.empty() ? trunc_ + 1 : terms_.begin()->first; }

  Rational coefficient(int k) const {
    if (k > trunc_)
      throw Error(ErrorKind::TruncationExhausted, "coefficient of " + std::string(1, var_char(var_.tag)) + "^" +
                                                      std::to_string(k) + " lies above truncation " +
                                                      std::to_string(trunc_));
    auto it = terms_.find(k);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  /// Drops knowledge above `n`; `n` larger than the current truncation is clamped.
  LaurentSeries truncated(int n) const {
    LaurentSeries out(var_, std::min(n, trunc_));
    for (const auto& [k, c] : terms_)
      if (k <= out.trunc_) out.terms_.emplace(k, c);
    return out;
  }

  /// Exact multiplication by the monomial `var^k`.
  LaurentSeries shifted(int k) const {
    LaurentSeries out(var_, trunc_ + k);
    for (const auto& [e, c] : terms_) out.terms_.emplace(e + k, c);
    return out;
  }

  LaurentSeries scaled(const Rational& q) const {
    LaurentSeries out(var_, trunc_);
    if (q.is_zero()) return out;
    for (const auto& [e, c] : terms_) out.terms_.emplace(e, c * q);
    return out;
  }

  /// Agreement of all coefficients up to exponent `n`. Both series must be
  /// known that far.
  bool equal_up_to(const LaurentSeries& other, int n) const {
    if (var_ != other.var_) return false;
    if (n > trunc_ || n > other.trunc_) return false;
    auto a = terms_.begin();
    auto b = other.terms_.begin();
    while (true) {
      bool a_in = a != terms_.end() && a->first <= n;
      bool b_in = b != other.terms_.end() && b->first <= n;
      if (!a_in && !b_in) return true;
      if (a_in != b_in) return false;
      if (a->first != b->first || a->second != b->second) return false;
      ++a;
      ++b;
    }
  }

  friend bool operator==(const LaurentSeries& a, const LaurentSeries& b) {
    return a.var_ == b.var_ && a.trunc_ == b.trunc_ && a.terms_ == b.terms_;
  }

  std::string str() const;

 private:
  friend LaurentSeries series_add(const LaurentSeries&, const LaurentSeries&);
  friend LaurentSeries series_mul(const LaurentSeries&, const LaurentSeries&);

  Variable var_{};
  std::map<int, Rational> terms_;
  int trunc_ = 0;
};

inline void require_same_variable(const LaurentSeries& a, const LaurentSeries& b) {
  if (a.variable() != b.variable())
    throw Error(ErrorKind::VariableMismatch, "series in different variables");
}

inline LaurentSeries series_add(const LaurentSeries& a, const LaurentSeries& b) {
  require_same_variable(a, b);
  LaurentSeries out(a.var_, std::min(a.trunc_, b.trunc_));
  out.terms_ = a.truncated(out.trunc_).terms_;
  for (const auto& [k, c] : b.terms_) {
    if (k > out.trunc_) break;
    auto [it, inserted] = out.terms_.emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) out.terms_.erase(it);
    }
  }
  return out;
}

/// Cauchy product. The result is known up to
/// `min(N_a + v(b), N_b + v(a))`, where `v` is the order of a nonzero series
/// and `N + 1` for a zero one.
inline LaurentSeries series_mul(const LaurentSeries& a, const LaurentSeries& b) {
  require_same_variable(a, b);
  int n = std::min(a.trunc_ + b.valuation_bound(), b.trunc_ + a.valuation_bound());
  LaurentSeries out(a.var_, n);
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      int k = ka + kb;
      if (k > n) break;
      auto [it, inserted] = out.terms_.emplace(k, ca * cb);
      if (!inserted) it->second += ca * cb;
    }
  }
  std::erase_if(out.terms_, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

inline LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) { return series_add(a, b); }
inline LaurentSeries operator-(const LaurentSeries& a) { return a.scaled(Rational(-1)); }
inline LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return series_add(a, -b); }
inline LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) { return series_mul(a, b); }

/// Multiplicative inverse; `ord(result) == -ord(a)` and the result is known
/// up to `N - 2 ord(a)`.
inline LaurentSeries series_inverse(const LaurentSeries& a) {
  if (a.is_zero()) throw Error(ErrorKind::ZeroSeries, "cannot invert the zero series");
  const int v = *a.order();
  const int rel = a.truncation() - v;  // relative precision of the unit part
  const Rational inv_lead = Rational(1) / a.terms().begin()->second;
  std::vector<Rational> unit(static_cast<size_t>(rel) + 1);
  for (const auto& [k, c] : a.terms()) unit[static_cast<size_t>(k - v)] = c;
  std::vector<Rational> inv(static_cast<size_t>(rel) + 1);
  inv[0] = inv_lead;
  for (int k = 1; k <= rel; ++k) {
    Rational acc;
    for (int j = 1; j <= k; ++j)
      if (!unit[j].is_zero()) acc += unit[j] * inv[k - j];
    inv[k] = -(acc * inv_lead);
  }
  std::map<int, Rational> terms;
  for (int k = 0; k <= rel; ++k)
    if (!inv[k].is_zero()) terms.emplace(k - v, inv[k]);
  return LaurentSeries(a.variable(), std::move(terms), rel - v);
}

inline LaurentSeries series_derivative(const LaurentSeries& a) {
  std::map<int, Rational> terms;
  for (const auto& [k, c] : a.terms())
    if (k != 0) terms.emplace(k - 1, c * Rational(k));
  return LaurentSeries(a.variable(), std::move(terms), a.truncation() - 1);
}

inline int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Rewrites a series in `t` as a series in `z = t^r`.
inline LaurentSeries substitute_t_to_z(const LaurentSeries& a) {
  if (a.variable().tag != VarTag::T)
    throw Error(ErrorKind::VariableMismatch, "substitute_t_to_z expects a series in t");
  const int r = a.variable().order;
  std::map<int, Rational> terms;
  for (const auto& [k, c] : a.terms()) {
    if (k % r != 0)
      throw Error(ErrorKind::NonIntegralExponent,
                  "t^" + std::to_string(k) + " does not descend to z (r = " + std::to_string(r) + ")");
    terms.emplace(k / r, c);
  }
  return LaurentSeries(Variable(VarTag::Z, r), std::move(terms), floor_div(a.truncation(), r));
}

/// Inverse of substitute_t_to_z: `z^k -> t^{rk}`. Exponents in
/// `(rN, rN + r)` are known to vanish, so the truncation is `rN + r - 1`.
inline LaurentSeries substitute_z_to_t(const LaurentSeries& a) {
  if (a.variable().tag != VarTag::Z)
    throw Error(ErrorKind::VariableMismatch, "substitute_z_to_t expects a series in z");
  const int r = a.variable().order;
  std::map<int, Rational> terms;
  for (const auto& [k, c] : a.terms()) terms.emplace(k * r, c);
  return LaurentSeries(Variable(VarTag::T, r), std::move(terms), a.truncation() * r + r - 1);
}

/// The mu_r character of a series in t under `gamma . t = zeta^{-1} t`:
/// returns `w` in [0, r) with `gamma . a = zeta^w a`, or nothing when
/// the terms carry different weights. The zero series reports weight 0.
inline std::optional<int> mu_r_weight(const LaurentSeries& a) {
  if (a.variable().tag != VarTag::T)
    throw Error(ErrorKind::VariableMismatch, "mu_r_weight expects a series in t");
  const int r = a.variable().order;
  std::optional<int> w;
  for (const auto& [k, c] : a.terms()) {
    int wk = static_cast<int>(mod_floor(-static_cast<long long>(k), r));
    if (w && *w != wk) return std::nullopt;
    w = wk;
  }
  return w.value_or(0);
}

// ---------------------------------------------------------------------------
// Text form: `1/2*t^-1 + 3*t^2 - t^3 + O(t^13)`. `O(t^M)` means exponents
// >= M are unknown, i.e. truncation M - 1.

/// A parsed series before a variable order and default precision are
/// attached.
struct SeriesLiteral {
  std::optional<VarTag> tag;  // empty when the text names no variable
  std::map<int, Rational> terms;
  std::optional<int> big_o;  // the M of O(t^M)

  friend bool operator==(const SeriesLiteral&, const SeriesLiteral&) = default;

  LaurentSeries realize(VarTag expected, int r, int default_truncation) const {
    if (tag && *tag != expected)
      throw Error(ErrorKind::VariableMismatch, std::string("expected a series in ") + var_char(expected));
    return LaurentSeries(Variable(expected, r), terms, big_o ? *big_o - 1 : default_truncation);
  }
};

namespace detail {

inline std::string format_terms(char v, const std::map<int, Rational>& terms, std::optional<int> big_o) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms) {
    Rational mag = c.sign() < 0 ? -c : c;
    if (first) {
      if (c.sign() < 0) os << '-';
    } else {
      os << (c.sign() < 0 ? " - " : " + ");
    }
    first = false;
    if (k == 0) {
      os << mag.str();
      continue;
    }
    if (mag != Rational(1)) os << mag.str() << '*';
    os << v;
    if (k != 1) os << '^' << k;
  }
  if (big_o) {
    if (!first) os << " + ";
    os << "O(" << v << '^' << *big_o << ')';
    first = false;
  }
  if (first) os << '0';
  return os.str();
}

}  // namespace detail

inline std::string LaurentSeries::str() const {
  return detail::format_terms(var_char(var_.tag), terms_, trunc_ + 1);
}

inline std::string format_literal(const SeriesLiteral& lit) {
  const char v = var_char(lit.tag.value_or(VarTag::T));
  std::string s = detail::format_terms(v, lit.terms, lit.big_o);
  // A constant that still names its variable keeps it on re-read.
  const bool constant = lit.terms.empty() || (lit.terms.size() == 1 && lit.terms.begin()->first == 0);
  if (lit.tag && !lit.big_o && constant) s += std::string("*") + v + "^0";
  return s;
}

inline std::ostream& operator<<(std::ostream& os, const LaurentSeries& s) { return os << s.str(); }

/// Parses the text form. Throws Error(Parse) with the offending column
/// (0-based) in the message.
inline SeriesLiteral parse_series(std::string_view text) {
  SeriesLiteral lit;
  std::optional<char> var;
  size_t pos = 0;
  auto fail = [&](const std::string& msg) -> Error {
    return Error(ErrorKind::Parse, "column " + std::to_string(pos + 1) + ": " + msg);
  };
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto use_var = [&](char c) {
    if (var && *var != c) throw fail("mixed variables t and z");
    var = c;
  };
  auto read_int = [&]() -> int {
    skip_ws();
    size_t start = pos;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
    size_t digits = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == digits) throw fail("expected integer exponent");
    return std::stoi(std::string(text.substr(start, pos - start)));
  };
  auto read_exponent = [&]() -> int {
    skip_ws();
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      skip_ws();
      bool braced = pos < text.size() && text[pos] == '{';
      if (braced) ++pos;
      int e = read_int();
      skip_ws();
      if (braced) {
        if (pos >= text.size() || text[pos] != '}') throw fail("expected '}'");
        ++pos;
      }
      return e;
    }
    return 1;
  };

  skip_ws();
  if (pos == text.size()) throw fail("empty series");
  bool expect_term = true;
  int sign = 1;
  bool have_any = false;
  while (true) {
    skip_ws();
    if (pos == text.size()) {
      if (expect_term) throw fail("dangling operator");
      break;
    }
    char c = text[pos];
    if (!expect_term) {
      if (c == '+' || c == '-') {
        sign = c == '-' ? -1 : 1;
        ++pos;
        expect_term = true;
        continue;
      }
      throw fail(std::string("unexpected '") + c + "'");
    }
    if ((c == '+' || c == '-') && !have_any) {
      sign = c == '-' ? -1 : 1;
      ++pos;
      skip_ws();
      if (pos == text.size()) throw fail("dangling sign");
      c = text[pos];
    }
    if (c == 'O') {
      if (sign < 0) throw fail("negated O-term");
      ++pos;
      skip_ws();
      if (pos >= text.size() || text[pos] != '(') throw fail("expected '(' after O");
      ++pos;
      skip_ws();
      if (pos >= text.size() || (text[pos] != 't' && text[pos] != 'z')) throw fail("expected variable in O-term");
      use_var(text[pos]);
      ++pos;
      int m = read_exponent();
      skip_ws();
      if (pos >= text.size() || text[pos] != ')') throw fail("expected ')'");
      ++pos;
      if (lit.big_o) throw fail("more than one O-term");
      lit.big_o = m;
      skip_ws();
      if (pos != text.size()) throw fail("O-term must be last");
      break;
    }
    Rational coeff(1);
    bool have_coeff = false;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos;
      while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '/')) ++pos;
      try {
        coeff = Rational::parse(text.substr(start, pos - start));
      } catch (const Error&) {
        pos = start;
        throw fail("malformed coefficient");
      }
      have_coeff = true;
      skip_ws();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        skip_ws();
        c = pos < text.size() ? text[pos] : '\0';
      } else {
        lit.terms[0] += coeff * Rational(sign);
        have_any = true;
        expect_term = false;
        continue;
      }
    }
    if (c == 't' || c == 'z') {
      use_var(c);
      ++pos;
      int e = read_exponent();
      lit.terms[e] += coeff * Rational(sign);
    } else {
      throw fail(have_coeff ? "expected variable after '*'" : "expected term");
    }
    have_any = true;
    expect_term = false;
  }
  std::erase_if(lit.terms, [](const auto& kv) { return kv.second.is_zero(); });
  if (lit.big_o && !lit.terms.empty() && lit.terms.rbegin()->first >= *lit.big_o) {
    pos = 0;
    throw fail("term of degree " + std::to_string(lit.terms.rbegin()->first) + " lies inside the O-term");
  }
  if (var) lit.tag = *var == 'z' ? VarTag::Z : VarTag::T;
  return lit;
}

}  // namespace parlog
