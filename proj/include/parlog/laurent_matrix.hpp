// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "parlog/error.hpp"
#include "parlog/rational.hpp"
#include "parlog/series.hpp"

namespace parlog {

/// Dense square matrix over the rationals.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  explicit RationalMatrix(int n) : n_(n), data_(static_cast<size_t>(n) * n) {}

  static RationalMatrix identity(int n) {
    RationalMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = Rational(1);
    return m;
  }

  int size() const { return n_; }
  Rational& operator()(int i, int j) { return data_[static_cast<size_t>(i) * n_ + j]; }
  const Rational& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * n_ + j]; }

  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

  std::string str() const {
    std::ostringstream os;
    os << '[';
    for (int i = 0; i < n_; ++i) {
      os << (i ? ", [" : "[");
      for (int j = 0; j < n_; ++j) os << (j ? ", " : "") << (*this)(i, j).str();
      os << ']';
    }
    os << ']';
    return os.str();
  }

 private:
  int n_ = 0;
  std::vector<Rational> data_;
};

/// Square matrix of Laurent series in one variable. All entries share a
/// truncation: construction lowers every entry to the smallest one.
class LaurentMatrix {
 public:
  LaurentMatrix() = default;

  /// Zero matrix known up to `truncation`.
  LaurentMatrix(int n, Variable var, int truncation)
      : n_(n), var_(var), trunc_(truncation), entries_(static_cast<size_t>(n) * n, LaurentSeries(var, truncation)) {
    if (n < 1) throw Error(ErrorKind::InvalidInput, "matrix size must be positive");
  }

  LaurentMatrix(int n, std::vector<LaurentSeries> entries) : n_(n), entries_(std::move(entries)) {
    if (n < 1) throw Error(ErrorKind::InvalidInput, "matrix size must be positive");
    if (entries_.size() != static_cast<size_t>(n) * n)
      throw Error(ErrorKind::InvalidInput, "expected " + std::to_string(n * n) + " matrix entries");
    var_ = entries_.front().variable();
    trunc_ = entries_.front().truncation();
    for (const auto& e : entries_) {
      if (e.variable() != var_) throw Error(ErrorKind::VariableMismatch, "matrix entries in different variables");
      trunc_ = std::min(trunc_, e.truncation());
    }
    for (auto& e : entries_) e = e.truncated(trunc_);
  }

  int size() const { return n_; }
  const Variable& variable() const { return var_; }
  int truncation() const { return trunc_; }
  const LaurentSeries& operator()(int i, int j) const { return entries_[index(i, j)]; }
  const std::vector<LaurentSeries>& entries() const { return entries_; }

  /// Returns a copy with entry (i, j) replaced; the shared truncation is
  /// re-normalised.
  LaurentMatrix with(int i, int j, LaurentSeries s) const {
    std::vector<LaurentSeries> e = entries_;
    e[index(i, j)] = std::move(s);
    return LaurentMatrix(n_, std::move(e));
  }

  LaurentMatrix truncated(int n) const {
    std::vector<LaurentSeries> e;
    e.reserve(entries_.size());
    for (const auto& s : entries_) e.push_back(s.truncated(n));
    return LaurentMatrix(n_, std::move(e));
  }

  bool equal_up_to(const LaurentMatrix& other, int n) const {
    if (other.n_ != n_) return false;
    for (size_t k = 0; k < entries_.size(); ++k)
      if (!entries_[k].equal_up_to(other.entries_[k], n)) return false;
    return true;
  }

  friend bool operator==(const LaurentMatrix&, const LaurentMatrix&) = default;

  friend LaurentMatrix operator+(const LaurentMatrix& a, const LaurentMatrix& b) {
    require_same_shape(a, b);
    std::vector<LaurentSeries> e;
    for (size_t k = 0; k < a.entries_.size(); ++k) e.push_back(a.entries_[k] + b.entries_[k]);
    return LaurentMatrix(a.n_, std::move(e));
  }

  friend LaurentMatrix operator*(const LaurentMatrix& a, const LaurentMatrix& b) {
    require_same_shape(a, b);
    std::vector<LaurentSeries> e;
    e.reserve(a.entries_.size());
    for (int i = 0; i < a.n_; ++i) {
      for (int j = 0; j < a.n_; ++j) {
        LaurentSeries acc = a(i, 0) * b(0, j);
        for (int k = 1; k < a.n_; ++k) acc = acc + a(i, k) * b(k, j);
        e.push_back(std::move(acc));
      }
    }
    return LaurentMatrix(a.n_, std::move(e));
  }

  /// Applies `f` to every entry.
  template <class F>
  LaurentMatrix map(F&& f) const {
    std::vector<LaurentSeries> e;
    e.reserve(entries_.size());
    for (const auto& s : entries_) e.push_back(f(s));
    return LaurentMatrix(n_, std::move(e));
  }

  /// Constant-term matrix; requires truncation >= 0.
  RationalMatrix constant_term() const {
    RationalMatrix m(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) m(i, j) = (*this)(i, j).coefficient(0);
    return m;
  }

 private:
  size_t index(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) throw Error(ErrorKind::InvalidInput, "matrix index out of range");
    return static_cast<size_t>(i) * n_ + j;
  }

  static void require_same_shape(const LaurentMatrix& a, const LaurentMatrix& b) {
    if (a.n_ != b.n_) throw Error(ErrorKind::InvalidInput, "matrix size mismatch");
    if (a.var_ != b.var_) throw Error(ErrorKind::VariableMismatch, "matrices in different variables");
  }

  int n_ = 0;
  Variable var_{};
  int trunc_ = 0;
  std::vector<LaurentSeries> entries_;
};

inline LaurentMatrix matrix_derivative(const LaurentMatrix& m) { return m.map(series_derivative); }

}  // namespace parlog
