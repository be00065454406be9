// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "parlog/error.hpp"
#include "parlog/laurent_matrix.hpp"
#include "parlog/rational.hpp"
#include "parlog/series.hpp"

namespace parlog {

/// A basis vector of the Lie algebra: a Cartan generator h[i] or a root
/// vector x[alpha]. Indices are 0-based internally and printed 1-based.
struct BasisLabel {
  enum class Kind { Cartan, Root };
  Kind kind = Kind::Cartan;
  int index = 0;

  static BasisLabel cartan(int i) { return {Kind::Cartan, i}; }
  static BasisLabel root(int a) { return {Kind::Root, a}; }

  std::string str() const { return (kind == Kind::Cartan ? "h[" : "x[") + std::to_string(index + 1) + "]"; }

  friend auto operator<=>(const BasisLabel&, const BasisLabel&) = default;
};

/// One term `coeff * basis[index]` of a structure-constant expansion.
struct StructureTerm {
  int basis = 0;
  Rational coeff;
};

/// Roots are stored as integer vectors: their values on the chosen basis
/// of the cocharacter lattice, which is also the Cartan basis h_1..h_l.
///
/// Type A systems carry structure constants computed from the defining
/// matrix representation; systems built from a bare root list support
/// everything except brackets.
class RootSystem {
 public:
  /// sl_{rank+1} with the simple coroots as Cartan basis.
  static RootSystem type_a(int rank) {
    if (rank < 1) throw Error(ErrorKind::InvalidInput, "type A rank must be >= 1");
    return matrix_family("A" + std::to_string(rank), rank + 1, false);
  }

  /// gl_n with the diagonal matrix units E_ii as Cartan basis.
  static RootSystem gl(int n) {
    if (n < 1) throw Error(ErrorKind::InvalidInput, "gl_n needs n >= 1");
    return matrix_family("gl" + std::to_string(n), n, true);
  }

  /// A user-supplied root list, closed under negation.
  static RootSystem from_roots(int rank, std::vector<std::vector<int>> roots) {
    if (rank < 1) throw Error(ErrorKind::InvalidInput, "rank must be >= 1");
    RootSystem rs;
    rs.name_ = "custom";
    rs.rank_ = rank;
    std::set<std::vector<int>> seen;
    for (const auto& a : roots) {
      if (static_cast<int>(a.size()) != rank)
        throw Error(ErrorKind::InvalidInput, "root has " + std::to_string(a.size()) + " components, rank is " +
                                                 std::to_string(rank));
      bool zero = true;
      for (int v : a) zero = zero && v == 0;
      if (zero) throw Error(ErrorKind::InvalidInput, "zero vector is not a root");
      if (!seen.insert(a).second) throw Error(ErrorKind::InvalidInput, "duplicate root");
    }
    for (const auto& a : roots) {
      std::vector<int> neg(a);
      for (int& v : neg) v = -v;
      if (!seen.count(neg)) throw Error(ErrorKind::InvalidInput, "root list is not closed under negation");
    }
    rs.roots_ = std::move(roots);
    return rs;
  }

  const std::string& name() const { return name_; }
  int rank() const { return rank_; }
  int root_count() const { return static_cast<int>(roots_.size()); }
  int dim() const { return rank_ + root_count(); }
  const std::vector<std::vector<int>>& roots() const { return roots_; }
  const std::vector<int>& root(int a) const { return roots_.at(static_cast<size_t>(a)); }

  std::optional<int> root_index(const std::vector<int>& v) const {
    for (int a = 0; a < root_count(); ++a)
      if (roots_[static_cast<size_t>(a)] == v) return a;
    return std::nullopt;
  }

  int negative(int a) const {
    std::vector<int> neg(root(a));
    for (int& v : neg) v = -v;
    return *root_index(neg);
  }

  /// Flat basis numbering: Cartan generators first, then roots.
  BasisLabel label(int basis) const {
    return basis < rank_ ? BasisLabel::cartan(basis) : BasisLabel::root(basis - rank_);
  }
  int basis_index(BasisLabel l) const { return l.kind == BasisLabel::Kind::Cartan ? l.index : rank_ + l.index; }

  bool has_structure_constants() const { return !table_.empty(); }

  /// `[b_a, b_c]` expanded in the basis.
  const std::vector<StructureTerm>& bracket_basis(int a, int c) const {
    if (table_.empty())
      throw Error(ErrorKind::Unsupported, "no structure constants for root system '" + name_ + "'");
    return table_[static_cast<size_t>(a) * dim() + c];
  }

  std::string root_str(int a) const {
    std::ostringstream os;
    os << '(';
    for (size_t i = 0; i < root(a).size(); ++i) os << (i ? "," : "") << root(a)[i];
    os << ')';
    return os.str();
  }

  friend bool operator==(const RootSystem& a, const RootSystem& b) {
    return a.name_ == b.name_ && a.rank_ == b.rank_ && a.roots_ == b.roots_;
  }

 private:
  // Matrix realisation: basis elements are n x n rational matrices.
  static RootSystem matrix_family(std::string name, int n, bool gl) {
    RootSystem rs;
    rs.name_ = std::move(name);
    rs.rank_ = gl ? n : n - 1;
    std::vector<RationalMatrix> basis;
    for (int k = 0; k < rs.rank_; ++k) {
      RationalMatrix h(n);
      h(k, k) = Rational(1);
      if (!gl) h(k + 1, k + 1) = Rational(-1);
      basis.push_back(h);
    }
    std::vector<std::pair<int, int>> units;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) units.emplace_back(a, b);
    const size_t positive = units.size();
    for (size_t k = 0; k < positive; ++k) units.emplace_back(units[k].second, units[k].first);
    for (auto [a, b] : units) {
      std::vector<int> v;
      for (int k = 0; k < rs.rank_; ++k) v.push_back((basis[k](a, a) - basis[k](b, b)).to_ll());
      rs.roots_.push_back(std::move(v));
      RationalMatrix e(n);
      e(a, b) = Rational(1);
      basis.push_back(e);
    }
    const int d = rs.dim();
    rs.table_.resize(static_cast<size_t>(d) * d);
    for (int p = 0; p < d; ++p) {
      for (int q = 0; q < d; ++q) {
        RationalMatrix c = commutator(basis[p], basis[q]);
        auto& terms = rs.table_[static_cast<size_t>(p) * d + q];
        // Diagonal part in the Cartan basis.
        Rational running;
        for (int k = 0; k < rs.rank_; ++k) {
          Rational coeff = gl ? c(k, k) : (running += c(k, k));
          if (!coeff.is_zero()) terms.push_back({k, coeff});
        }
        for (size_t u = 0; u < units.size(); ++u) {
          const Rational& coeff = c(units[u].first, units[u].second);
          if (!coeff.is_zero()) terms.push_back({rs.rank_ + static_cast<int>(u), coeff});
        }
      }
    }
    return rs;
  }

  static RationalMatrix commutator(const RationalMatrix& x, const RationalMatrix& y) {
    const int n = x.size();
    RationalMatrix c(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) c(i, j) += x(i, k) * y(k, j) - y(i, k) * x(k, j);
    return c;
  }

  std::string name_;
  int rank_ = 0;
  std::vector<std::vector<int>> roots_;
  std::vector<std::vector<StructureTerm>> table_;
};

using RootSystemPtr = std::shared_ptr<const RootSystem>;

inline RootSystemPtr make_root_system(RootSystem rs) { return std::make_shared<const RootSystem>(std::move(rs)); }

inline void require_same_system(const RootSystemPtr& a, const RootSystemPtr& b) {
  if (a != b && !(a && b && *a == *b)) throw Error(ErrorKind::InvalidInput, "root system mismatch");
}

/// Rational cocharacter theta with `r * theta` integral, in the Cartan basis.
class Coweight {
 public:
  Coweight(RootSystemPtr rs, int r, std::vector<Rational> components)
      : rs_(std::move(rs)), r_(r), comps_(std::move(components)) {
    if (r_ < 1) throw Error(ErrorKind::InvalidInput, "r must be >= 1");
    if (static_cast<int>(comps_.size()) != rs_->rank())
      throw Error(ErrorKind::InvalidInput, "coweight has " + std::to_string(comps_.size()) + " components, rank is " +
                                               std::to_string(rs_->rank()));
    for (const auto& c : comps_)
      if (!(c * Rational(r_)).is_integer())
        throw Error(ErrorKind::InvalidInput,
                    "coweight component " + c.str() + " has denominator not dividing r = " + std::to_string(r_));
  }

  static Coweight zero(RootSystemPtr rs, int r) {
    const int l = rs->rank();
    return Coweight(std::move(rs), r, std::vector<Rational>(static_cast<size_t>(l)));
  }

  const RootSystemPtr& root_system() const { return rs_; }
  int r() const { return r_; }
  const std::vector<Rational>& components() const { return comps_; }

  std::string str() const {
    std::ostringstream os;
    os << '[';
    for (size_t i = 0; i < comps_.size(); ++i) os << (i ? ", " : "") << comps_[i].str();
    os << ']';
    return os.str();
  }

  friend bool operator==(const Coweight& a, const Coweight& b) {
    return a.r_ == b.r_ && a.comps_ == b.comps_ && *a.rs_ == *b.rs_;
  }

 private:
  RootSystemPtr rs_;
  int r_;
  std::vector<Rational> comps_;
};

/// alpha(theta) for the root with the given index.
inline Rational pairing(const Coweight& theta, int root) {
  const auto& rs = *theta.root_system();
  if (root < 0 || root >= rs.root_count()) throw Error(ErrorKind::InvalidInput, "root index out of range");
  Rational acc;
  const auto& a = rs.root(root);
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0) acc += Rational(a[i]) * theta.components()[i];
  return acc;
}

inline Rational pairing(const Coweight& theta, const std::vector<int>& root) {
  auto idx = theta.root_system()->root_index(root);
  if (!idx) throw Error(ErrorKind::InvalidInput, "vector is not a root of " + theta.root_system()->name());
  return pairing(theta, *idx);
}

/// m_alpha(theta) = -floor(alpha(theta)).
inline long long m_alpha(const Coweight& theta, int root) { return -pairing(theta, root).floor_ll(); }

/// Basis labels spanning the lambda-eigenspace of ad(theta) on g.
inline std::vector<BasisLabel> theta_eigenspace(const Coweight& theta, const Rational& lambda) {
  std::vector<BasisLabel> out;
  const auto& rs = *theta.root_system();
  if (lambda.is_zero())
    for (int i = 0; i < rs.rank(); ++i) out.push_back(BasisLabel::cartan(i));
  for (int a = 0; a < rs.root_count(); ++a)
    if (pairing(theta, a) == lambda) out.push_back(BasisLabel::root(a));
  return out;
}

/// Element of g((var)): one Laurent series per basis vector. All
/// coefficients share one variable and truncation.
class LieAlgebraElement {
 public:
  LieAlgebraElement() = default;

  static LieAlgebraElement zero(RootSystemPtr rs, Variable var, int truncation) {
    LieAlgebraElement x;
    const int d = rs->dim();
    x.rs_ = std::move(rs);
    x.var_ = var;
    x.trunc_ = truncation;
    x.coeffs_.assign(static_cast<size_t>(d), LaurentSeries(var, truncation));
    return x;
  }

  /// `coeffs` indexed by flat basis index (Cartan first, then roots).
  LieAlgebraElement(RootSystemPtr rs, std::vector<LaurentSeries> coeffs) : rs_(std::move(rs)), coeffs_(std::move(coeffs)) {
    if (static_cast<int>(coeffs_.size()) != rs_->dim())
      throw Error(ErrorKind::InvalidInput, "expected " + std::to_string(rs_->dim()) + " coefficients");
    var_ = coeffs_.front().variable();
    trunc_ = coeffs_.front().truncation();
    for (const auto& c : coeffs_) {
      if (c.variable() != var_) throw Error(ErrorKind::VariableMismatch, "coefficients in different variables");
      trunc_ = std::min(trunc_, c.truncation());
    }
    for (auto& c : coeffs_) c = c.truncated(trunc_);
  }

  /// The constant Cartan element with the given components.
  static LieAlgebraElement constant_cartan(const Coweight& theta, Variable var, int truncation) {
    auto x = zero(theta.root_system(), var, truncation);
    for (int i = 0; i < x.rs_->rank(); ++i)
      x.coeffs_[static_cast<size_t>(i)] = LaurentSeries::monomial(var, theta.components()[i], 0, truncation);
    return x;
  }

  const RootSystemPtr& root_system() const { return rs_; }
  const Variable& variable() const { return var_; }
  int truncation() const { return trunc_; }
  const std::vector<LaurentSeries>& coefficients() const { return coeffs_; }
  const LaurentSeries& operator[](BasisLabel l) const { return coeffs_.at(static_cast<size_t>(rs_->basis_index(l))); }
  const LaurentSeries& cartan(int i) const { return (*this)[BasisLabel::cartan(i)]; }
  const LaurentSeries& root(int a) const { return (*this)[BasisLabel::root(a)]; }

  LieAlgebraElement with(BasisLabel l, LaurentSeries s) const {
    auto c = coeffs_;
    c.at(static_cast<size_t>(rs_->basis_index(l))) = std::move(s);
    return LieAlgebraElement(rs_, std::move(c));
  }

  /// Applies `f(label, series)` to every coefficient.
  template <class F>
  LieAlgebraElement map(F&& f) const {
    std::vector<LaurentSeries> c;
    c.reserve(coeffs_.size());
    for (int b = 0; b < rs_->dim(); ++b) c.push_back(f(rs_->label(b), coeffs_[static_cast<size_t>(b)]));
    return LieAlgebraElement(rs_, std::move(c));
  }

  LieAlgebraElement truncated(int n) const {
    return map([n](BasisLabel, const LaurentSeries& s) { return s.truncated(n); });
  }

  bool is_zero() const {
    for (const auto& c : coeffs_)
      if (!c.is_zero()) return false;
    return true;
  }

  bool equal_up_to(const LieAlgebraElement& o, int n) const {
    require_same_system(rs_, o.rs_);
    for (size_t b = 0; b < coeffs_.size(); ++b)
      if (!coeffs_[b].equal_up_to(o.coeffs_[b], n)) return false;
    return true;
  }

  friend bool operator==(const LieAlgebraElement& a, const LieAlgebraElement& b) {
    return *a.rs_ == *b.rs_ && a.coeffs_ == b.coeffs_;
  }

  friend LieAlgebraElement operator+(const LieAlgebraElement& a, const LieAlgebraElement& b) {
    require_same_system(a.rs_, b.rs_);
    std::vector<LaurentSeries> c;
    for (size_t k = 0; k < a.coeffs_.size(); ++k) c.push_back(a.coeffs_[k] + b.coeffs_[k]);
    return LieAlgebraElement(a.rs_, std::move(c));
  }

  friend LieAlgebraElement operator-(const LieAlgebraElement& a, const LieAlgebraElement& b) {
    require_same_system(a.rs_, b.rs_);
    std::vector<LaurentSeries> c;
    for (size_t k = 0; k < a.coeffs_.size(); ++k) c.push_back(a.coeffs_[k] - b.coeffs_[k]);
    return LieAlgebraElement(a.rs_, std::move(c));
  }

  LieAlgebraElement scaled(const Rational& q) const {
    return map([&q](BasisLabel, const LaurentSeries& s) { return s.scaled(q); });
  }

  /// Nonzero coefficients, one line per basis vector.
  std::string str() const {
    std::ostringstream os;
    bool any = false;
    for (int b = 0; b < rs_->dim(); ++b) {
      const auto& c = coeffs_[static_cast<size_t>(b)];
      if (c.is_zero()) continue;
      os << (any ? "\n" : "") << rs_->label(b).str() << ": " << c.str();
      any = true;
    }
    if (!any) os << "0 + O(" << var_char(var_.tag) << '^' << trunc_ + 1 << ')';
    return os.str();
  }

 private:
  RootSystemPtr rs_;
  Variable var_{};
  int trunc_ = 0;
  std::vector<LaurentSeries> coeffs_;
};

/// Bilinear extension of the structure constants with series coefficients.
inline LieAlgebraElement bracket(const LieAlgebraElement& x, const LieAlgebraElement& y) {
  require_same_system(x.root_system(), y.root_system());
  if (x.variable() != y.variable()) throw Error(ErrorKind::VariableMismatch, "bracket of elements in different variables");
  const auto& rs = *x.root_system();
  if (!rs.has_structure_constants())
    throw Error(ErrorKind::Unsupported, "no structure constants for root system '" + rs.name() + "'");
  const int d = rs.dim();
  // Known range of every product term, including zero coefficients.
  std::vector<LaurentSeries> acc;
  int n = std::numeric_limits<int>::max();
  for (int a = 0; a < d; ++a)
    for (int c = 0; c < d; ++c) {
      const auto& xa = x.coefficients()[static_cast<size_t>(a)];
      const auto& yc = y.coefficients()[static_cast<size_t>(c)];
      n = std::min(n, std::min(xa.truncation() + yc.valuation_bound(), yc.truncation() + xa.valuation_bound()));
    }
  acc.assign(static_cast<size_t>(d), LaurentSeries(x.variable(), n));
  for (int a = 0; a < d; ++a) {
    const auto& xa = x.coefficients()[static_cast<size_t>(a)];
    if (xa.is_zero()) continue;
    for (int c = 0; c < d; ++c) {
      const auto& yc = y.coefficients()[static_cast<size_t>(c)];
      if (yc.is_zero()) continue;
      const auto& terms = rs.bracket_basis(a, c);
      if (terms.empty()) continue;
      LaurentSeries prod = xa * yc;
      for (const auto& t : terms) acc[static_cast<size_t>(t.basis)] = acc[static_cast<size_t>(t.basis)] + prod.scaled(t.coeff);
    }
  }
  return LieAlgebraElement(x.root_system(), std::move(acc));
}

}  // namespace parlog
