// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "parlog/error.hpp"
#include "parlog/laurent_matrix.hpp"
#include "parlog/rational.hpp"
#include "parlog/series.hpp"

namespace parlog {

/// Local parabolic data at one point: the mu_r weights p_1 >= ... >= p_n of
/// a diagonal frame e_j, with `gamma . e_j = zeta^{p_j} e_j`.
///
/// `slots()` records where each frame position came from when the weights
/// were supplied in another order (see `ingest`).
class ParabolicLocalDatum {
 public:
  ParabolicLocalDatum() = default;

  ParabolicLocalDatum(int r, std::vector<int> p) : r_(r), p_(std::move(p)) {
    if (r_ < 1) throw Error(ErrorKind::InvalidInput, "r must be >= 1");
    if (p_.empty()) throw Error(ErrorKind::InvalidInput, "weights must be non-empty");
    for (size_t j = 0; j < p_.size(); ++j) {
      if (p_[j] < 0 || p_[j] > r_ - 1)
        throw Error(ErrorKind::InvalidInput, "weight p_" + std::to_string(j + 1) + " = " + std::to_string(p_[j]) +
                                                 " outside 0..r-1 (r = " + std::to_string(r_) + ")");
      if (j > 0 && p_[j] > p_[j - 1])
        throw Error(ErrorKind::InvalidInput, "weights p must be weakly decreasing (p_" + std::to_string(j) + " = " +
                                                 std::to_string(p_[j - 1]) + " < p_" + std::to_string(j + 1) + " = " +
                                                 std::to_string(p_[j]) + ")");
    }
    slots_.resize(p_.size());
    std::iota(slots_.begin(), slots_.end(), 0);
  }

  /// Accepts weights in any order; frame position k holds the weight of
  /// input slot `slots()[k]`.
  static ParabolicLocalDatum ingest(int r, const std::vector<int>& p) {
    std::vector<int> order(p.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return p[a] > p[b]; });
    std::vector<int> sorted;
    for (int k : order) sorted.push_back(p[static_cast<size_t>(k)]);
    ParabolicLocalDatum d(r, std::move(sorted));
    d.slots_ = std::move(order);
    return d;
  }

  int n() const { return static_cast<int>(p_.size()); }
  int r() const { return r_; }
  const std::vector<int>& weights() const { return p_; }
  const std::vector<int>& slots() const { return slots_; }
  int p(int j) const { return p_.at(static_cast<size_t>(j)); }
  Rational alpha(int j) const { return Rational(p(j), r_); }

  /// Weight of the given input slot.
  int slot_weight(int slot) const {
    for (size_t k = 0; k < slots_.size(); ++k)
      if (slots_[k] == slot) return p_[k];
    throw Error(ErrorKind::InvalidInput, "slot " + std::to_string(slot + 1) + " out of range");
  }

  /// Datum of the sub-bundle spanned by the given input slots.
  ParabolicLocalDatum restrict(const std::vector<int>& slots) const {
    std::vector<int> sub;
    for (int s : slots) sub.push_back(slot_weight(s));
    return ingest(r_, sub);
  }

  /// Same rational weights written over `k r`.
  ParabolicLocalDatum rescaled(int k) const {
    ParabolicLocalDatum d = *this;
    d.r_ *= k;
    for (int& v : d.p_) v *= k;
    return d;
  }

  friend bool operator==(const ParabolicLocalDatum& a, const ParabolicLocalDatum& b) {
    return a.r_ == b.r_ && a.p_ == b.p_;
  }

 private:
  int r_ = 1;
  std::vector<int> p_;
  std::vector<int> slots_;
};

/// One step E_{x,i} of the weighted flag E_x = E_{x,1} > ... > E_{x,k} > 0.
struct FlagStep {
  int dim = 0;       // dim E_{x,i} = j_i; spanned by frame vectors 1..dim
  int m = 0;         // weight numerator m_i
  Rational alpha;    // m_i / r
  int first = 0;     // graded piece E_{x,i}/E_{x,i+1}: frame positions
  int last = 0;      // [first, last], 0-based
};

struct Flag {
  std::vector<FlagStep> steps;  // i = 1..k, increasing weight

  std::string str() const {
    std::ostringstream os;
    for (size_t i = 0; i < steps.size(); ++i) {
      const auto& s = steps[i];
      os << (i ? "\n" : "") << "E_" << i + 1 << ": dim " << s.dim << ", weight " << s.alpha.str() << ", graded piece f_"
         << s.first + 1 << "..f_" << s.last + 1;
    }
    return os.str();
  }
};

inline Flag flag_from_weights(const ParabolicLocalDatum& d) {
  Flag f;
  int j = d.n();
  while (j > 0) {
    const int m = d.p(j - 1);
    int start = j - 1;
    while (start > 0 && d.p(start - 1) == m) --start;
    f.steps.push_back({j, m, Rational(m, d.r()), start, j - 1});
    j = start;
  }
  return f;
}

/// The form `omega dt` in the frame e on the cover.
class EquivariantMatrixConnection {
 public:
  EquivariantMatrixConnection(ParabolicLocalDatum datum, LaurentMatrix omega)
      : datum_(std::move(datum)), omega_(std::move(omega)) {
    if (omega_.size() != datum_.n()) throw Error(ErrorKind::InvalidInput, "matrix size does not match the rank");
    if (omega_.variable() != Variable(VarTag::T, datum_.r()))
      throw Error(ErrorKind::VariableMismatch, "equivariant matrix must be in t with order r = " + std::to_string(datum_.r()));
  }

  const ParabolicLocalDatum& datum() const { return datum_; }
  const LaurentMatrix& omega() const { return omega_; }

 private:
  ParabolicLocalDatum datum_;
  LaurentMatrix omega_;
};

/// A logarithmic connection on the base, `D dz/z` in the frame f.
class ParabolicMatrixConnection {
 public:
  ParabolicMatrixConnection(ParabolicLocalDatum datum, LaurentMatrix d) : datum_(std::move(datum)), d_(std::move(d)) {
    if (d_.size() != datum_.n()) throw Error(ErrorKind::InvalidInput, "matrix size does not match the rank");
    if (d_.variable() != Variable(VarTag::Z, datum_.r()))
      throw Error(ErrorKind::VariableMismatch, "parabolic matrix must be in z with order r = " + std::to_string(datum_.r()));
    if (d_.truncation() < 0)
      throw Error(ErrorKind::TruncationExhausted, "residue lies above truncation " + std::to_string(d_.truncation()));
    for (int i = 0; i < d_.size(); ++i)
      for (int j = 0; j < d_.size(); ++j)
        if (d_(i, j).valuation_bound() < 0)
          throw Error(ErrorKind::InvalidInput, "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                                   ") has a pole beyond the logarithmic one");
    residue_ = d_.constant_term();
  }

  const ParabolicLocalDatum& datum() const { return datum_; }
  const LaurentMatrix& d_matrix() const { return d_; }
  const RationalMatrix& residue() const { return residue_; }

 private:
  ParabolicLocalDatum datum_;
  LaurentMatrix d_;
  RationalMatrix residue_;
};

struct MatrixDiagnostic {
  int row = 0;
  int col = 0;
  int exponent = 0;
  std::string reason;

  std::string str() const {
    return "entry (" + std::to_string(row + 1) + "," + std::to_string(col + 1) + ") at exponent " +
           std::to_string(exponent) + ": " + reason;
  }
};

struct MatrixCheckReport {
  bool ok = true;
  std::vector<MatrixDiagnostic> violations;
};

/// Lowest admissible t-exponent of omega_ij: p_i - p_j - 1, plus r when
/// p_i <= p_j.
inline int equivariant_lower_bound(const ParabolicLocalDatum& d, int i, int j) {
  const int base = d.p(i) - d.p(j) - 1;
  return d.p(i) > d.p(j) ? base : base + d.r();
}

inline MatrixCheckReport check_matrix_equivariance(const EquivariantMatrixConnection& conn) {
  MatrixCheckReport rep;
  const auto& d = conn.datum();
  const int r = d.r();
  for (int i = 0; i < d.n(); ++i) {
    for (int j = 0; j < d.n(); ++j) {
      const int cls = static_cast<int>(mod_floor(d.p(i) - d.p(j) - 1, r));
      const int low = equivariant_lower_bound(d, i, j);
      for (const auto& term : conn.omega()(i, j).terms()) {
        const int k = term.first;
        if (mod_floor(k, r) != cls)
          rep.violations.push_back({i, j, k, "exponent not congruent to " + std::to_string(cls) + " mod " + std::to_string(r)});
        else if (k < low)
          rep.violations.push_back({i, j, k, "order below " + std::to_string(low)});
      }
    }
  }
  rep.ok = rep.violations.empty();
  return rep;
}

namespace detail {

/// diag(t^{e_j}) with off-diagonal zeros, known up to `truncation`.
inline LaurentMatrix diagonal_monomials(const std::vector<int>& exps, Variable var, int truncation) {
  const int n = static_cast<int>(exps.size());
  std::vector<LaurentSeries> e(static_cast<size_t>(n) * n, LaurentSeries(var, truncation));
  for (int j = 0; j < n; ++j) e[static_cast<size_t>(j) * n + j] = LaurentSeries::monomial(var, Rational(1), exps[j], truncation);
  return LaurentMatrix(n, std::move(e));
}

/// g^{-1} omega g + g^{-1} dg for g = diag(t^{exps}), via full series
/// arithmetic. g is carried with enough precision that the result's
/// truncation is limited by omega alone.
inline LaurentMatrix gauge_diagonal(const LaurentMatrix& omega, const std::vector<int>& exps) {
  int spread = 0;
  for (int e : exps) spread = std::max(spread, std::abs(e));
  int pole = 0;
  for (const auto& s : omega.entries()) pole = std::max(pole, -s.valuation_bound());
  const int precision = omega.truncation() + 4 * spread + 2 * pole + 4;
  const LaurentMatrix g = diagonal_monomials(exps, omega.variable(), precision);
  const LaurentMatrix g_inv = g.map([](const LaurentSeries& s) {
    return s.is_zero() ? s : series_inverse(s);
  });
  return g_inv * omega * g + g_inv * matrix_derivative(g);
}

}  // namespace detail

/// Pushes an equivariant connection down to the base: gauge by
/// g = diag(t^{p_j}), rewrite dt = (t/r) dz/z, substitute t^r = z.
inline ParabolicMatrixConnection pushforward_connection(const EquivariantMatrixConnection& conn) {
  auto rep = check_matrix_equivariance(conn);
  if (!rep.ok) throw Error(ErrorKind::NonIntegralExponent, "not an equivariant connection: " + rep.violations.front().str());
  const auto& d = conn.datum();
  const Rational inv_r(1, d.r());
  LaurentMatrix gauged = detail::gauge_diagonal(conn.omega(), d.weights());
  LaurentMatrix in_z = gauged.map([&](const LaurentSeries& s) { return substitute_t_to_z(s.shifted(1).scaled(inv_r)); });
  return ParabolicMatrixConnection(d, std::move(in_z));
}

inline RationalMatrix residue(const ParabolicMatrixConnection& conn) { return conn.residue(); }

/// Residue read off the equivariant data directly:
/// (1/r) nu_ij(0) if p_i > p_j, delta_ij p_i / r otherwise, where
/// nu_ij(0) is the coefficient of t^{p_i - p_j - 1} in omega_ij.
inline RationalMatrix residue_closed_form(const EquivariantMatrixConnection& conn) {
  const auto& d = conn.datum();
  RationalMatrix res(d.n());
  for (int i = 0; i < d.n(); ++i) {
    for (int j = 0; j < d.n(); ++j) {
      if (d.p(i) > d.p(j))
        res(i, j) = conn.omega()(i, j).coefficient(d.p(i) - d.p(j) - 1) * Rational(1, d.r());
      else if (i == j)
        res(i, j) = d.alpha(i);
    }
  }
  return res;
}

/// The residue preserves the flag and acts by alpha_i on each graded
/// piece: in the frame order, entries vanish when p_i < p_j, equal-weight
/// blocks are alpha * identity, and p_i > p_j entries are free.
inline MatrixCheckReport parabolic_condition_check(const ParabolicMatrixConnection& conn) {
  MatrixCheckReport rep;
  const auto& d = conn.datum();
  const auto& res = conn.residue();
  for (int i = 0; i < d.n(); ++i) {
    for (int j = 0; j < d.n(); ++j) {
      if (d.p(i) > d.p(j)) continue;
      const Rational want = (i == j) ? d.alpha(i) : Rational(0);
      if (res(i, j) != want) {
        std::string why = d.p(i) < d.p(j) ? "residue does not preserve the flag"
                                          : "graded piece is not " + d.alpha(i).str() + " times identity";
        rep.violations.push_back({i, j, 0, why + " (residue entry " + res(i, j).str() + ")"});
      }
    }
  }
  rep.ok = rep.violations.empty();
  return rep;
}

/// Inverse of pushforward_connection on parabolic connections.
inline EquivariantMatrixConnection pullback_connection(const ParabolicMatrixConnection& conn) {
  auto rep = parabolic_condition_check(conn);
  if (!rep.ok) throw Error(ErrorKind::ParabolicConditionViolated, rep.violations.front().str());
  const auto& d = conn.datum();
  LaurentMatrix in_t = conn.d_matrix().map([&](const LaurentSeries& s) {
    return substitute_z_to_t(s).shifted(-1).scaled(Rational(d.r()));
  });
  std::vector<int> neg;
  for (int v : d.weights()) neg.push_back(-v);
  EquivariantMatrixConnection out(d, detail::gauge_diagonal(in_t, neg));
  auto back = check_matrix_equivariance(out);
  if (!back.ok)
    throw Error(ErrorKind::ParabolicConditionViolated, "pulled-back form is not equivariant: " + back.violations.front().str());
  return out;
}

/// Horizontality of an endomorphism phi between two connections in the same
/// frame size: `delta(phi) + target phi - phi source == 0` up to truncation,
/// with delta = d/dt for forms against dt and z d/dz for forms against dz/z.
inline bool is_connection_morphism(const LaurentMatrix& phi, const LaurentMatrix& source, const LaurentMatrix& target) {
  const bool log_basis = phi.variable().tag == VarTag::Z;
  LaurentMatrix dphi = matrix_derivative(phi);
  if (log_basis) dphi = dphi.map([](const LaurentSeries& s) { return s.shifted(1); });
  LaurentMatrix lhs = dphi + target * phi + (phi * source).map([](const LaurentSeries& s) { return -s; });
  for (const auto& s : lhs.entries())
    if (!s.is_zero()) return false;
  return true;
}

/// The matrix of a morphism in the frames f: g_W^{-1} phi g_V, in z.
inline LaurentMatrix pushforward_morphism(const LaurentMatrix& phi, const ParabolicLocalDatum& source,
                                          const ParabolicLocalDatum& target) {
  if (source.r() != target.r()) throw Error(ErrorKind::InvalidInput, "morphism between data with different r");
  const int n = phi.size();
  std::vector<LaurentSeries> e;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) e.push_back(substitute_t_to_z(phi(i, j).shifted(source.p(j) - target.p(i))));
  return LaurentMatrix(n, std::move(e));
}

}  // namespace parlog
