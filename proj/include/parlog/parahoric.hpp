// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "parlog/error.hpp"
#include "parlog/rational.hpp"
#include "parlog/rootsys.hpp"
#include "parlog/series.hpp"

namespace parlog {

/// Outcome of a check on truncated data. Indeterminate means the answer
/// depends on coefficients above the truncation.
enum class Verdict { True, False, Indeterminate };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::True: return "true";
    case Verdict::False: return "false";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "?";
}

/// A basis coefficient term that violates (or cannot be checked against) a bound.
struct TermDiagnostic {
  BasisLabel label;
  int exponent = 0;
  std::string reason;

  std::string str() const { return label.str() + " at exponent " + std::to_string(exponent) + ": " + reason; }
};

struct MembershipResult {
  Verdict verdict = Verdict::True;
  std::vector<TermDiagnostic> offending;
  std::vector<TermDiagnostic> undetermined;
};

namespace detail {

/// Every coefficient of `xi` must have order >= bound(label).
template <class Bound>
MembershipResult check_lower_bounds(const LieAlgebraElement& xi, Bound&& bound) {
  MembershipResult out;
  const auto& rs = *xi.root_system();
  for (int b = 0; b < rs.dim(); ++b) {
    const BasisLabel label = rs.label(b);
    const long long need = bound(label);
    const auto& c = xi[label];
    for (const auto& [k, coeff] : c.terms()) {
      if (k >= need) break;
      out.offending.push_back({label, k, "order below required " + std::to_string(need)});
    }
    if (need - 1 > c.truncation())
      out.undetermined.push_back({label, static_cast<int>(need - 1), "required bound lies above truncation"});
  }
  if (!out.offending.empty())
    out.verdict = Verdict::False;
  else if (!out.undetermined.empty())
    out.verdict = Verdict::Indeterminate;
  return out;
}

}  // namespace detail

/// The parahoric Lie algebra t(A) + sum_alpha g_alpha(z^{m_alpha(theta)} A).
class ParahoricAlgebra {
 public:
  explicit ParahoricAlgebra(Coweight theta) : theta_(std::move(theta)) {
    const auto& rs = *theta_.root_system();
    for (int a = 0; a < rs.root_count(); ++a) orders_.push_back(m_alpha(theta_, a));
  }

  const Coweight& theta() const { return theta_; }
  const RootSystemPtr& root_system() const { return theta_.root_system(); }
  const std::vector<long long>& orders() const { return orders_; }

  /// Lowest admissible exponent for the given basis coefficient.
  long long lower_bound(BasisLabel l) const {
    return l.kind == BasisLabel::Kind::Cartan ? 0 : orders_.at(static_cast<size_t>(l.index));
  }

  /// The weight lambda of the term `b z^i`, i.e. `i + beta(theta)`.
  Rational term_weight(BasisLabel l, int exponent) const {
    if (l.kind == BasisLabel::Kind::Cartan) return Rational(exponent);
    return Rational(exponent) + pairing(theta_, l.index);
  }

 private:
  Coweight theta_;
  std::vector<long long> orders_;
};

inline void require_z(const LieAlgebraElement& xi) {
  if (xi.variable().tag != VarTag::Z) throw Error(ErrorKind::VariableMismatch, "expected an element in z");
}

inline MembershipResult parahoric_membership(const ParahoricAlgebra& p, const LieAlgebraElement& xi) {
  require_same_system(p.root_system(), xi.root_system());
  require_z(xi);
  return detail::check_lower_bounds(xi, [&](BasisLabel l) { return p.lower_bound(l); });
}

/// Whether every stored term `xi_i z^i` lies in g^theta_{lambda - i}.
inline bool weight_piece_membership(const ParahoricAlgebra& p, const LieAlgebraElement& xi, const Rational& lambda) {
  require_same_system(p.root_system(), xi.root_system());
  require_z(xi);
  const auto& rs = *xi.root_system();
  for (int b = 0; b < rs.dim(); ++b) {
    const BasisLabel label = rs.label(b);
    for (const auto& term : xi[label].terms())
      if (p.term_weight(label, term.first) != lambda) return false;
  }
  return true;
}

/// Terms of `xi` grouped by weight.
inline std::map<Rational, std::vector<std::pair<BasisLabel, int>>> term_weights(const ParahoricAlgebra& p,
                                                                                const LieAlgebraElement& xi) {
  std::map<Rational, std::vector<std::pair<BasisLabel, int>>> out;
  const auto& rs = *xi.root_system();
  for (int b = 0; b < rs.dim(); ++b) {
    const BasisLabel label = rs.label(b);
    for (const auto& term : xi[label].terms()) out[p.term_weight(label, term.first)].emplace_back(label, term.first);
  }
  return out;
}

/// Basis monomials `b z^i` with weight in [-n, n], grouped by weight. Each
/// weight piece is finite-dimensional.
inline std::map<Rational, std::vector<std::pair<BasisLabel, int>>> weight_decomposition(const ParahoricAlgebra& p,
                                                                                       int n) {
  std::map<Rational, std::vector<std::pair<BasisLabel, int>>> out;
  const auto& rs = *p.root_system();
  for (int b = 0; b < rs.dim(); ++b) {
    const BasisLabel l = rs.label(b);
    const Rational shift = p.term_weight(l, 0);
    const long long lo = (Rational(-n) - shift).floor_ll() + ((Rational(-n) - shift).is_integer() ? 0 : 1);
    const long long hi = (Rational(n) - shift).floor_ll();
    for (long long i = lo; i <= hi; ++i) out[p.term_weight(l, static_cast<int>(i))].emplace_back(l, static_cast<int>(i));
  }
  return out;
}

/// Keeps exactly the weight-zero terms: constant Cartan terms and
/// `x_alpha z^{-alpha(theta)}` when alpha(theta) is an integer.
inline LieAlgebraElement weight_zero_projection(const ParahoricAlgebra& p, const LieAlgebraElement& xi) {
  require_same_system(p.root_system(), xi.root_system());
  require_z(xi);
  return xi.map([&](BasisLabel label, const LaurentSeries& s) {
    std::map<int, Rational> kept;
    for (const auto& [k, c] : s.terms())
      if (p.term_weight(label, k).is_zero()) kept.emplace(k, c);
    return LaurentSeries(s.variable(), std::move(kept), s.truncation());
  });
}

/// A connection form `omega_tilde dz/z` with `omega_tilde` in the parahoric algebra.
class LogahoricConnection {
 public:
  LogahoricConnection(ParahoricAlgebra p, LieAlgebraElement omega_tilde)
      : p_(std::move(p)), omega_(std::move(omega_tilde)) {
    auto m = parahoric_membership(p_, omega_);
    if (m.verdict == Verdict::False)
      throw Error(ErrorKind::NotParahoric, "form has a term outside the parahoric algebra: " + m.offending.front().str());
    if (m.verdict == Verdict::Indeterminate)
      throw Error(ErrorKind::TruncationExhausted,
                  "parahoric membership undetermined: " + m.undetermined.front().str());
  }

  const ParahoricAlgebra& parahoric() const { return p_; }
  const Coweight& theta() const { return p_.theta(); }
  const LieAlgebraElement& omega_tilde() const { return omega_; }

 private:
  ParahoricAlgebra p_;
  LieAlgebraElement omega_;
};

/// The residue condition computed two independent ways.
struct ResidueReport {
  Verdict by_definition = Verdict::True;  // weight-zero piece equals theta
  Verdict by_closed_form = Verdict::True;  // explicit pole-order bounds
  std::vector<TermDiagnostic> diagnostics;

  Verdict verdict() const { return by_definition; }
  bool agree() const { return by_definition == by_closed_form; }
};

/// Definition route: the weight-zero projection must equal theta.
inline Verdict residue_condition_by_definition(const ParahoricAlgebra& p, const LieAlgebraElement& omega_tilde,
                                               std::vector<TermDiagnostic>* diagnostics = nullptr) {
  const auto& rs = *omega_tilde.root_system();
  const LieAlgebraElement proj = weight_zero_projection(p, omega_tilde);
  const LieAlgebraElement expected = LieAlgebraElement::constant_cartan(p.theta(), omega_tilde.variable(), omega_tilde.truncation());
  bool differs = false;
  bool undetermined = false;
  for (int b = 0; b < rs.dim(); ++b) {
    const BasisLabel label = rs.label(b);
    // The only exponent where this basis vector has weight zero.
    std::optional<int> slot;
    if (label.kind == BasisLabel::Kind::Cartan) {
      slot = 0;
    } else {
      Rational a = pairing(p.theta(), label.index);
      if (a.is_integer()) slot = static_cast<int>(-a.to_ll());
    }
    if (!slot) continue;
    if (*slot > omega_tilde.truncation()) {
      undetermined = true;
      if (diagnostics) diagnostics->push_back({label, *slot, "weight-zero coefficient lies above truncation"});
      continue;
    }
    if (proj[label].coefficient(*slot) != expected[label].coefficient(*slot)) {
      differs = true;
      if (diagnostics)
        diagnostics->push_back({label, *slot,
                                "weight-zero coefficient " + proj[label].coefficient(*slot).str() + ", expected " +
                                    expected[label].coefficient(*slot).str()});
    }
  }
  if (differs) return Verdict::False;
  return undetermined ? Verdict::Indeterminate : Verdict::True;
}

/// Closed-form route: omega_tilde - theta must lie in
/// t(zA) + sum_{alpha(theta) in Z} g_alpha(z^{1+m_alpha} A)
///       + sum_{alpha(theta) not in Z} g_alpha(z^{m_alpha} A).
inline Verdict residue_condition_by_closed_form(const ParahoricAlgebra& p, const LieAlgebraElement& omega_tilde,
                                                std::vector<TermDiagnostic>* diagnostics = nullptr) {
  const LieAlgebraElement shifted =
      omega_tilde - LieAlgebraElement::constant_cartan(p.theta(), omega_tilde.variable(), omega_tilde.truncation());
  auto m = detail::check_lower_bounds(shifted, [&](BasisLabel l) -> long long {
    if (l.kind == BasisLabel::Kind::Cartan) return 1;
    const long long m_a = p.lower_bound(l);
    return pairing(p.theta(), l.index).is_integer() ? m_a + 1 : m_a;
  });
  if (diagnostics) {
    diagnostics->insert(diagnostics->end(), m.offending.begin(), m.offending.end());
    diagnostics->insert(diagnostics->end(), m.undetermined.begin(), m.undetermined.end());
  }
  return m.verdict;
}

inline ResidueReport residue_condition_check(const LogahoricConnection& conn) {
  ResidueReport rep;
  rep.by_definition = residue_condition_by_definition(conn.parahoric(), conn.omega_tilde(), &rep.diagnostics);
  rep.by_closed_form = residue_condition_by_closed_form(conn.parahoric(), conn.omega_tilde());
  return rep;
}

}  // namespace parlog
