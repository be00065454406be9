// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "parlog/error.hpp"
#include "parlog/parahoric.hpp"
#include "parlog/rational.hpp"
#include "parlog/rootsys.hpp"
#include "parlog/series.hpp"

namespace parlog {

/// A connection `omega dt` on the trivial G-bundle over the disc in t,
/// with mu_r acting through the torus-valued cocharacter theta.
class EquivariantConnectionG {
 public:
  EquivariantConnectionG(Coweight theta, LieAlgebraElement omega) : theta_(std::move(theta)), omega_(std::move(omega)) {
    require_same_system(theta_.root_system(), omega_.root_system());
    if (omega_.variable() != Variable(VarTag::T, theta_.r()))
      throw Error(ErrorKind::VariableMismatch, "equivariant form must be a series in t with order r = " +
                                                   std::to_string(theta_.r()));
  }

  const Coweight& theta() const { return theta_; }
  const LieAlgebraElement& omega() const { return omega_; }

 private:
  Coweight theta_;
  LieAlgebraElement omega_;
};

/// Residue class mod r that the t-exponents of the given coefficient must
/// occupy: -1 for Cartan coefficients, r alpha(theta) - 1 for x_alpha.
inline int invariance_class(const Coweight& theta, BasisLabel l) {
  const int r = theta.r();
  if (l.kind == BasisLabel::Kind::Cartan) return r - 1;
  const long long ra = (pairing(theta, l.index) * Rational(r)).to_ll();
  return static_cast<int>(mod_floor(ra - 1, r));
}

struct InvarianceReport {
  bool invariant = true;
  bool pole_free = true;
  std::vector<TermDiagnostic> violations;
};

inline InvarianceReport check_invariance(const EquivariantConnectionG& conn) {
  InvarianceReport rep;
  const auto& rs = *conn.omega().root_system();
  const int r = conn.theta().r();
  for (int b = 0; b < rs.dim(); ++b) {
    const BasisLabel label = rs.label(b);
    const int cls = invariance_class(conn.theta(), label);
    for (const auto& term : conn.omega()[label].terms()) {
      if (term.first < 0) rep.pole_free = false;
      if (mod_floor(term.first, r) != cls) {
        rep.invariant = false;
        rep.violations.push_back({label, term.first, "exponent not congruent to " + std::to_string(cls) + " mod " +
                                                         std::to_string(r)});
      }
    }
  }
  return rep;
}

/// Change of frame by t^theta: x_alpha coefficients are multiplied by
/// t^{-r alpha(theta)}, dt becomes (t/r) dz/z and the Cartan part gains
/// theta. The result is rewritten in z.
inline LogahoricConnection gauge_by_t_theta(const EquivariantConnectionG& conn) {
  auto inv = check_invariance(conn);
  if (!inv.invariant)
    throw Error(ErrorKind::NonIntegralExponent, "form is not mu_r-invariant: " + inv.violations.front().str());
  const Coweight& theta = conn.theta();
  const int r = theta.r();
  const Rational inv_r = Rational(1, r);
  LieAlgebraElement in_z = conn.omega().map([&](BasisLabel l, const LaurentSeries& s) {
    int shift = 1;
    if (l.kind == BasisLabel::Kind::Root) shift -= static_cast<int>((pairing(theta, l.index) * Rational(r)).to_ll());
    return substitute_t_to_z(s.shifted(shift).scaled(inv_r));
  });
  in_z = in_z + LieAlgebraElement::constant_cartan(theta, in_z.variable(), in_z.truncation());
  return LogahoricConnection(ParahoricAlgebra(theta), std::move(in_z));
}

/// Inverse of gauge_by_t_theta, defined on forms satisfying the residue
/// condition. The result has no poles in t.
inline EquivariantConnectionG logahoric_to_equivariant(const LogahoricConnection& conn) {
  const Coweight& theta = conn.theta();
  std::vector<TermDiagnostic> diag;
  Verdict v = residue_condition_by_definition(conn.parahoric(), conn.omega_tilde(), &diag);
  if (v == Verdict::Indeterminate)
    throw Error(ErrorKind::TruncationExhausted, "residue condition undetermined: " + diag.front().str());
  if (v == Verdict::False) throw Error(ErrorKind::ResidueConditionViolated, diag.front().str());
  const int r = theta.r();
  const LieAlgebraElement& w = conn.omega_tilde();
  LieAlgebraElement shifted = w - LieAlgebraElement::constant_cartan(theta, w.variable(), w.truncation());
  LieAlgebraElement in_t = shifted.map([&](BasisLabel l, const LaurentSeries& s) {
    int shift = -1;
    if (l.kind == BasisLabel::Kind::Root) shift += static_cast<int>((pairing(theta, l.index) * Rational(r)).to_ll());
    return substitute_z_to_t(s).shifted(shift).scaled(Rational(r));
  });
  return EquivariantConnectionG(theta, std::move(in_t));
}

/// Class of theta modulo integral cocharacters: componentwise `r theta mod r`.
struct LocalType {
  int r = 1;
  std::vector<int> residues;

  std::string str() const {
    std::ostringstream os;
    os << "r = " << r << ", residues [";
    for (size_t i = 0; i < residues.size(); ++i) os << (i ? ", " : "") << residues[i];
    os << ']';
    return os.str();
  }

  friend bool operator==(const LocalType&, const LocalType&) = default;
};

inline LocalType local_type(const Coweight& theta) {
  LocalType lt;
  lt.r = theta.r();
  for (const auto& c : theta.components())
    lt.residues.push_back(static_cast<int>(mod_floor((c * Rational(lt.r)).to_ll(), lt.r)));
  return lt;
}

}  // namespace parlog
