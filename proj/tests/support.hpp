// SPDX-License-Identifier: Apache-2.0

// Seeded generators for property tests.

#pragma once

#include <map>
#include <optional>
#include <random>
#include <vector>

#include "parlog/parlog.hpp"

namespace parlog::testing {

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

/// Nonzero rational with small numerator and denominator.
inline Rational nonzero_rational(Rng& rng, int max_num = 5, int max_den = 4) {
  int num = uniform(rng, 1, max_num) * (coin(rng) ? 1 : -1);
  return Rational(num, uniform(rng, 1, max_den));
}

/// Random sparse terms at exponents in [lo, hi] with the given step
/// pattern `exp = cls (mod step)`.
inline std::map<int, Rational> sparse_terms(Rng& rng, int lo, int hi, int step = 1, int cls = 0, double density = 0.5) {
  std::map<int, Rational> terms;
  for (int k = lo; k <= hi; ++k)
    if (mod_floor(k - cls, step) == 0 && coin(rng, density)) terms.emplace(k, nonzero_rational(rng));
  return terms;
}

inline LaurentSeries random_series(Rng& rng, Variable var, int lo, int hi, int truncation, double density = 0.5) {
  return LaurentSeries(var, sparse_terms(rng, lo, std::min(hi, truncation), 1, 0, density), truncation);
}

/// Series with a guaranteed nonzero leading term at `order`.
inline LaurentSeries random_unit(Rng& rng, Variable var, int order, int truncation) {
  auto terms = sparse_terms(rng, order + 1, truncation, 1, 0, 0.4);
  terms[order] = nonzero_rational(rng);
  return LaurentSeries(var, std::move(terms), truncation);
}

/// Homogeneous series in t of mu_r weight w: exponents k = -w (mod r).
inline LaurentSeries random_homogeneous(Rng& rng, int r, int w, int lo, int hi, int truncation) {
  return LaurentSeries(Variable(VarTag::T, r), sparse_terms(rng, lo, std::min(hi, truncation), r, -w, 0.6), truncation);
}

inline std::vector<int> random_weights(Rng& rng, int n, int r) {
  std::vector<int> p;
  for (int j = 0; j < n; ++j) p.push_back(uniform(rng, 0, r - 1));
  std::sort(p.rbegin(), p.rend());
  return p;
}

/// Coweight with components k/r, lo <= k <= hi (default: components in [-2, 2]).
inline Coweight random_coweight(Rng& rng, const RootSystemPtr& rs, int r, std::optional<int> lo = std::nullopt,
                                std::optional<int> hi = std::nullopt) {
  std::vector<Rational> c;
  for (int i = 0; i < rs->rank(); ++i) c.push_back(Rational(uniform(rng, lo.value_or(-2 * r), hi.value_or(2 * r)), r));
  return Coweight(rs, r, std::move(c));
}

/// Coweight with |alpha(theta)| <= 1 on every root, by rejection.
inline Coweight random_small_coweight(Rng& rng, const RootSystemPtr& rs, int r) {
  while (true) {
    Coweight theta = random_coweight(rng, rs, r, -r, r);
    bool small = true;
    for (int a = 0; a < rs->root_count() && small; ++a) {
      const Rational v = pairing(theta, a);
      small = v <= Rational(1) && Rational(-1) <= v;
    }
    if (small) return theta;
  }
}

/// Random element of the parahoric algebra: every coefficient starts at or
/// above its lower bound.
inline LieAlgebraElement random_parahoric(Rng& rng, const ParahoricAlgebra& p, int truncation, int span = 4) {
  const auto& rs = p.root_system();
  std::vector<LaurentSeries> c;
  for (int b = 0; b < rs->dim(); ++b) {
    const int lo = static_cast<int>(p.lower_bound(rs->label(b)));
    c.push_back(random_series(rng, Variable(VarTag::Z, p.theta().r()), lo, lo + span, truncation));
  }
  return LieAlgebraElement(rs, std::move(c));
}

/// Random pole-free mu_r-invariant form for theta, against dt.
inline LieAlgebraElement random_equivariant(Rng& rng, const Coweight& theta, int truncation, double density = 0.5) {
  const auto& rs = theta.root_system();
  const int r = theta.r();
  std::vector<LaurentSeries> c;
  for (int b = 0; b < rs->dim(); ++b) {
    const int cls = invariance_class(theta, rs->label(b));
    c.push_back(LaurentSeries(Variable(VarTag::T, r), sparse_terms(rng, 0, truncation, r, cls, density), truncation));
  }
  return LieAlgebraElement(rs, std::move(c));
}

/// Random equivariant matrix form: entry (i,j) on its congruence class and
/// above its lower bound.
inline LaurentMatrix random_equivariant_matrix(Rng& rng, const ParabolicLocalDatum& d, int truncation, double density = 0.5) {
  const int n = d.n();
  std::vector<LaurentSeries> e;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int cls = static_cast<int>(mod_floor(d.p(i) - d.p(j) - 1, d.r()));
      e.emplace_back(Variable(VarTag::T, d.r()),
                     sparse_terms(rng, equivariant_lower_bound(d, i, j), truncation, d.r(), cls, density), truncation);
    }
  return LaurentMatrix(n, std::move(e));
}

/// Random D satisfying the parabolic condition: residue entries free where
/// p_i > p_j, alpha_i on the diagonal, zero elsewhere.
inline LaurentMatrix random_parabolic_matrix(Rng& rng, const ParabolicLocalDatum& d, int truncation, double density = 0.5) {
  const int n = d.n();
  std::vector<LaurentSeries> e;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto terms = sparse_terms(rng, 1, truncation, 1, 0, density);
      if (d.p(i) > d.p(j) && coin(rng, 0.7)) terms[0] = nonzero_rational(rng);
      if (i == j && d.p(i) != 0) terms[0] = d.alpha(i);
      e.emplace_back(Variable(VarTag::Z, d.r()), std::move(terms), truncation);
    }
  return LaurentMatrix(n, std::move(e));
}

/// The gl_n element with the same entries as a matrix form: E_ii on the
/// Cartan basis, E_ij on the root with vector e_i - e_j.
inline LieAlgebraElement gl_element(const RootSystemPtr& gl, const LaurentMatrix& m) {
  const int n = m.size();
  auto x = LieAlgebraElement::zero(gl, m.variable(), m.truncation());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        x = x.with(BasisLabel::cartan(i), m(i, i));
        continue;
      }
      std::vector<int> v(static_cast<size_t>(n), 0);
      v[static_cast<size_t>(i)] = 1;
      v[static_cast<size_t>(j)] = -1;
      x = x.with(BasisLabel::root(*gl->root_index(v)), m(i, j));
    }
  return x;
}

}  // namespace parlog::testing
