// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "parlog/error.hpp"
#include "parlog/parabolic.hpp"
#include "parlog/rational.hpp"

namespace parlog {

struct ParabolicPoint {
  std::string label;
  ParabolicLocalDatum datum;
};

/// A parabolic bundle on a curve: underlying degree plus weighted-flag data
/// at each marked point. All points share one r after construction.
class ParabolicBundleGlobal {
 public:
  ParabolicBundleGlobal(int rank, long long degree, std::vector<ParabolicPoint> points,
                        std::optional<int> genus = std::nullopt)
      : rank_(rank), degree_(degree), points_(std::move(points)), genus_(genus) {
    if (rank_ < 1) throw Error(ErrorKind::InvalidInput, "rank must be >= 1");
    int r = 1;
    for (const auto& pt : points_) {
      if (pt.datum.n() != rank_)
        throw Error(ErrorKind::InvalidInput, "point '" + pt.label + "' has " + std::to_string(pt.datum.n()) +
                                                 " weights, rank is " + std::to_string(rank_));
      r = std::lcm(r, pt.datum.r());
    }
    for (auto& pt : points_) pt.datum = pt.datum.rescaled(r / pt.datum.r());
    r_ = r;
  }

  int rank() const { return rank_; }
  long long degree() const { return degree_; }
  int r() const { return r_; }
  const std::vector<ParabolicPoint>& points() const { return points_; }
  const std::optional<int>& genus() const { return genus_; }

 private:
  int rank_;
  long long degree_;
  std::vector<ParabolicPoint> points_;
  std::optional<int> genus_;
  int r_ = 1;
};

/// Underlying degree plus, at each point, the sum of alpha_i weighted by the
/// dimension of the graded piece.
inline Rational par_deg(const ParabolicBundleGlobal& e) {
  Rational total(e.degree());
  for (const auto& pt : e.points())
    for (const auto& step : flag_from_weights(pt.datum).steps)
      total += step.alpha * Rational(step.last - step.first + 1);
  return total;
}

/// Degree of the corresponding bundle on the root stack; equal to par_deg.
inline Rational deg_root_stack(const ParabolicBundleGlobal& e) { return par_deg(e); }

inline bool line_connection_exists(const ParabolicBundleGlobal& l) {
  if (l.rank() != 1) throw Error(ErrorKind::InvalidInput, "line-bundle criterion needs rank 1, got " + std::to_string(l.rank()));
  return par_deg(l).is_zero();
}

/// A summand of a Levi reduction: the input slots it spans (0-based) and
/// its own underlying degree.
struct LeviBlock {
  std::vector<int> slots;
  long long degree = 0;
};

struct LeviDecomposition {
  std::string name;
  std::vector<LeviBlock> blocks;

  std::string str() const {
    std::ostringstream os;
    for (size_t b = 0; b < blocks.size(); ++b) {
      os << (b ? " + " : "") << '{';
      for (size_t k = 0; k < blocks[b].slots.size(); ++k) os << (k ? "," : "") << blocks[b].slots[k] + 1;
      os << "}@" << blocks[b].degree;
    }
    return os.str();
  }
};

/// Exponents c_b of the character prod_b det(block b)^{c_b}.
struct Character {
  std::vector<long long> exponents;

  std::string str() const {
    std::ostringstream os;
    os << '(';
    for (size_t b = 0; b < exponents.size(); ++b) os << (b ? "," : "") << exponents[b];
    os << ')';
    return os.str();
  }
};

inline void validate_decomposition(const ParabolicBundleGlobal& e, const LeviDecomposition& dec) {
  std::vector<int> seen(static_cast<size_t>(e.rank()), 0);
  long long deg = 0;
  if (dec.blocks.empty()) throw Error(ErrorKind::InvalidInput, "decomposition '" + dec.name + "' has no blocks");
  for (const auto& b : dec.blocks) {
    if (b.slots.empty()) throw Error(ErrorKind::InvalidInput, "decomposition '" + dec.name + "' has an empty block");
    for (int s : b.slots) {
      if (s < 0 || s >= e.rank())
        throw Error(ErrorKind::InvalidInput, "decomposition '" + dec.name + "': slot " + std::to_string(s + 1) + " out of range");
      if (seen[static_cast<size_t>(s)]++)
        throw Error(ErrorKind::InvalidInput, "decomposition '" + dec.name + "': slot " + std::to_string(s + 1) + " repeated");
    }
    deg += b.degree;
  }
  for (size_t s = 0; s < seen.size(); ++s)
    if (!seen[s]) throw Error(ErrorKind::InvalidInput, "decomposition '" + dec.name + "' misses slot " + std::to_string(s + 1));
  if (deg != e.degree())
    throw Error(ErrorKind::InvalidInput, "decomposition '" + dec.name + "': block degrees sum to " + std::to_string(deg) +
                                             ", bundle degree is " + std::to_string(e.degree()));
}

/// The block summand as a parabolic bundle of its own.
inline ParabolicBundleGlobal block_bundle(const ParabolicBundleGlobal& e, const LeviBlock& b) {
  std::vector<ParabolicPoint> pts;
  for (const auto& pt : e.points()) pts.push_back({pt.label, pt.datum.restrict(b.slots)});
  return ParabolicBundleGlobal(static_cast<int>(b.slots.size()), b.degree, std::move(pts), e.genus());
}

/// Determinant of a parabolic bundle: same degree, and at each point the
/// single weight is the sum of all local weights.
inline Rational det_par_deg(const ParabolicBundleGlobal& e) {
  Rational total(e.degree());
  for (const auto& pt : e.points())
    for (int j = 0; j < pt.datum.n(); ++j) total += pt.datum.alpha(j);
  return total;
}

inline Rational character_line_degree(const ParabolicBundleGlobal& e, const LeviDecomposition& dec, const Character& chi) {
  validate_decomposition(e, dec);
  if (chi.exponents.size() != dec.blocks.size())
    throw Error(ErrorKind::InvalidInput, "character has " + std::to_string(chi.exponents.size()) + " exponents, decomposition '" +
                                             dec.name + "' has " + std::to_string(dec.blocks.size()) + " blocks");
  Rational total;
  for (size_t b = 0; b < dec.blocks.size(); ++b)
    if (chi.exponents[b] != 0) total += Rational(chi.exponents[b]) * det_par_deg(block_bundle(e, dec.blocks[b]));
  return total;
}

struct CriterionLine {
  std::string decomposition;
  std::string blocks;
  Character character;
  Rational degree;
  bool ok = true;
};

struct CriterionReport {
  std::vector<CriterionLine> lines;
  std::vector<std::string> warnings;

  /// No violation among the decompositions that were examined. This is a
  /// necessary condition only; exhaustiveness is the caller's concern.
  bool verdict() const {
    return std::all_of(lines.begin(), lines.end(), [](const CriterionLine& l) { return l.ok; });
  }

  std::vector<CriterionLine> violations() const {
    std::vector<CriterionLine> v;
    for (const auto& l : lines)
      if (!l.ok) v.push_back(l);
    return v;
  }
};

/// Evaluates the degree-zero condition for every supplied decomposition on
/// the generating characters (each block's determinant) and on any extra
/// characters given for that decomposition.
inline CriterionReport weil_atiyah_check(const ParabolicBundleGlobal& e, const std::vector<LeviDecomposition>& decomps,
                                         const std::vector<std::pair<std::string, Character>>& extra = {}) {
  CriterionReport rep;
  if (!e.genus())
    rep.warnings.push_back("genus not given; the criterion assumes g >= 1 or more than one marked point");
  else if (*e.genus() == 0 && e.points().size() <= 1)
    rep.warnings.push_back("g = 0 with at most one marked point; the criterion's hypothesis fails");
  for (const auto& dec : decomps) {
    validate_decomposition(e, dec);
    auto emit = [&](const Character& chi) {
      Rational deg = character_line_degree(e, dec, chi);
      rep.lines.push_back({dec.name, dec.str(), chi, deg, deg.is_zero()});
    };
    for (size_t b = 0; b < dec.blocks.size(); ++b) {
      Character chi{std::vector<long long>(dec.blocks.size(), 0)};
      chi.exponents[b] = 1;
      emit(chi);
    }
    for (const auto& [name, chi] : extra)
      if (name == dec.name) emit(chi);
  }
  return rep;
}

/// An explicit direct sum of parabolic line bundles: summand j has its own
/// degree and a weight in [0, 1) at every point.
struct LineSummand {
  std::string label;
  long long degree = 0;
  std::vector<Rational> weights;
};

struct SplitBundle {
  std::vector<std::string> point_labels;
  std::vector<LineSummand> summands;
  std::optional<int> genus;

  /// The direct sum, with input slot j = summand j at every point.
  ParabolicBundleGlobal bundle() const {
    if (summands.empty()) throw Error(ErrorKind::InvalidInput, "split bundle needs at least one summand");
    BigInt lcm_den = 1;
    long long deg = 0;
    for (const auto& s : summands) {
      if (s.weights.size() != point_labels.size())
        throw Error(ErrorKind::InvalidInput, "summand '" + s.label + "' has " + std::to_string(s.weights.size()) +
                                                 " weights for " + std::to_string(point_labels.size()) + " points");
      for (const auto& w : s.weights) {
        if (w.sign() < 0 || w >= Rational(1))
          throw Error(ErrorKind::InvalidInput, "summand '" + s.label + "' weight " + w.str() + " outside [0, 1)");
        lcm_den = boost::multiprecision::lcm(lcm_den, w.denominator());
      }
      deg += s.degree;
    }
    const int r = static_cast<int>(Rational(boost::multiprecision::cpp_rational(lcm_den)).to_ll());
    std::vector<ParabolicPoint> pts;
    for (size_t x = 0; x < point_labels.size(); ++x) {
      std::vector<int> p;
      for (const auto& s : summands) p.push_back(static_cast<int>((s.weights[x] * Rational(r)).to_ll()));
      pts.push_back({point_labels[x], ParabolicLocalDatum::ingest(r, p)});
    }
    return ParabolicBundleGlobal(static_cast<int>(summands.size()), deg, std::move(pts), genus);
  }

  /// Every grouping of the summands into blocks (set partitions), each
  /// block carrying the sum of its summands' degrees.
  std::vector<LeviDecomposition> split_decompositions() const {
    const int n = static_cast<int>(summands.size());
    if (n > 4) throw Error(ErrorKind::Unsupported, "split enumeration is limited to rank <= 4");
    std::vector<LeviDecomposition> out;
    std::vector<int> assign(static_cast<size_t>(n), 0);
    // Restricted growth strings enumerate set partitions exactly once.
    auto rec = [&](auto&& self, int k, int used) -> void {
      if (k == n) {
        LeviDecomposition dec;
        dec.blocks.resize(static_cast<size_t>(used));
        for (int j = 0; j < n; ++j) {
          auto& b = dec.blocks[static_cast<size_t>(assign[static_cast<size_t>(j)])];
          b.slots.push_back(j);
          b.degree += summands[static_cast<size_t>(j)].degree;
        }
        dec.name = "split" + std::to_string(out.size() + 1);
        out.push_back(std::move(dec));
        return;
      }
      for (int b = 0; b <= used; ++b) {
        assign[static_cast<size_t>(k)] = b;
        self(self, k + 1, std::max(used, b + 1));
      }
    };
    rec(rec, 0, 0);
    return out;
  }
};

}  // namespace parlog
