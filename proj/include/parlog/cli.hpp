// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "parlog/degree.hpp"
#include "parlog/equivariant.hpp"
#include "parlog/error.hpp"
#include "parlog/parabolic.hpp"
#include "parlog/parahoric.hpp"
#include "parlog/problem.hpp"
#include "parlog/rootsys.hpp"
#include "parlog/series.hpp"

namespace parlog {

struct CommandResult {
  std::string out;
  std::string err;
  int exit_code = 0;
};

struct CommandInfo {
  std::string group;
  std::string verb;
  std::string summary;
  std::vector<std::string> operations;  // library operations the command exercises
};

inline const std::vector<CommandInfo>& command_table() {
  static const std::vector<CommandInfo> table = {
      {"parahoric", "check", "parahoric membership and residue condition of xi (in z)",
       {"parse_problem", "pairing", "m_alpha", "theta_eigenspace", "parahoric_membership", "weight_piece_membership",
        "weight_zero_projection", "residue_condition_check"}},
      {"parahoric", "bracket", "bracket of xi and eta, and its parahoric membership",
       {"parse_problem", "bracket", "parahoric_membership"}},
      {"equiv", "check", "mu_r-invariance of omega (in t)", {"parse_problem", "check_invariance", "mu_r_weight"}},
      {"equiv", "to-logahoric", "gauge omega by t^theta", {"parse_problem", "gauge_by_t_theta", "substitute_t_to_z",
                                                           "residue_condition_check"}},
      {"equiv", "from-logahoric", "equivariant form of a logahoric xi (in z)",
       {"parse_problem", "logahoric_to_equivariant"}},
      {"equiv", "local-type", "class of theta modulo integral cocharacters", {"parse_problem", "local_type"}},
      {"parab", "push", "push an equivariant matrix omega down to D",
       {"parse_problem", "check_matrix_equivariance", "pushforward_connection", "series_mul", "series_inverse",
        "series_derivative", "series_add", "substitute_t_to_z", "residue", "parabolic_condition_check",
        "flag_from_weights"}},
      {"parab", "pull", "pull a parabolic matrix D back to omega",
       {"parse_problem", "parabolic_condition_check", "pullback_connection", "check_matrix_equivariance"}},
      {"parab", "check", "equivariance of omega or parabolic condition of D",
       {"parse_problem", "check_matrix_equivariance", "parabolic_condition_check", "flag_from_weights"}},
      {"parab", "residue", "residue of D, or of the pushforward of omega",
       {"parse_problem", "pushforward_connection", "residue"}},
      {"degree", "pardeg", "parabolic degree of a bundle", {"parse_problem", "par_deg", "line_connection_exists",
                                                            "flag_from_weights"}},
      {"degree", "criterion", "degree-zero condition over Levi decompositions",
       {"parse_problem", "weil_atiyah_check", "character_line_degree"}},
      {"series", "add", "a + b", {"parse_problem", "series_add"}},
      {"series", "mul", "a * b", {"parse_problem", "series_mul"}},
      {"series", "inverse", "1 / a", {"parse_problem", "series_inverse"}},
      {"series", "derivative", "d a / d var", {"parse_problem", "series_derivative"}},
      {"series", "to-z", "substitute t^r = z in a", {"parse_problem", "substitute_t_to_z"}},
      {"series", "weight", "mu_r weight of a", {"parse_problem", "mu_r_weight"}},
  };
  return table;
}

namespace detail {

constexpr int kDefaultTruncation = 12;

struct Context {
  ProblemFile pf;
  int truncation = kDefaultTruncation;
};

inline int require_r(const ProblemFile& pf) {
  if (!pf.r) throw Error(ErrorKind::InvalidInput, "missing key 'r'");
  return *pf.r;
}

inline RootSystemPtr require_root_system(const ProblemFile& pf) {
  auto rs = pf.root_system();
  if (!rs) throw Error(ErrorKind::InvalidInput, "missing root system (type/rank or roots)");
  return make_root_system(std::move(*rs));
}

inline Coweight require_theta(const ProblemFile& pf, const RootSystemPtr& rs) {
  if (!pf.theta) throw Error(ErrorKind::InvalidInput, "missing key 'theta'");
  return Coweight(rs, require_r(pf), *pf.theta);
}

/// Assembles the named element from its coefficient lines; missing
/// coefficients are zero.
inline LieAlgebraElement build_element(const Context& ctx, const RootSystemPtr& rs, const std::string& name, VarTag tag) {
  const int r = require_r(ctx.pf);
  std::vector<LaurentSeries> coeffs(static_cast<size_t>(rs->dim()), LaurentSeries(Variable(tag, r), ctx.truncation));
  bool any = false;
  for (const auto& el : ctx.pf.elements) {
    if (el.element != name) continue;
    any = true;
    BasisLabel label = el.kind == BasisLabel::Kind::Cartan ? BasisLabel::cartan(*el.index - 1) : BasisLabel::root(0);
    if (el.kind == BasisLabel::Kind::Root) label.index = el.root ? *rs->root_index(*el.root) : *el.index - 1;
    try {
      coeffs[static_cast<size_t>(rs->basis_index(label))] = el.value.realize(tag, r, ctx.truncation);
    } catch (const Error& e) {
      throw Error(e.kind(), "line " + std::to_string(el.line.number) + ": " + e.message());
    }
  }
  if (!any) throw Error(ErrorKind::InvalidInput, "no coefficients given for element '" + name + "'");
  return LieAlgebraElement(rs, std::move(coeffs));
}

inline LaurentMatrix build_matrix(const Context& ctx, const std::string& name, VarTag tag) {
  if (!ctx.pf.p) throw Error(ErrorKind::InvalidInput, "missing key 'p'");
  const int n = static_cast<int>(ctx.pf.p->size());
  const int r = require_r(ctx.pf);
  std::vector<LaurentSeries> e(static_cast<size_t>(n) * n, LaurentSeries(Variable(tag, r), ctx.truncation));
  bool any = false;
  for (const auto& ml : ctx.pf.matrix) {
    if (ml.name != name) continue;
    any = true;
    e[static_cast<size_t>(ml.row - 1) * n + (ml.col - 1)] = ml.value.realize(tag, r, ctx.truncation);
  }
  if (!any) throw Error(ErrorKind::InvalidInput, "no entries given for matrix '" + name + "'");
  return LaurentMatrix(n, std::move(e));
}

inline bool has_matrix(const ProblemFile& pf, const std::string& name) {
  return std::any_of(pf.matrix.begin(), pf.matrix.end(), [&](const MatrixLine& m) { return m.name == name; });
}

/// Element lines in the input format; re-readable by parse_problem.
inline std::string element_lines(const LieAlgebraElement& x) {
  std::ostringstream os;
  const auto& rs = *x.root_system();
  bool any = false;
  for (int b = 0; b < rs.dim(); ++b) {
    const auto& c = x.coefficients()[static_cast<size_t>(b)];
    if (c.is_zero()) continue;
    os << rs.label(b).str() << ": " << c.str() << '\n';
    any = true;
  }
  if (!any) os << "h[1]: " << x.cartan(0).str() << '\n';
  return os.str();
}

inline std::string matrix_lines(const LaurentMatrix& m, const std::string& name) {
  std::ostringstream os;
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j)
      os << name << '[' << i + 1 << "][" << j + 1 << "] = " << m(i, j).str() << '\n';
  return os.str();
}

/// The keys that fix the setting, so that a transformed form can be read
/// back as a problem file of its own.
inline std::string setting_lines(const ProblemFile& pf) {
  ProblemFile h;
  h.type = pf.type;
  h.rank = pf.rank;
  h.roots = pf.roots;
  h.r = pf.r;
  h.theta = pf.theta;
  h.p = pf.p;
  return emit_problem(h);
}

inline std::string ints_str(const std::vector<int>& v) {
  std::ostringstream os;
  os << '[';
  for (size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ']';
  return os.str();
}

inline std::string root_system_line(const RootSystem& rs) {
  return "root system: " + rs.name() + " (rank " + std::to_string(rs.rank()) + ", " + std::to_string(rs.root_count()) +
         " roots)\n";
}

inline std::string basis_name(const RootSystem& rs, BasisLabel l) {
  if (l.kind == BasisLabel::Kind::Cartan) return l.str();
  return l.str() + " " + rs.root_str(l.index);
}

inline int verdict_exit(Verdict v) { return v == Verdict::True ? 0 : 1; }

inline int cmd_parahoric_check(const Context& ctx, std::ostream& os) {
  auto rs = require_root_system(ctx.pf);
  Coweight theta = require_theta(ctx.pf, rs);
  ParahoricAlgebra p(theta);
  LieAlgebraElement xi = build_element(ctx, rs, "xi", VarTag::Z);
  os << root_system_line(*rs);
  os << "theta: " << theta.str() << " (r = " << theta.r() << ")\n";
  os << "truncation: " << xi.truncation() << '\n';
  os << "roots:\n";
  std::set<Rational> eigenvalues{Rational(0)};
  for (int a = 0; a < rs->root_count(); ++a) {
    const Rational pa = pairing(theta, a);
    eigenvalues.insert(pa);
    os << "  " << basis_name(*rs, BasisLabel::root(a)) << ": alpha(theta) = " << pa.str()
       << ", m_alpha = " << m_alpha(theta, a) << '\n';
  }
  os << "eigenspaces:\n";
  for (const auto& lambda : eigenvalues) {
    os << "  lambda = " << lambda.str() << ':';
    for (const auto& l : theta_eigenspace(theta, lambda)) os << ' ' << l.str();
    os << '\n';
  }
  os << "membership:\n";
  for (int b = 0; b < rs->dim(); ++b) {
    const BasisLabel l = rs->label(b);
    const auto& c = xi[l];
    const long long need = p.lower_bound(l);
    std::string status = "ok";
    if (c.valuation_bound() < need && !c.is_zero())
      status = "violated";
    else if (need - 1 > c.truncation())
      status = "undetermined";
    os << "  " << l.str() << ": lower bound " << need << ", order "
       << (c.order() ? std::to_string(*c.order()) : std::string("none")) << ", " << status << '\n';
  }
  auto m = parahoric_membership(p, xi);
  for (const auto& d : m.offending) os << "offending: " << d.str() << '\n';
  for (const auto& d : m.undetermined) os << "undetermined: " << d.str() << '\n';
  os << "parahoric membership: " << to_string(m.verdict) << '\n';
  if (ctx.pf.lambda)
    os << "weight piece " << ctx.pf.lambda->str() << ": " << (weight_piece_membership(p, xi, *ctx.pf.lambda) ? "true" : "false")
       << '\n';
  const LieAlgebraElement proj = weight_zero_projection(p, xi);
  os << "weight-zero part:\n";
  std::istringstream lines(element_lines(proj));
  for (std::string line; std::getline(lines, line);) os << "  " << line << '\n';
  std::vector<TermDiagnostic> diag;
  const Verdict by_def = residue_condition_by_definition(p, xi, &diag);
  const Verdict by_closed = residue_condition_by_closed_form(p, xi);
  os << "residue condition (definition): " << to_string(by_def) << '\n';
  os << "residue condition (closed form): " << to_string(by_closed) << '\n';
  for (const auto& d : diag) os << "residue: " << d.str() << '\n';
  Verdict overall = m.verdict;
  if (overall == Verdict::True) overall = by_def;
  os << "verdict: " << to_string(overall) << '\n';
  return verdict_exit(overall);
}

inline int cmd_parahoric_bracket(const Context& ctx, std::ostream& os) {
  auto rs = require_root_system(ctx.pf);
  Coweight theta = require_theta(ctx.pf, rs);
  ParahoricAlgebra p(theta);
  LieAlgebraElement xi = build_element(ctx, rs, "xi", VarTag::Z);
  LieAlgebraElement eta = build_element(ctx, rs, "eta", VarTag::Z);
  LieAlgebraElement br = bracket(xi, eta);
  os << "bracket:\n" << element_lines(br);
  auto m = parahoric_membership(p, br);
  for (const auto& d : m.offending) os << "offending: " << d.str() << '\n';
  os << "parahoric membership: " << to_string(m.verdict) << '\n';
  return verdict_exit(m.verdict);
}

inline int cmd_equiv_check(const Context& ctx, std::ostream& os) {
  auto rs = require_root_system(ctx.pf);
  Coweight theta = require_theta(ctx.pf, rs);
  EquivariantConnectionG conn(theta, build_element(ctx, rs, "xi", VarTag::T));
  os << root_system_line(*rs);
  os << "theta: " << theta.str() << " (r = " << theta.r() << ")\n";
  os << "invariance classes:\n";
  for (int b = 0; b < rs->dim(); ++b) {
    const BasisLabel l = rs->label(b);
    const auto& c = conn.omega()[l];
    os << "  " << l.str() << ": exponents = " << invariance_class(theta, l) << " mod " << theta.r();
    if (!c.is_zero()) {
      auto w = mu_r_weight(c);
      os << ", mu_r weight " << (w ? std::to_string(*w) : std::string("mixed"));
    }
    os << '\n';
  }
  auto rep = check_invariance(conn);
  for (const auto& d : rep.violations) os << "violation: " << d.str() << '\n';
  os << "pole-free: " << (rep.pole_free ? "true" : "false") << '\n';
  os << "verdict: " << (rep.invariant ? "true" : "false") << '\n';
  return rep.invariant ? 0 : 1;
}

inline int cmd_equiv_to_logahoric(const Context& ctx, std::ostream& os) {
  auto rs = require_root_system(ctx.pf);
  Coweight theta = require_theta(ctx.pf, rs);
  EquivariantConnectionG conn(theta, build_element(ctx, rs, "xi", VarTag::T));
  LogahoricConnection log = gauge_by_t_theta(conn);
  os << setting_lines(ctx.pf) << "# omega_tilde dz/z\n" << element_lines(log.omega_tilde());
  auto rep = residue_condition_check(log);
  os << "# residue condition (definition): " << to_string(rep.by_definition) << '\n';
  os << "# residue condition (closed form): " << to_string(rep.by_closed_form) << '\n';
  return verdict_exit(rep.verdict());
}

inline int cmd_equiv_from_logahoric(const Context& ctx, std::ostream& os) {
  auto rs = require_root_system(ctx.pf);
  Coweight theta = require_theta(ctx.pf, rs);
  LogahoricConnection log(ParahoricAlgebra(theta), build_element(ctx, rs, "xi", VarTag::Z));
  EquivariantConnectionG conn = logahoric_to_equivariant(log);
  os << setting_lines(ctx.pf) << "# omega dt\n" << element_lines(conn.omega());
  return 0;
}

inline int cmd_equiv_local_type(const Context& ctx, std::ostream& os) {
  auto rs = require_root_system(ctx.pf);
  Coweight theta = require_theta(ctx.pf, rs);
  os << "theta: " << theta.str() << '\n';
  os << "local type: " << local_type(theta).str() << '\n';
  return 0;
}

inline ParabolicLocalDatum require_datum(const ProblemFile& pf) {
  if (!pf.p) throw Error(ErrorKind::InvalidInput, "missing key 'p'");
  return ParabolicLocalDatum(require_r(pf), *pf.p);
}

inline void print_flag(const ParabolicLocalDatum& d, std::ostream& os, const std::string& indent) {
  std::istringstream lines(flag_from_weights(d).str());
  for (std::string line; std::getline(lines, line);) os << indent << line << '\n';
}

inline void print_matrix_report(const MatrixCheckReport& rep, std::ostream& os) {
  for (const auto& v : rep.violations) os << "violation: " << v.str() << '\n';
}

inline int cmd_parab_push(const Context& ctx, std::ostream& os) {
  const auto d = require_datum(ctx.pf);
  EquivariantMatrixConnection conn(d, build_matrix(ctx, "omega", VarTag::T));
  auto eq = check_matrix_equivariance(conn);
  if (!eq.ok) {
    print_matrix_report(eq, os);
    os << "verdict: false\n";
    return 1;
  }
  ParabolicMatrixConnection pushed = pushforward_connection(conn);
  os << setting_lines(ctx.pf) << "# D dz/z\n" << matrix_lines(pushed.d_matrix(), "D");
  os << "# residue: " << residue(pushed).str() << '\n';
  os << "# flag:\n";
  print_flag(d, os, "#   ");
  auto pc = parabolic_condition_check(pushed);
  for (const auto& v : pc.violations) os << "# violation: " << v.str() << '\n';
  os << "# parabolic condition: " << (pc.ok ? "true" : "false") << '\n';
  return pc.ok ? 0 : 1;
}

inline int cmd_parab_pull(const Context& ctx, std::ostream& os) {
  const auto d = require_datum(ctx.pf);
  ParabolicMatrixConnection conn(d, build_matrix(ctx, "D", VarTag::Z));
  auto pc = parabolic_condition_check(conn);
  if (!pc.ok) {
    print_matrix_report(pc, os);
    os << "verdict: false\n";
    return 1;
  }
  EquivariantMatrixConnection pulled = pullback_connection(conn);
  os << setting_lines(ctx.pf) << "# omega dt\n" << matrix_lines(pulled.omega(), "omega");
  return 0;
}

inline int cmd_parab_check(const Context& ctx, std::ostream& os) {
  const auto d = require_datum(ctx.pf);
  os << "weights: r = " << d.r() << ", p = " << ints_str(d.weights()) << '\n';
  os << "flag:\n";
  print_flag(d, os, "  ");
  bool ok = true;
  bool any = false;
  if (has_matrix(ctx.pf, "omega")) {
    any = true;
    EquivariantMatrixConnection conn(d, build_matrix(ctx, "omega", VarTag::T));
    auto rep = check_matrix_equivariance(conn);
    print_matrix_report(rep, os);
    os << "equivariance: " << (rep.ok ? "true" : "false") << '\n';
    ok = ok && rep.ok;
  }
  if (has_matrix(ctx.pf, "D")) {
    any = true;
    ParabolicMatrixConnection conn(d, build_matrix(ctx, "D", VarTag::Z));
    auto rep = parabolic_condition_check(conn);
    print_matrix_report(rep, os);
    os << "residue: " << conn.residue().str() << '\n';
    os << "parabolic condition: " << (rep.ok ? "true" : "false") << '\n';
    ok = ok && rep.ok;
  }
  if (!any) throw Error(ErrorKind::InvalidInput, "no omega or D entries to check");
  os << "verdict: " << (ok ? "true" : "false") << '\n';
  return ok ? 0 : 1;
}

inline int cmd_parab_residue(const Context& ctx, std::ostream& os) {
  const auto d = require_datum(ctx.pf);
  if (has_matrix(ctx.pf, "D")) {
    ParabolicMatrixConnection conn(d, build_matrix(ctx, "D", VarTag::Z));
    os << "residue: " << residue(conn).str() << '\n';
    return 0;
  }
  EquivariantMatrixConnection conn(d, build_matrix(ctx, "omega", VarTag::T));
  auto pushed = pushforward_connection(conn);
  const RationalMatrix res = residue(pushed);
  const RationalMatrix closed = residue_closed_form(conn);
  os << "residue: " << res.str() << '\n';
  os << "residue (closed form): " << closed.str() << '\n';
  os << "agree: " << (res == closed ? "true" : "false") << '\n';
  return res == closed ? 0 : 1;
}

struct BundleInput {
  ParabolicBundleGlobal bundle;
  std::optional<SplitBundle> split;
};

inline BundleInput build_bundle(const ProblemFile& pf) {
  if (!pf.summands.empty()) {
    SplitBundle sb;
    sb.point_labels = *pf.point_labels;
    sb.genus = pf.genus;
    for (const auto& s : pf.summands) sb.summands.push_back({s.label, s.degree, s.weights});
    ParabolicBundleGlobal e = sb.bundle();
    if (pf.degree && *pf.degree != e.degree())
      throw Error(ErrorKind::InvalidInput, "degree " + std::to_string(*pf.degree) + " differs from the summand total " +
                                               std::to_string(e.degree()));
    if (pf.rank && *pf.rank != e.rank())
      throw Error(ErrorKind::InvalidInput, "rank " + std::to_string(*pf.rank) + " differs from the summand count");
    return {std::move(e), std::move(sb)};
  }
  if (!pf.degree) throw Error(ErrorKind::InvalidInput, "missing key 'degree'");
  int rank = 0;
  if (pf.rank) rank = *pf.rank;
  else if (!pf.points.empty()) rank = static_cast<int>(pf.points.front().p.size());
  else throw Error(ErrorKind::InvalidInput, "missing key 'rank'");
  std::vector<ParabolicPoint> pts;
  for (const auto& pt : pf.points) pts.push_back({pt.label, ParabolicLocalDatum(pt.r, pt.p)});
  return {ParabolicBundleGlobal(rank, *pf.degree, std::move(pts), pf.genus), std::nullopt};
}

inline int cmd_degree_pardeg(const Context& ctx, std::ostream& os) {
  BundleInput in = build_bundle(ctx.pf);
  const auto& e = in.bundle;
  os << "rank: " << e.rank() << '\n';
  os << "degree: " << e.degree() << '\n';
  os << "r: " << e.r() << '\n';
  for (const auto& pt : e.points()) {
    os << "point " << pt.label << ": p = " << ints_str(pt.datum.weights()) << '\n';
    print_flag(pt.datum, os, "  ");
  }
  os << "par-deg: " << par_deg(e).str() << '\n';
  if (e.rank() == 1) os << "line connection exists: " << (line_connection_exists(e) ? "true" : "false") << '\n';
  return 0;
}

inline int cmd_degree_criterion(const Context& ctx, std::ostream& os) {
  BundleInput in = build_bundle(ctx.pf);
  const auto& e = in.bundle;
  std::vector<LeviDecomposition> decomps;
  if (in.split) {
    decomps = in.split->split_decompositions();
  } else {
    LeviDecomposition whole{"whole", {LeviBlock{{}, e.degree()}}};
    for (int j = 0; j < e.rank(); ++j) whole.blocks[0].slots.push_back(j);
    decomps.push_back(std::move(whole));
  }
  for (const auto& dl : ctx.pf.decompositions) {
    LeviDecomposition dec{dl.name, {}};
    for (const auto& b : dl.blocks) {
      LeviBlock blk{{}, b.degree};
      for (int s : b.slots) blk.slots.push_back(s - 1);
      dec.blocks.push_back(std::move(blk));
    }
    decomps.push_back(std::move(dec));
  }
  std::vector<std::pair<std::string, Character>> extra;
  for (const auto& c : ctx.pf.characters) extra.push_back({c.decomposition, Character{c.exponents}});
  CriterionReport rep = weil_atiyah_check(e, decomps, extra);
  for (const auto& w : rep.warnings) os << "warning: " << w << '\n';
  os << "par-deg: " << par_deg(e).str() << '\n';
  for (const auto& l : rep.lines)
    os << l.decomposition << ' ' << l.blocks << " chi " << l.character.str() << ": degree " << l.degree.str() << ", "
       << (l.ok ? "ok" : "violated") << '\n';
  auto bad = rep.violations();
  if (!bad.empty())
    os << "witness: " << bad.front().decomposition << " chi " << bad.front().character.str() << '\n';
  os << "verdict: " << (rep.verdict() ? "true" : "false") << '\n';
  return rep.verdict() ? 0 : 1;
}

inline LaurentSeries series_operand(const Context& ctx, const std::optional<SeriesLiteral>& lit, const char* name) {
  if (!lit) throw Error(ErrorKind::InvalidInput, std::string("missing key '") + name + "'");
  const int r = ctx.pf.r.value_or(1);
  return lit->realize(lit->tag.value_or(VarTag::T), r, ctx.truncation);
}

inline int cmd_series(const Context& ctx, const std::string& verb, std::ostream& os) {
  const LaurentSeries a = series_operand(ctx, ctx.pf.a, "a");
  if (verb == "add") os << series_add(a, series_operand(ctx, ctx.pf.b, "b")).str() << '\n';
  else if (verb == "mul") os << series_mul(a, series_operand(ctx, ctx.pf.b, "b")).str() << '\n';
  else if (verb == "inverse") os << series_inverse(a).str() << '\n';
  else if (verb == "derivative") os << series_derivative(a).str() << '\n';
  else if (verb == "to-z") os << substitute_t_to_z(a).str() << '\n';
  else if (verb == "weight") {
    auto w = mu_r_weight(a);
    os << "mu_r weight: " << (w ? std::to_string(*w) : std::string("not homogeneous")) << '\n';
    return w ? 0 : 1;
  }
  return 0;
}

inline int dispatch(const std::string& group, const std::string& verb, const Context& ctx, std::ostream& os) {
  if (group == "parahoric") return verb == "check" ? cmd_parahoric_check(ctx, os) : cmd_parahoric_bracket(ctx, os);
  if (group == "equiv") {
    if (verb == "check") return cmd_equiv_check(ctx, os);
    if (verb == "to-logahoric") return cmd_equiv_to_logahoric(ctx, os);
    if (verb == "from-logahoric") return cmd_equiv_from_logahoric(ctx, os);
    return cmd_equiv_local_type(ctx, os);
  }
  if (group == "parab") {
    if (verb == "push") return cmd_parab_push(ctx, os);
    if (verb == "pull") return cmd_parab_pull(ctx, os);
    if (verb == "check") return cmd_parab_check(ctx, os);
    return cmd_parab_residue(ctx, os);
  }
  if (group == "degree") return verb == "pardeg" ? cmd_degree_pardeg(ctx, os) : cmd_degree_criterion(ctx, os);
  return cmd_series(ctx, verb, os);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

/// Runs one subcommand. `args` excludes the program name. When `file_text`
/// is given it replaces the contents of the input file.
inline CommandResult run_command(const std::vector<std::string>& args,
                                 const std::optional<std::string>& file_text = std::nullopt) {
  CommandResult res;
  CLI::App app{"parlog: parahoric and parabolic connections on the formal disc", "parlog"};
  app.require_subcommand(1);
  std::string input;
  std::optional<int> truncation;
  std::string format = "plain";
  std::string chosen_group, chosen_verb;

  std::vector<std::string> groups;
  for (const auto& c : command_table())
    if (std::find(groups.begin(), groups.end(), c.group) == groups.end()) groups.push_back(c.group);
  for (const auto& g : groups) {
    CLI::App* ga = app.add_subcommand(g, g + " commands");
    ga->require_subcommand(1);
    for (const auto& c : command_table()) {
      if (c.group != g) continue;
      CLI::App* va = ga->add_subcommand(c.verb, c.summary);
      va->add_option("--input", input, "problem file");
      if (g == "degree") va->add_option("file", input, "problem file");
      va->add_option("--truncation", truncation, "default truncation N for series without an O-term");
      va->add_option("--format", format, "output format")->check(CLI::IsMember({"plain"}));
      va->callback([&, g, verb = c.verb] {
        chosen_group = g;
        chosen_verb = verb;
      });
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out, err;
    res.exit_code = app.exit(e, out, err) == 0 ? 0 : 2;
    res.out = out.str();
    res.err = err.str();
    return res;
  }

  std::ostringstream os;
  try {
    if (input.empty() && !file_text) throw Error(ErrorKind::InvalidInput, "no input file (use --input FILE)");
    detail::Context ctx;
    ctx.pf = parse_problem(file_text ? *file_text : detail::read_file(input));
    if (truncation)
      ctx.truncation = *truncation;
    else if (ctx.pf.truncation)
      ctx.truncation = *ctx.pf.truncation;
    res.exit_code = detail::dispatch(chosen_group, chosen_verb, ctx, os);
    res.out = os.str();
  } catch (const Error& e) {
    res.out = os.str();
    res.err = std::string("error: ") + e.what() + '\n';
    res.exit_code = 2;
  }
  return res;
}

}  // namespace parlog
