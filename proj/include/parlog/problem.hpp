// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "parlog/degree.hpp"
#include "parlog/error.hpp"
#include "parlog/parabolic.hpp"
#include "parlog/rational.hpp"
#include "parlog/rootsys.hpp"
#include "parlog/series.hpp"

namespace parlog {

/// Source position carried for diagnostics; never part of equality.
struct SourceLine {
  int number = 0;
  friend bool operator==(const SourceLine&, const SourceLine&) { return true; }
};

struct ElementLine {
  std::string element = "xi";  // "xi" unless written `eta.h[1]: ...`
  BasisLabel::Kind kind = BasisLabel::Kind::Cartan;
  std::optional<int> index;               // 1-based, as written
  std::optional<std::vector<int>> root;   // x[(a,b,...)] form
  SeriesLiteral value;
  SourceLine line;
  friend bool operator==(const ElementLine&, const ElementLine&) = default;
};

struct MatrixLine {
  std::string name;  // "omega" (in t) or "D" (in z)
  int row = 1;       // 1-based
  int col = 1;
  SeriesLiteral value;
  SourceLine line;
  friend bool operator==(const MatrixLine&, const MatrixLine&) = default;
};

struct PointLine {
  std::string label;
  int r = 1;
  std::vector<int> p;
  SourceLine line;
  friend bool operator==(const PointLine&, const PointLine&) = default;
};

struct SummandLine {
  std::string label;
  long long degree = 0;
  std::vector<Rational> weights;
  SourceLine line;
  friend bool operator==(const SummandLine&, const SummandLine&) = default;
};

struct BlockSpec {
  std::vector<int> slots;  // 1-based
  long long degree = 0;
  friend bool operator==(const BlockSpec&, const BlockSpec&) = default;
};

struct DecompositionLine {
  std::string name;
  std::vector<BlockSpec> blocks;
  SourceLine line;
  friend bool operator==(const DecompositionLine&, const DecompositionLine&) = default;
};

struct CharacterLine {
  std::string decomposition;
  std::vector<long long> exponents;
  SourceLine line;
  friend bool operator==(const CharacterLine&, const CharacterLine&) = default;
};

/// Everything one input file can describe. Which parts a command needs is
/// decided by the command; the parser only enforces the grammar and the
/// cross-field invariants that can be checked without knowing the command.
struct ProblemFile {
  std::optional<std::string> type;  // "A" or "gl"
  std::optional<int> rank;
  std::optional<std::vector<std::vector<int>>> roots;
  std::optional<int> r;
  std::optional<std::vector<Rational>> theta;
  std::optional<int> truncation;
  std::optional<std::vector<int>> p;
  std::optional<long long> degree;
  std::optional<int> genus;
  std::optional<Rational> lambda;
  std::optional<std::vector<std::string>> point_labels;
  std::optional<SeriesLiteral> a;
  std::optional<SeriesLiteral> b;
  std::vector<ElementLine> elements;
  std::vector<MatrixLine> matrix;
  std::vector<PointLine> points;
  std::vector<SummandLine> summands;
  std::vector<DecompositionLine> decompositions;
  std::vector<CharacterLine> characters;

  friend bool operator==(const ProblemFile&, const ProblemFile&) = default;

  /// Root system described by `type`/`rank` or `roots`, if any.
  std::optional<RootSystem> root_system() const {
    if (type) {
      if (*type == "A") return RootSystem::type_a(*rank);
      return RootSystem::gl(*rank);
    }
    if (roots) return RootSystem::from_roots(static_cast<int>(roots->front().size()), *roots);
    return std::nullopt;
  }
};

namespace detail {

class LineCursor {
 public:
  LineCursor(std::string_view text, int line) : text_(text), line_(line) {}

  [[noreturn]] void fail(const std::string& msg) const { fail_at(pos_, msg); }
  [[noreturn]] void fail_at(size_t pos, const std::string& msg) const {
    throw Error(ErrorKind::Parse, "line " + std::to_string(line_) + ", column " + std::to_string(pos + 1) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  void expect_end() {
    if (!at_end()) fail("unexpected trailing text");
  }

  std::string ident() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '-'))
      ++pos_;
    if (start == pos_) fail("expected identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  void keyword(std::string_view kw) {
    size_t at = (skip_ws(), pos_);
    if (ident() != kw) fail_at(at, "expected '" + std::string(kw) + "'");
  }

  long long integer() {
    skip_ws();
    size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (digits == pos_) fail_at(start, "expected integer");
    try {
      return std::stoll(std::string(text_.substr(start, pos_ - start)));
    } catch (const std::out_of_range&) {
      fail_at(start, "integer out of range");
    }
  }

  int small_int() {
    size_t at = (skip_ws(), pos_);
    long long v = integer();
    if (v < -1000000 || v > 1000000) fail_at(at, "integer out of range");
    return static_cast<int>(v);
  }

  /// A rational, optionally quoted: `1/2` or `"1/2"`.
  Rational rational() {
    skip_ws();
    bool quoted = accept('"');
    skip_ws();
    size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '/' ||
                                   text_[pos_] == '-' || text_[pos_] == '+'))
      ++pos_;
    if (start == pos_) fail("expected rational");
    Rational q;
    try {
      q = Rational::parse(text_.substr(start, pos_ - start));
    } catch (const Error&) {
      fail_at(start, "malformed rational");
    }
    if (quoted) expect('"');
    return q;
  }

  std::string quoted_string() {
    expect('"');
    size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '"') ++pos_;
    if (pos_ >= text_.size()) fail("unterminated string");
    std::string s(text_.substr(start, pos_ - start));
    ++pos_;
    return s;
  }

  template <class F>
  auto list(F&& item) {
    std::vector<decltype(item())> out;
    expect('[');
    if (accept(']')) return out;
    do {
      out.push_back(item());
    } while (accept(','));
    expect(']');
    return out;
  }

  /// The rest of the line as a series literal.
  SeriesLiteral series() {
    skip_ws();
    const size_t start = pos_;
    std::string_view rest = text_.substr(pos_);
    pos_ = text_.size();
    try {
      return parse_series(rest);
    } catch (const Error& e) {
      const std::string& msg = e.message();
      if (msg.rfind("column ", 0) == 0) {
        size_t end = msg.find(':');
        int c = std::stoi(msg.substr(7, end - 7));
        fail_at(start + static_cast<size_t>(c) - 1, msg.substr(end + 2));
      }
      fail_at(start, msg);
    }
  }

  size_t pos() const { return pos_; }
  void set_pos(size_t p) { pos_ = p; }
  std::string_view rest() const { return text_.substr(pos_); }
  int line() const { return line_; }

 private:
  std::string_view text_;
  int line_;
  size_t pos_ = 0;
};

inline bool starts_with_word(std::string_view s, std::string_view w) {
  return s.substr(0, w.size()) == w && s.size() > w.size() && (s[w.size()] == ' ' || s[w.size()] == '\t');
}

inline Error line_error(const SourceLine& l, const std::string& msg) {
  return Error(ErrorKind::Parse, "line " + std::to_string(l.number) + ": " + msg);
}

}  // namespace detail

/// Parses the line-oriented problem format. See README for the grammar.
inline ProblemFile parse_problem(std::string_view text) {
  using detail::LineCursor;
  ProblemFile pf;
  std::map<std::string, int> key_lines;
  std::set<std::string> decomposition_names;

  int line_no = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    LineCursor cur(raw, line_no);
    if (cur.at_end()) {
      if (end == text.size()) break;
      continue;
    }
    std::string_view body = cur.rest();
    const SourceLine here{line_no};

    if (detail::starts_with_word(body, "point")) {
      cur.keyword("point");
      PointLine pl;
      pl.line = here;
      pl.label = cur.ident();
      cur.expect(':');
      cur.keyword("r");
      cur.expect('=');
      pl.r = cur.small_int();
      cur.expect(',');
      cur.keyword("p");
      cur.expect('=');
      pl.p = cur.list([&] { return cur.small_int(); });
      cur.expect_end();
      pf.points.push_back(std::move(pl));
    } else if (detail::starts_with_word(body, "summand")) {
      cur.keyword("summand");
      SummandLine sl;
      sl.line = here;
      sl.label = cur.ident();
      cur.expect(':');
      cur.keyword("degree");
      cur.expect('=');
      sl.degree = cur.integer();
      cur.expect(',');
      cur.keyword("weights");
      cur.expect('=');
      sl.weights = cur.list([&] { return cur.rational(); });
      cur.expect_end();
      pf.summands.push_back(std::move(sl));
    } else if (detail::starts_with_word(body, "decomposition")) {
      cur.keyword("decomposition");
      DecompositionLine dl;
      dl.line = here;
      size_t at = cur.pos();
      dl.name = cur.ident();
      if (!decomposition_names.insert(dl.name).second) cur.fail_at(at, "duplicate decomposition '" + dl.name + "'");
      cur.expect(':');
      do {
        BlockSpec b;
        b.slots = cur.list([&] { return cur.small_int(); });
        cur.keyword("deg");
        b.degree = cur.integer();
        dl.blocks.push_back(std::move(b));
      } while (cur.accept(';'));
      cur.expect_end();
      pf.decompositions.push_back(std::move(dl));
    } else if (detail::starts_with_word(body, "character")) {
      cur.keyword("character");
      CharacterLine cl;
      cl.line = here;
      cl.decomposition = cur.ident();
      cur.expect(':');
      cl.exponents = cur.list([&] { return cur.integer(); });
      cur.expect_end();
      pf.characters.push_back(std::move(cl));
    } else {
      size_t at = cur.pos();
      std::string head = cur.ident();
      if (cur.accept('.')) {
        // eta.h[1]: ...
        std::string basis = cur.ident();
        if (basis != "h" && basis != "x") cur.fail_at(at, "expected h[...] or x[...] after element name");
        head += "." + basis;
      }
      if (cur.peek('[')) {
        std::string element = "xi";
        std::string basis = head;
        if (auto dot = head.find('.'); dot != std::string::npos) {
          element = head.substr(0, dot);
          basis = head.substr(dot + 1);
        }
        if (basis == "h" || basis == "x") {
          ElementLine el;
          el.line = here;
          el.element = element;
          el.kind = basis == "h" ? BasisLabel::Kind::Cartan : BasisLabel::Kind::Root;
          cur.expect('[');
          if (cur.peek('(')) {
            if (basis == "h") cur.fail("Cartan generators are referenced by index");
            cur.expect('(');
            std::vector<int> v;
            do {
              v.push_back(cur.small_int());
            } while (cur.accept(','));
            cur.expect(')');
            el.root = std::move(v);
          } else {
            size_t iat = (cur.skip_ws(), cur.pos());
            el.index = cur.small_int();
            if (*el.index < 1) cur.fail_at(iat, "basis index must be >= 1");
          }
          cur.expect(']');
          cur.expect(':');
          el.value = cur.series();
          for (const auto& other : pf.elements)
            if (other.element == el.element && other.kind == el.kind && other.index == el.index && other.root == el.root)
              cur.fail_at(at, "duplicate coefficient for this basis vector");
          pf.elements.push_back(std::move(el));
        } else if (basis == "omega" || basis == "D") {
          MatrixLine ml;
          ml.line = here;
          ml.name = basis;
          cur.expect('[');
          ml.row = cur.small_int();
          cur.expect(']');
          cur.expect('[');
          ml.col = cur.small_int();
          cur.expect(']');
          cur.expect('=');
          ml.value = cur.series();
          if (ml.row < 1 || ml.col < 1) cur.fail_at(at, "matrix indices are 1-based");
          for (const auto& other : pf.matrix)
            if (other.name == ml.name && other.row == ml.row && other.col == ml.col)
              cur.fail_at(at, "duplicate matrix entry");
          pf.matrix.push_back(std::move(ml));
        } else {
          cur.fail_at(at, "unknown indexed name '" + head + "'");
        }
        continue;
      }
      if (key_lines.count(head)) cur.fail_at(at, "duplicate key '" + head + "'");
      key_lines[head] = line_no;
      cur.expect('=');
      if (head == "type") {
        pf.type = cur.quoted_string();
        if (*pf.type != "A" && *pf.type != "gl") cur.fail_at(at, "type must be \"A\" or \"gl\"");
      } else if (head == "rank") {
        pf.rank = cur.small_int();
        if (*pf.rank < 1) cur.fail_at(at, "rank must be >= 1");
      } else if (head == "roots") {
        pf.roots = cur.list([&] { return cur.list([&] { return cur.small_int(); }); });
        if (pf.roots->empty()) cur.fail_at(at, "roots must be non-empty");
      } else if (head == "r") {
        pf.r = cur.small_int();
        if (*pf.r < 1) cur.fail_at(at, "r must be >= 1");
      } else if (head == "theta") {
        pf.theta = cur.list([&] { return cur.rational(); });
      } else if (head == "truncation") {
        pf.truncation = cur.small_int();
      } else if (head == "p") {
        pf.p = cur.list([&] { return cur.small_int(); });
      } else if (head == "degree") {
        pf.degree = cur.integer();
      } else if (head == "genus") {
        pf.genus = cur.small_int();
        if (*pf.genus < 0) cur.fail_at(at, "genus must be >= 0");
      } else if (head == "lambda") {
        pf.lambda = cur.rational();
      } else if (head == "points") {
        pf.point_labels = cur.list([&] { return cur.ident(); });
      } else if (head == "a") {
        pf.a = cur.series();
      } else if (head == "b") {
        pf.b = cur.series();
      } else {
        cur.fail_at(at, "unknown key '" + head + "'");
      }
      cur.expect_end();
    }
  }

  // Cross-field checks.
  auto key_line = [&](const std::string& k) { return SourceLine{key_lines.count(k) ? key_lines.at(k) : 0}; };
  if (pf.type && !pf.rank) throw detail::line_error(key_line("type"), "type needs a rank");
  if (pf.type && pf.roots) throw detail::line_error(key_line("roots"), "give either type/rank or roots, not both");
  std::optional<RootSystem> rs;
  if (pf.roots) {
    const size_t l = pf.roots->front().size();
    for (const auto& v : *pf.roots)
      if (v.size() != l) throw detail::line_error(key_line("roots"), "roots have different lengths");
    if (pf.rank && static_cast<size_t>(*pf.rank) != l)
      throw detail::line_error(key_line("rank"), "rank " + std::to_string(*pf.rank) + " does not match root length " +
                                                      std::to_string(l));
    try {
      rs = RootSystem::from_roots(static_cast<int>(l), *pf.roots);
    } catch (const Error& e) {
      throw detail::line_error(key_line("roots"), e.message());
    }
  } else if (pf.type) {
    rs = pf.root_system();
  }
  if (pf.theta) {
    if (!pf.r) throw detail::line_error(key_line("theta"), "theta needs r");
    if (rs && static_cast<int>(pf.theta->size()) != rs->rank())
      throw detail::line_error(key_line("theta"), "dimension mismatch: theta has " + std::to_string(pf.theta->size()) +
                                                      " components, lattice rank is " + std::to_string(rs->rank()));
    for (const auto& c : *pf.theta)
      if (!(c * Rational(*pf.r)).is_integer())
        throw detail::line_error(key_line("theta"), "denominator of " + c.str() + " does not divide r = " + std::to_string(*pf.r));
  }
  if (pf.p) {
    if (!pf.r) throw detail::line_error(key_line("p"), "p needs r");
    try {
      ParabolicLocalDatum(*pf.r, *pf.p);
    } catch (const Error& e) {
      throw detail::line_error(key_line("p"), e.message());
    }
  }
  for (const auto& el : pf.elements) {
    if (!rs) throw detail::line_error(el.line, "Lie algebra element without a root system");
    if (el.kind == BasisLabel::Kind::Cartan && *el.index > rs->rank())
      throw detail::line_error(el.line, "h index " + std::to_string(*el.index) + " exceeds rank " + std::to_string(rs->rank()));
    if (el.kind == BasisLabel::Kind::Root) {
      if (el.index && *el.index > rs->root_count())
        throw detail::line_error(el.line, "x index " + std::to_string(*el.index) + " exceeds root count " +
                                              std::to_string(rs->root_count()));
      if (el.root && !rs->root_index(*el.root)) throw detail::line_error(el.line, "vector is not a root");
    }
  }
  for (const auto& ml : pf.matrix) {
    if (!pf.p) throw detail::line_error(ml.line, "matrix entry without weights p");
    if (ml.row > static_cast<int>(pf.p->size()) || ml.col > static_cast<int>(pf.p->size()))
      throw detail::line_error(ml.line, "dimension mismatch: index exceeds n = " + std::to_string(pf.p->size()));
  }
  if (!pf.points.empty() && !pf.summands.empty())
    throw detail::line_error(pf.points.front().line, "give either point data or summands, not both");
  std::set<std::string> labels;
  for (const auto& pt : pf.points) {
    if (!labels.insert(pt.label).second) throw detail::line_error(pt.line, "duplicate point '" + pt.label + "'");
    try {
      ParabolicLocalDatum(pt.r, pt.p);
    } catch (const Error& e) {
      throw detail::line_error(pt.line, e.message());
    }
    if (pt.p.size() != pf.points.front().p.size())
      throw detail::line_error(pt.line, "dimension mismatch: points have different ranks");
  }
  if (!pf.summands.empty() && !pf.point_labels)
    throw detail::line_error(pf.summands.front().line, "summands need a 'points = [...]' list");
  for (const auto& s : pf.summands) {
    if (s.weights.size() != pf.point_labels->size())
      throw detail::line_error(s.line, "dimension mismatch: " + std::to_string(s.weights.size()) + " weights for " +
                                           std::to_string(pf.point_labels->size()) + " points");
    for (const auto& w : s.weights)
      if (w.sign() < 0 || w >= Rational(1)) throw detail::line_error(s.line, "weight " + w.str() + " outside [0, 1)");
  }
  for (const auto& c : pf.characters) {
    auto it = std::find_if(pf.decompositions.begin(), pf.decompositions.end(),
                           [&](const DecompositionLine& d) { return d.name == c.decomposition; });
    if (it == pf.decompositions.end())
      throw detail::line_error(c.line, "character refers to unknown decomposition '" + c.decomposition + "'");
    if (it->blocks.size() != c.exponents.size())
      throw detail::line_error(c.line, "dimension mismatch: decomposition '" + c.decomposition + "' has " +
                                           std::to_string(it->blocks.size()) + " blocks");
  }
  return pf;
}

/// Canonical text form; `parse_problem(emit_problem(pf)) == pf`.
inline std::string emit_problem(const ProblemFile& pf) {
  std::ostringstream os;
  auto ints = [](const std::vector<int>& v) {
    std::ostringstream s;
    s << '[';
    for (size_t i = 0; i < v.size(); ++i) s << (i ? ", " : "") << v[i];
    s << ']';
    return s.str();
  };
  if (pf.type) os << "type = \"" << *pf.type << "\"\n";
  if (pf.rank) os << "rank = " << *pf.rank << '\n';
  if (pf.roots) {
    os << "roots = [";
    for (size_t i = 0; i < pf.roots->size(); ++i) os << (i ? ", " : "") << ints((*pf.roots)[i]);
    os << "]\n";
  }
  if (pf.r) os << "r = " << *pf.r << '\n';
  if (pf.theta) {
    os << "theta = [";
    for (size_t i = 0; i < pf.theta->size(); ++i) os << (i ? ", " : "") << '"' << (*pf.theta)[i].str() << '"';
    os << "]\n";
  }
  if (pf.truncation) os << "truncation = " << *pf.truncation << '\n';
  if (pf.p) os << "p = " << ints(*pf.p) << '\n';
  if (pf.degree) os << "degree = " << *pf.degree << '\n';
  if (pf.genus) os << "genus = " << *pf.genus << '\n';
  if (pf.lambda) os << "lambda = " << pf.lambda->str() << '\n';
  if (pf.point_labels) {
    os << "points = [";
    for (size_t i = 0; i < pf.point_labels->size(); ++i) os << (i ? ", " : "") << (*pf.point_labels)[i];
    os << "]\n";
  }
  if (pf.a) os << "a = " << format_literal(*pf.a) << '\n';
  if (pf.b) os << "b = " << format_literal(*pf.b) << '\n';
  for (const auto& pt : pf.points) os << "point " << pt.label << ": r = " << pt.r << ", p = " << ints(pt.p) << '\n';
  for (const auto& s : pf.summands) {
    os << "summand " << s.label << ": degree = " << s.degree << ", weights = [";
    for (size_t i = 0; i < s.weights.size(); ++i) os << (i ? ", " : "") << s.weights[i].str();
    os << "]\n";
  }
  for (const auto& d : pf.decompositions) {
    os << "decomposition " << d.name << ':';
    for (size_t b = 0; b < d.blocks.size(); ++b) os << (b ? "; " : " ") << ints(d.blocks[b].slots) << " deg " << d.blocks[b].degree;
    os << '\n';
  }
  for (const auto& c : pf.characters) {
    os << "character " << c.decomposition << ": [";
    for (size_t i = 0; i < c.exponents.size(); ++i) os << (i ? ", " : "") << c.exponents[i];
    os << "]\n";
  }
  for (const auto& el : pf.elements) {
    if (el.element != "xi") os << el.element << '.';
    os << (el.kind == BasisLabel::Kind::Cartan ? "h[" : "x[");
    if (el.root) {
      os << '(';
      for (size_t i = 0; i < el.root->size(); ++i) os << (i ? "," : "") << (*el.root)[i];
      os << ')';
    } else {
      os << *el.index;
    }
    os << "]: " << format_literal(el.value) << '\n';
  }
  for (const auto& ml : pf.matrix) os << ml.name << '[' << ml.row << "][" << ml.col << "] = " << format_literal(ml.value) << '\n';
  return os.str();
}

}  // namespace parlog
