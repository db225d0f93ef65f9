#ifndef IOPP_PARSE_HPP
#define IOPP_PARSE_HPP

// Readers for the text formats: protocol files, constraint expressions,
// serialized minterm lists, and Turing machine files. Every error carries a
// 1-based line and column.

#include <cctype>
#include <charconv>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "iopp/constraint.hpp"
#include "iopp/error.hpp"
#include "iopp/protocol.hpp"
#include "iopp/tm.hpp"

namespace iopp {

namespace detail {

// Digits may lead a name so that states can be called 1, 2, ...
inline bool name_start(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
inline bool name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

/// A source line with comments stripped and a cursor.
class LineCursor {
 public:
  LineCursor(std::string_view text, std::size_t line) : text_(text.substr(0, text.find('#'))), line_(line) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return pos_ + 1; }
  /// Column of the next token.
  std::size_t token_column() {
    skip_space();
    return column();
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool accept(std::string_view lit) {
    skip_space();
    if (text_.substr(pos_).starts_with(lit)) {
      pos_ += lit.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view lit) {
    if (!accept(lit)) fail("expected '" + std::string(lit) + "'");
  }
  std::string name(std::string_view what = "name") {
    skip_space();
    if (pos_ >= text_.size() || !name_start(text_[pos_])) fail("expected " + std::string(what));
    const std::size_t b = pos_;
    while (pos_ < text_.size() && name_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(b, pos_ - b));
  }
  /// A run of non-space characters other than the given separators.
  std::string word(std::string_view stop = "") {
    skip_space();
    const std::size_t b = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           stop.find(text_[pos_]) == std::string_view::npos)
      ++pos_;
    if (b == pos_) fail("expected a token");
    return std::string(text_.substr(b, pos_ - b));
  }
  Nat number() {
    skip_space();
    Nat v = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (ec == std::errc::result_out_of_range) fail("number out of range");
    if (ec != std::errc()) fail("expected a number");
    if (v == std::numeric_limits<Nat>::max()) fail("number out of range");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return v;
  }
  void finish() {
    if (!at_end()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, pos_ + 1, msg); }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

/// Nonblank, non-comment lines of a text.
inline std::vector<LineCursor> content_lines(std::string_view text) {
  std::vector<LineCursor> out;
  std::size_t line = 1;
  while (true) {
    const std::size_t nl = text.find('\n');
    LineCursor c(text.substr(0, nl), line);
    if (!c.at_end()) out.push_back(c);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
    ++line;
  }
  return out;
}

// Recursive descent over  expr := term ('|' term)*,  term := factor ('&' factor)*,
// factor := '!' factor | '(' expr ')' | 'true' | 'false' | name op number.
class ExprParser {
 public:
  ExprParser(LineCursor& cur, const std::vector<std::string>& vars) : cur_(cur), vars_(vars) {}

  CountingConstraint expr() {
    CountingConstraint g = term();
    while (cur_.accept("|")) g = unite(g, term());
    return g;
  }

 private:
  CountingConstraint term() {
    CountingConstraint g = factor();
    while (cur_.accept("&")) g = intersect(g, factor());
    return g;
  }

  CountingConstraint factor() {
    const std::size_t dim = vars_.size();
    if (cur_.accept("!")) return complement(factor());
    if (cur_.accept("(")) {
      CountingConstraint g = expr();
      cur_.expect(")");
      return g;
    }
    const std::size_t col = cur_.token_column();
    const std::string v = cur_.name("variable");
    if (cur_.accept(">=")) return atom(v, col, cur_.number(), std::nullopt);
    if (cur_.accept("<=")) return atom(v, col, std::nullopt, cur_.number());
    if (cur_.accept("=")) {
      const Nat k = cur_.number();
      return atom(v, col, k, k);
    }
    if (v == "true") return CountingConstraint::full(dim);
    if (v == "false") return CountingConstraint(dim);
    cur_.fail("expected '>=', '<=' or '=' after '" + v + "'");
  }

  CountingConstraint atom(const std::string& v, std::size_t col, std::optional<Nat> lo, std::optional<Nat> hi) {
    std::size_t i = 0;
    while (i < vars_.size() && vars_[i] != v) ++i;
    if (i == vars_.size()) throw ParseError(cur_.line(), col, "unknown variable '" + v + "'");
    Minterm m(vars_.size());
    if (lo) m.set_lower(i, *lo);
    if (hi) m.set_upper(i, Bound(*hi));
    return canonicalize(CountingConstraint::of(m));
  }

  LineCursor& cur_;
  const std::vector<std::string>& vars_;
};

}  // namespace detail

/// Parses a boolean combination of threshold atoms over the given variables.
inline CountingConstraint parse_constraint(std::string_view text, const std::vector<std::string>& vars) {
  if (text.find('\n') != std::string_view::npos) throw ParseError(1, text.find('\n') + 1, "expression must be one line");
  detail::LineCursor cur(text, 1);
  if (cur.at_end()) cur.fail("empty expression");
  detail::ExprParser p(cur, vars);
  CountingConstraint g = p.expr();
  cur.finish();
  return g;
}

inline std::vector<std::string> input_variables(const PopulationProtocol& p) {
  std::vector<std::string> vars;
  for (const InputBinding& in : p.inputs) vars.push_back(in.variable);
  return vars;
}

/// A predicate over the protocol's input variables.
inline CountingConstraint parse_predicate(std::string_view text, const PopulationProtocol& p) {
  return parse_constraint(text, input_variables(p));
}

/// The serialized form: one minterm per line, `lo..hi` per variable with
/// `inf` for an unbounded upper end.
inline CountingConstraint parse_minterms(std::string_view text, std::size_t dim) {
  std::vector<Minterm> ms;
  for (detail::LineCursor cur : detail::content_lines(text)) {
    Minterm m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      m.set_lower(i, cur.number());
      cur.expect("..");
      if (cur.accept("inf"))
        m.set_upper(i, Bound::infinity());
      else
        m.set_upper(i, Bound(cur.number()));
    }
    cur.finish();
    ms.push_back(std::move(m));
  }
  return canonicalize(CountingConstraint(dim, std::move(ms)));
}

struct ProtocolFile {
  PopulationProtocol protocol;
  std::optional<Point> init_config;
};

inline ProtocolFile parse_protocol(std::string_view text) {
  auto lines = detail::content_lines(text);
  std::size_t k = 0;
  auto section = [&](std::string_view key, bool required) -> detail::LineCursor* {
    if (k < lines.size() && lines[k].accept(key)) return &lines[k++];
    if (!required) return nullptr;
    if (k < lines.size()) lines[k].fail("expected '" + std::string(key) + "'");
    throw ParseError(lines.empty() ? 1 : lines.back().line() + 1, 1, "missing '" + std::string(key) + "' section");
  };

  ProtocolFile out;
  PopulationProtocol& p = out.protocol;
  {
    auto& cur = *section("protocol", true);
    p.name = cur.name("protocol name");
    cur.finish();
  }
  {
    auto& cur = *section("states:", true);
    while (!cur.at_end()) {
      const std::size_t col = cur.token_column();
      const std::string q = cur.name("state name");
      if (p.scheme.find(q)) throw ParseError(cur.line(), col, "duplicate state '" + q + "'");
      p.scheme.add_state(q);
    }
    if (p.scheme.size() == 0) cur.fail("no states declared");
  }
  auto state = [&](detail::LineCursor& cur) {
    const std::size_t col = cur.token_column();
    const std::string q = cur.name("state name");
    auto id = p.scheme.find(q);
    if (!id) throw ParseError(cur.line(), col, "undeclared state '" + q + "'");
    return *id;
  };
  {
    auto& cur = *section("inputs:", true);
    while (!cur.at_end()) {
      const std::size_t col = cur.token_column();
      const std::string v = cur.name("input variable");
      cur.expect(":");
      const StateId q = state(cur);
      for (const InputBinding& in : p.inputs) {
        if (in.variable == v) throw ParseError(cur.line(), col, "duplicate input variable '" + v + "'");
        if (in.state == q) throw ParseError(cur.line(), col, "input mapping is not injective");
      }
      p.inputs.push_back({v, q});
    }
  }
  {
    auto& cur = *section("outputs:", true);
    p.output.assign(p.scheme.size(), -1);
    while (!cur.at_end()) {
      const std::size_t col = cur.token_column();
      const StateId q = state(cur);
      cur.expect("=");
      const Nat b = cur.number();
      if (b > 1) throw ParseError(cur.line(), col, "output must be 0 or 1");
      if (p.output[q] != -1) throw ParseError(cur.line(), col, "output of '" + p.scheme.name(q) + "' given twice");
      p.output[q] = static_cast<int>(b);
    }
    for (StateId q = 0; q < p.scheme.size(); ++q)
      if (p.output[q] == -1) cur.fail("no output for state '" + p.scheme.name(q) + "'");
  }
  while (auto* cur = section("trans:", false)) {
    const StateId a = state(*cur), b = state(*cur);
    cur->expect("->");
    const StateId c = state(*cur), d = state(*cur);
    cur->finish();
    p.scheme.add_transition(Transition{a, b, c, d});
  }
  if (auto* cur = section("init-config:", false)) {
    Point c(p.scheme.size(), 0);
    while (!cur->at_end()) {
      const StateId q = state(*cur);
      cur->expect(":");
      c[q] = checked_add(c[q], cur->number());
    }
    out.init_config = std::move(c);
  }
  if (k < lines.size()) lines[k].fail("unexpected line");
  return out;
}

/// Letters of a word: whitespace-separated tokens, or single characters when
/// the text has no whitespace.
inline std::vector<std::string> parse_word(std::string_view text) {
  std::vector<std::string> out;
  const bool spaced = text.find_first_of(" \t") != std::string_view::npos;
  std::string cur;
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else if (spaced) {
      cur += ch;
    } else {
      out.emplace_back(1, ch);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline TuringMachine parse_tm(std::string_view text) {
  auto lines = detail::content_lines(text);
  if (lines.empty()) throw ParseError(1, 1, "empty machine file");
  TuringMachine tm;
  auto& head = lines[0];
  head.expect("tm");
  tm.name = head.name("machine name");
  head.finish();

  auto list = [](detail::LineCursor& cur) {
    std::vector<std::string> v;
    while (!cur.at_end()) v.push_back(cur.word());
    return v;
  };
  auto single = [](detail::LineCursor& cur) {
    std::string v = cur.word();
    cur.finish();
    return v;
  };
  std::vector<std::string> seen;
  auto once = [&](detail::LineCursor& cur, const std::string& key) {
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) cur.fail("duplicate '" + key + "' line");
    seen.push_back(key);
  };
  for (std::size_t k = 1; k < lines.size(); ++k) {
    auto& cur = lines[k];
    if (cur.accept("tmstates:")) {
      once(cur, "tmstates");
      tm.states = list(cur);
    } else if (cur.accept("alphabet:")) {
      once(cur, "alphabet");
      tm.input_alphabet = list(cur);
    } else if (cur.accept("tape:")) {
      once(cur, "tape");
      tm.tape_alphabet = list(cur);
    } else if (cur.accept("init:")) {
      once(cur, "init");
      tm.init = single(cur);
    } else if (cur.accept("acc:")) {
      once(cur, "acc");
      tm.accept = single(cur);
    } else if (cur.accept("rej:")) {
      once(cur, "rej");
      tm.reject = single(cur);
    } else if (cur.accept("input:")) {
      once(cur, "input");
      tm.input = list(cur);
    } else if (cur.accept("delta:")) {
      TmRule r;
      r.state = cur.word();
      r.read = cur.word("-");
      cur.expect("->");
      r.next = cur.word();
      r.write = cur.word();
      const std::string m = cur.word();
      if (m == "L")
        r.move = Move::Left;
      else if (m == "R")
        r.move = Move::Right;
      else
        cur.fail("move must be L or R");
      cur.finish();
      tm.delta.push_back(std::move(r));
    } else {
      cur.fail("unknown machine section");
    }
  }
  for (const char* key : {"tmstates", "tape", "init", "acc", "rej"})
    if (std::find(seen.begin(), seen.end(), key) == seen.end())
      throw ParseError(lines.back().line() + 1, 1, std::string("missing '") + key + ":' line");
  if (std::find(seen.begin(), seen.end(), "alphabet") == seen.end()) tm.input_alphabet = tm.tape_alphabet;
  try {
    tm.validate();
  } catch (const ProtocolError& e) {
    throw ParseError(head.line(), 1, e.what());
  }
  return tm;
}

}  // namespace iopp

#endif  // IOPP_PARSE_HPP
