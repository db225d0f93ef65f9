#ifndef IOPP_FORMAT_HPP
#define IOPP_FORMAT_HPP

// Printers for the text formats read by parse.hpp, plus verdict reports.

#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "iopp/constraint.hpp"
#include "iopp/decide.hpp"
#include "iopp/oracle.hpp"
#include "iopp/protocol.hpp"
#include "iopp/tm.hpp"

namespace iopp {

inline std::string to_string(Bound b) { return b.is_infinite() ? "inf" : std::to_string(b.value()); }

/// Serialized form: `lo..hi` per variable.
inline std::string serialize(const Minterm& m) {
  std::string s;
  for (std::size_t i = 0; i < m.dim(); ++i) {
    if (i) s += ' ';
    s += std::to_string(m.lower(i)) + ".." + to_string(m.upper(i));
  }
  return s;
}

inline std::string serialize(const CountingConstraint& g) {
  std::string s;
  for (const Minterm& m : g) s += serialize(m) + '\n';
  return s;
}

/// A minterm as a conjunction of atoms; unconstrained variables are omitted.
inline std::string expression(const Minterm& m, const std::vector<std::string>& vars) {
  require_same_dim(vars.size(), m.dim());
  std::string s;
  auto add = [&](const std::string& atom) { s += (s.empty() ? "" : " & ") + atom; };
  for (std::size_t i = 0; i < m.dim(); ++i) {
    const Nat lo = m.lower(i);
    const Bound hi = m.upper(i);
    if (hi.is_finite() && hi.value() == lo) {
      add(vars[i] + "=" + std::to_string(lo));
      continue;
    }
    if (lo > 0) add(vars[i] + ">=" + std::to_string(lo));
    if (hi.is_finite()) add(vars[i] + "<=" + std::to_string(hi.value()));
  }
  return s.empty() ? "true" : s;
}

inline std::string expression(const CountingConstraint& g, const std::vector<std::string>& vars) {
  if (g.minterms().empty()) return "false";
  if (g.size() == 1) return expression(g.minterms().front(), vars);
  std::string s;
  for (const Minterm& m : g) s += (s.empty() ? "(" : " | (") + expression(m, vars) + ")";
  return s;
}

/// Nonzero entries as `state:count`.
inline std::string configuration(std::span<const Nat> c, const std::vector<std::string>& names) {
  require_same_dim(names.size(), c.size());
  std::string s;
  for (std::size_t q = 0; q < c.size(); ++q)
    if (c[q] > 0) s += (s.empty() ? "" : " ") + names[q] + ":" + std::to_string(c[q]);
  return s.empty() ? "(empty)" : s;
}

inline std::string print_protocol(const PopulationProtocol& p, const std::optional<Point>& init_config = std::nullopt) {
  std::ostringstream o;
  const auto& names = p.scheme.states();
  o << "protocol " << p.name << "\nstates:";
  for (const auto& q : names) o << ' ' << q;
  o << "\ninputs:";
  for (const InputBinding& in : p.inputs) o << ' ' << in.variable << ':' << names[in.state];
  o << "\noutputs:";
  for (StateId q = 0; q < p.size(); ++q) o << ' ' << names[q] << '=' << p.output[q];
  o << '\n';
  for (const Transition& t : p.scheme.transitions())
    o << "trans: " << names[t.a] << ' ' << names[t.b] << " -> " << names[t.c] << ' ' << names[t.d] << '\n';
  if (init_config) o << "init-config: " << configuration(*init_config, names) << '\n';
  return o.str();
}

inline std::string print_tm(const TuringMachine& tm) {
  std::ostringstream o;
  auto list = [&](const char* key, const std::vector<std::string>& v) {
    o << key;
    for (const auto& x : v) o << ' ' << x;
    o << '\n';
  };
  o << "tm " << tm.name << '\n';
  list("tmstates:", tm.states);
  list("alphabet:", tm.input_alphabet);
  list("tape:", tm.tape_alphabet);
  o << "init: " << tm.init << "\nacc: " << tm.accept << "\nrej: " << tm.reject << '\n';
  for (const TmRule& r : tm.delta)
    o << "delta: " << r.state << ' ' << r.read << " -> " << r.next << ' ' << r.write << ' '
      << (r.move == Move::Left ? 'L' : 'R') << '\n';
  if (!tm.input.empty()) list("input:", tm.input);
  return o.str();
}

inline const char* kind_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::WellSpecified: return "WELL-SPECIFIED";
    case VerdictKind::IllSpecified: return "ILL-SPECIFIED";
    case VerdictKind::Correct: return "CORRECT";
    case VerdictKind::Incorrect: return "INCORRECT";
  }
  return "?";
}

inline const char* violation_tag(Violation v) {
  switch (v) {
    case Violation::None: return "none";
    case Violation::Condition1: return "cond1";
    case Violation::Condition2: return "cond2";
    case Violation::WrongValue0: return "wrong_value_0";
    case Violation::WrongValue1: return "wrong_value_1";
  }
  return "?";
}

inline const char* violation_text(Violation v) {
  switch (v) {
    case Violation::None: return "";
    case Violation::Condition1: return "condition 1";
    case Violation::Condition2: return "condition 2";
    case Violation::WrongValue0: return "should stabilize to 0";
    case Violation::WrongValue1: return "should stabilize to 1";
  }
  return "?";
}

/// Human-readable verdict. `p` is the protocol as given by the user.
inline std::string verdict_text(const Verdict& v, const PopulationProtocol& p, const Normalized& norm, bool stats) {
  std::ostringstream o;
  o << kind_name(v.kind);
  if (v.violated != Violation::None) o << " (" << violation_text(v.violated) << ")";
  if (v.input_witness) {
    o << " counterexample";
    for (std::size_t i = 0; i < p.inputs.size(); ++i) o << ' ' << p.inputs[i].variable << '=' << (*v.input_witness)[i];
  } else if (v.original_witness) {
    o << " witness " << configuration(*v.original_witness, p.scheme.states());
  }
  o << '\n';
  if (v.witness && norm.changed)
    o << "normalized witness " << configuration(*v.witness, norm.protocol.scheme.states()) << '\n';
  if (stats)
    for (const ClosureStats& s : v.stats)
      o << "  " << s.label << ": iterations=" << s.iterations << " minterms=" << s.minterms << " peak=" << s.peak_minterms
        << " l_norm=" << s.l_norm << " u_norm=" << s.u_norm << '\n';
  return o.str();
}

inline std::string verdict_kv(const Verdict& v, const PopulationProtocol& p, const Normalized& norm, bool stats) {
  std::ostringstream o;
  std::string kind = kind_name(v.kind);
  for (char& c : kind)
    if (c == '-') c = '_';
  o << "kind=" << kind << "\nviolated_condition=" << violation_tag(v.violated) << '\n';
  if (v.original_witness) o << "witness=" << configuration(*v.original_witness, p.scheme.states()) << '\n';
  if (v.witness) {
    o << "normalized_witness=" << configuration(*v.witness, norm.protocol.scheme.states()) << '\n';
    o << "helper_agents=" << v.helper_agents << '\n';
  }
  if (v.input_witness) {
    o << "input=";
    for (std::size_t i = 0; i < p.inputs.size(); ++i)
      o << (i ? " " : "") << p.inputs[i].variable << ':' << (*v.input_witness)[i];
    o << '\n';
  }
  if (stats)
    for (std::size_t i = 0; i < v.stats.size(); ++i) {
      const ClosureStats& s = v.stats[i];
      const std::string k = "stats." + std::to_string(i) + ".";
      o << k << "closure=" << s.label << '\n'
        << k << "iterations=" << s.iterations << '\n'
        << k << "minterms=" << s.minterms << '\n'
        << k << "peak_minterms=" << s.peak_minterms << '\n'
        << k << "l_norm=" << s.l_norm << '\n'
        << k << "u_norm=" << s.u_norm << '\n';
    }
  return o.str();
}

inline std::ostream& operator<<(std::ostream& o, Bound b) { return o << to_string(b); }
inline std::ostream& operator<<(std::ostream& o, const Minterm& m) { return o << '[' << serialize(m) << ']'; }
inline std::ostream& operator<<(std::ostream& o, const CountingConstraint& g) {
  o << '{';
  bool first = true;
  for (const Minterm& m : g) {
    o << (first ? "" : ", ") << m;
    first = false;
  }
  return o << '}';
}

}  // namespace iopp

#endif  // IOPP_FORMAT_HPP
