#ifndef IOPP_TM_HPP
#define IOPP_TM_HPP

// Reduction from acceptance of a linearly bounded deterministic Turing machine
// to (non-)well-specification of an IO protocol. One agent holds the machine
// state, one the head position, one per cell its letter, and one control agent
// guesses and executes transitions step by step. Any two agents that together
// break this shape meet eventually and spawn a contagious zombie.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "iopp/error.hpp"
#include "iopp/oracle.hpp"
#include "iopp/protocol.hpp"

namespace iopp {

enum class Move { Left, Right };

struct TmRule {
  std::string state, read, next, write;
  Move move = Move::Right;
  friend bool operator==(const TmRule&, const TmRule&) = default;
};

struct TuringMachine {
  std::string name;
  std::vector<std::string> states;
  std::vector<std::string> input_alphabet;
  std::vector<std::string> tape_alphabet;
  std::string init, accept, reject;
  std::vector<TmRule> delta;
  std::vector<std::string> input;  // optional default word

  bool halting(const std::string& q) const { return q == accept || q == reject; }

  friend bool operator==(const TuringMachine&, const TuringMachine&) = default;

  const TmRule* rule(const std::string& q, const std::string& a) const {
    for (const TmRule& r : delta)
      if (r.state == q && r.read == a) return &r;
    return nullptr;
  }

  void validate() const {
    auto has = [](const std::vector<std::string>& v, const std::string& x) {
      return std::find(v.begin(), v.end(), x) != v.end();
    };
    auto ident = [](const std::string& s) {
      return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c == '_'; });
    };
    auto distinct = [](std::vector<std::string> v) {
      std::sort(v.begin(), v.end());
      return std::adjacent_find(v.begin(), v.end()) == v.end();
    };
    if (states.empty() || tape_alphabet.empty()) throw ProtocolError("machine needs states and a tape alphabet");
    for (const auto* list : {&states, &input_alphabet, &tape_alphabet}) {
      if (!distinct(*list)) throw ProtocolError("duplicate name in machine declaration");
      for (const std::string& x : *list)
        if (!ident(x)) throw ProtocolError("machine name '" + x + "' must be alphanumeric");
    }
    for (const std::string& a : input_alphabet)
      if (!has(tape_alphabet, a)) throw ProtocolError("input letter '" + a + "' missing from tape alphabet");
    for (const std::string* q : {&init, &accept, &reject})
      if (!has(states, *q)) throw ProtocolError("undeclared machine state '" + *q + "'");
    if (accept == reject) throw ProtocolError("accepting and rejecting states must differ");
    std::set<std::pair<std::string, std::string>> seen;
    for (const TmRule& r : delta) {
      if (!has(states, r.state) || !has(states, r.next)) throw ProtocolError("rule uses an undeclared state");
      if (!has(tape_alphabet, r.read) || !has(tape_alphabet, r.write)) throw ProtocolError("rule uses an undeclared letter");
      if (halting(r.state)) throw ProtocolError("halting state '" + r.state + "' has an outgoing rule");
      if (!seen.emplace(r.state, r.read).second)
        throw ProtocolError("machine is nondeterministic at (" + r.state + ", " + r.read + ")");
    }
  }
};

struct TmRun {
  bool accepted = false;
  std::string final_state;
  std::size_t steps = 0;
};

/// Direct simulation on a tape of exactly |word| cells. Throws if the machine
/// gets stuck, leaves the tape before halting, or exceeds max_steps.
inline TmRun simulate(const TuringMachine& tm, const std::vector<std::string>& word, std::size_t max_steps = 1'000'000) {
  tm.validate();
  if (word.empty()) throw ProtocolError("input word must be nonempty");
  for (const std::string& a : word)
    if (std::find(tm.input_alphabet.begin(), tm.input_alphabet.end(), a) == tm.input_alphabet.end())
      throw ProtocolError("input letter '" + a + "' not in the input alphabet");
  std::vector<std::string> tape = word;
  std::string q = tm.init;
  std::size_t head = 0;
  TmRun run;
  while (!tm.halting(q)) {
    if (run.steps == max_steps) throw ProtocolError("machine does not halt within " + std::to_string(max_steps) + " steps");
    const TmRule* r = tm.rule(q, tape[head]);
    if (!r) throw ProtocolError("machine has no move at (" + q + ", " + tape[head] + ")");
    tape[head] = r->write;
    q = r->next;
    ++run.steps;
    const bool off = r->move == Move::Left ? head == 0 : head + 1 == tape.size();
    if (off) {
      if (!tm.halting(q)) throw ProtocolError("machine falls off the tape");
      break;
    }
    head = r->move == Move::Left ? head - 1 : head + 1;
  }
  run.final_state = q;
  run.accepted = q == tm.accept;
  return run;
}

struct StateRole {
  enum Kind { Machine, Head, Cell, Control, Zombie } kind = Control;
  std::size_t cell = 0;  // for Cell
};

struct GeneratedInstance {
  PopulationProtocol protocol;
  Point initial;
  Nat good_size = 0;
  std::vector<StateRole> roles;  // per protocol state
};

/// Builds the protocol for tm on word (cells numbered from 1).
inline GeneratedInstance encode_tm(const TuringMachine& tm, const std::vector<std::string>& word) {
  tm.validate();
  const std::size_t n = word.size();
  if (n == 0) throw ProtocolError("input word must be nonempty");
  for (const std::string& a : word)
    if (std::find(tm.input_alphabet.begin(), tm.input_alphabet.end(), a) == tm.input_alphabet.end())
      throw ProtocolError("input letter '" + a + "' not in the input alphabet");

  GeneratedInstance gi;
  ProtocolScheme s;
  auto add = [&](const std::string& name, StateRole role) {
    const StateId id = s.add_state(name);
    gi.roles.push_back(role);
    return id;
  };
  auto cell_name = [](std::size_t i, const std::string& a) { return "c" + std::to_string(i) + "_" + a; };

  std::map<std::string, StateId> q_id;
  for (const std::string& q : tm.states) q_id[q] = add("q_" + q, {StateRole::Machine});
  std::vector<StateId> head(n + 2, kNoState);
  for (std::size_t i = 1; i <= n; ++i) head[i] = add("h" + std::to_string(i), {StateRole::Head});
  std::map<std::pair<std::size_t, std::string>, StateId> cell;
  for (std::size_t i = 1; i <= n; ++i)
    for (const std::string& a : tm.tape_alphabet) cell[{i, a}] = add(cell_name(i, a), {StateRole::Cell, i});

  struct Ctl {
    StateId t;
    std::vector<StateId> at;                                 // <t|i>
    std::map<std::pair<std::size_t, std::string>, StateId> read, done1, done2;  // <t|i,a>, <t|i,a,1>, <t|i,a,2>
  };
  std::vector<Ctl> ctl(tm.delta.size());
  for (std::size_t j = 0; j < tm.delta.size(); ++j) {
    const std::string t = "t" + std::to_string(j + 1);
    ctl[j].t = add(t, {StateRole::Control});
    ctl[j].at.assign(n + 1, kNoState);
    for (std::size_t i = 1; i <= n; ++i) ctl[j].at[i] = add(t + "_h" + std::to_string(i), {StateRole::Control});
    for (std::size_t i = 1; i <= n; ++i)
      for (const std::string& a : tm.tape_alphabet) {
        const std::string base = t + "_h" + std::to_string(i) + "_" + a;
        ctl[j].read[{i, a}] = add(base, {StateRole::Control});
        ctl[j].done1[{i, a}] = add(base + "_1", {StateRole::Control});
        ctl[j].done2[{i, a}] = add(base + "_2", {StateRole::Control});
      }
  }
  const StateId start = add("start", {StateRole::Control});
  const StateId zombie = add("zombie", {StateRole::Zombie});

  // (x observes y) x y -> x' y
  auto observe = [&](StateId x, StateId y, StateId x2) {
    if (x != x2) s.add_transition(Transition{x, y, x2, y});
  };

  for (std::size_t j = 0; j < tm.delta.size(); ++j) {
    const TmRule& r = tm.delta[j];
    const Ctl& c = ctl[j];
    observe(start, q_id[r.state], c.t);  // 1: guess a rule of the current state
    for (std::size_t i = 1; i <= n; ++i) {
      observe(c.t, head[i], c.at[i]);  // 2: learn the head position
      for (const std::string& b : tm.tape_alphabet)
        observe(c.at[i], cell[{i, b}], b == r.read ? c.read.at({i, r.read}) : start);  // 3, or roll back
      const StateId rd = c.read.at({i, r.read}), d1 = c.done1.at({i, r.read}), d2 = c.done2.at({i, r.read});
      observe(q_id[r.state], rd, q_id[r.next]);           // 4
      observe(rd, q_id[r.next], d1);                      // 5
      observe(cell[{i, r.read}], d1, cell[{i, r.write}]);  // 6
      observe(d1, cell[{i, r.write}], d2);                // 7
      const bool left = r.move == Move::Left;
      if (left ? i > 1 : i < n) {
        const std::size_t to = left ? i - 1 : i + 1;
        observe(head[i], d2, head[to]);  // 8
        observe(d2, head[to], start);    // 9
      }
    }
  }

  // Uniqueness violations: two agents of the same class.
  std::vector<std::vector<StateId>> classes(3 + n);
  for (StateId q = 0; q < s.size(); ++q) {
    const StateRole& role = gi.roles[q];
    switch (role.kind) {
      case StateRole::Machine: classes[0].push_back(q); break;
      case StateRole::Head: classes[1].push_back(q); break;
      case StateRole::Control: classes[2].push_back(q); break;
      case StateRole::Cell: classes[2 + role.cell].push_back(q); break;
      case StateRole::Zombie: break;
    }
  }
  for (const auto& cls : classes)
    for (std::size_t a = 0; a < cls.size(); ++a)
      for (std::size_t b = a; b < cls.size(); ++b) {
        s.add_transition(Transition{cls[a], cls[b], zombie, cls[b]});
        if (a != b) s.add_transition(Transition{cls[b], cls[a], zombie, cls[a]});
      }
  for (StateId q = 0; q < s.size(); ++q)
    if (q != zombie) s.add_transition(Transition{q, zombie, zombie, zombie});

  gi.protocol.name = tm.name.empty() ? "tm" : tm.name;
  gi.protocol.output.assign(s.size(), 1);
  gi.protocol.output[q_id[tm.accept]] = 0;
  gi.protocol.scheme = std::move(s);

  gi.initial.assign(gi.protocol.size(), 0);
  gi.initial[q_id[tm.init]] = 1;
  gi.initial[head[1]] = 1;
  for (std::size_t i = 1; i <= n; ++i) gi.initial[cell[{i, word[i - 1]}]] = 1;
  gi.initial[start] = 1;
  gi.good_size = n + 3;
  return gi;
}

inline bool good_for_simulation(const GeneratedInstance& gi, std::span<const Nat> c) {
  std::size_t cells = 0;
  for (const StateRole& r : gi.roles) cells = std::max(cells, r.kind == StateRole::Cell ? r.cell : 0);
  std::vector<Nat> per_cell(cells + 1, 0);
  Nat machine = 0, head = 0, control = 0, zombies = 0;
  for (StateId q = 0; q < c.size(); ++q) {
    const StateRole& r = gi.roles[q];
    switch (r.kind) {
      case StateRole::Machine: machine += c[q]; break;
      case StateRole::Head: head += c[q]; break;
      case StateRole::Control: control += c[q]; break;
      case StateRole::Cell: per_cell[r.cell] += c[q]; break;
      case StateRole::Zombie: zombies += c[q]; break;
    }
  }
  bool ok = machine == 1 && head == 1 && control == 1 && zombies == 0;
  for (std::size_t i = 1; i <= cells; ++i) ok = ok && per_cell[i] == 1;
  return ok;
}

struct InstanceReport {
  bool all_io = true;
  bool good_initial = false;
  std::size_t reachable = 0;
  bool dissensus_bottom = false;  // some reachable bottom SCC holds a dissensus
  bool reaches_accept = false;    // some reachable configuration has an agent in q_acc
  std::optional<int> value;       // stabilization value from the initial configuration
};

inline InstanceReport validate_instance(const GeneratedInstance& gi, const OracleOptions& opt = {}) {
  InstanceReport rep;
  rep.all_io = gi.protocol.scheme.is_io();
  rep.good_initial = good_for_simulation(gi, gi.initial);
  const Point seed[] = {gi.initial};
  ConfigGraph g = ConfigGraph::explore(gi.protocol.scheme, seed, opt);
  Stability st(g, gi.protocol);
  rep.reachable = g.size();
  rep.value = st.stabilizes_to(0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point& c = g.node(i);
    for (StateId q = 0; q < c.size(); ++q)
      if (c[q] > 0 && gi.protocol.output[q] == 0) rep.reaches_accept = true;
    if (st.in_bottom(i) && !consensus_of(gi.protocol, c)) rep.dissensus_bottom = true;
  }
  return rep;
}

}  // namespace iopp

#endif  // IOPP_TM_HPP
