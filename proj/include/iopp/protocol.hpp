#ifndef IOPP_PROTOCOL_HPP
#define IOPP_PROTOCOL_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "iopp/constraint.hpp"
#include "iopp/error.hpp"

namespace iopp {

using StateId = std::size_t;
inline constexpr StateId kNoState = static_cast<StateId>(-1);

/// Raw interaction (a, b) -> (c, d) over state indices. Order inside each pair
/// is irrelevant to the semantics.
struct Transition {
  StateId a = 0, b = 0, c = 0, d = 0;
  friend auto operator<=>(const Transition&, const Transition&) = default;
};

/// An immediate-observation reading of a transition: the agent in `source`
/// observes an agent in `observed` and moves to `destination`.
struct IOTransition {
  StateId source = 0;
  StateId observed = 0;
  StateId destination = 0;
  std::size_t origin = 0;  // index of the raw transition in its scheme
  bool noop = false;

  bool self_observing() const noexcept { return !noop && source == observed; }
  friend bool operator==(const IOTransition&, const IOTransition&) = default;
};

/// Classifies t as immediate observation; nullopt means t is not IO.
inline std::optional<IOTransition> classify_io(const Transition& t, std::size_t origin = 0) {
  const std::array<StateId, 2> lhs{t.a, t.b}, rhs{t.c, t.d};
  // Sides equal as multisets: any reading leaves the configuration unchanged.
  if ((t.a == t.c && t.b == t.d) || (t.a == t.d && t.b == t.c)) return IOTransition{t.a, t.b, t.a, origin, true};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      if (lhs[i] == rhs[j]) return IOTransition{lhs[1 - i], lhs[i], rhs[1 - j], origin, lhs[1 - i] == rhs[1 - j]};
  return std::nullopt;
}

class ProtocolScheme {
 public:
  ProtocolScheme() = default;

  explicit ProtocolScheme(std::vector<std::string> states) : states_(std::move(states)) {
    for (StateId i = 0; i < states_.size(); ++i)
      if (!index_.emplace(states_[i], i).second) throw ProtocolError("duplicate state name '" + states_[i] + "'");
  }

  std::size_t size() const noexcept { return states_.size(); }
  const std::vector<std::string>& states() const noexcept { return states_; }
  const std::string& name(StateId q) const { return states_.at(q); }
  const std::vector<Transition>& transitions() const noexcept { return transitions_; }

  std::optional<StateId> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  StateId id(const std::string& name) const {
    if (auto q = find(name)) return *q;
    throw ProtocolError("undeclared state '" + name + "'");
  }

  StateId add_state(const std::string& name) {
    if (!index_.emplace(name, states_.size()).second) throw ProtocolError("duplicate state name '" + name + "'");
    states_.push_back(name);
    return states_.size() - 1;
  }

  void add_transition(Transition t) {
    for (StateId q : {t.a, t.b, t.c, t.d})
      if (q >= states_.size()) throw ProtocolError("transition refers to undeclared state index " + std::to_string(q));
    transitions_.push_back(t);
  }

  void add_transition(const std::string& a, const std::string& b, const std::string& c, const std::string& d) {
    add_transition(Transition{id(a), id(b), id(c), id(d)});
  }

  /// IO readings of all transitions; throws if some transition is not IO.
  std::vector<IOTransition> io_transitions() const {
    std::vector<IOTransition> out;
    out.reserve(transitions_.size());
    for (std::size_t k = 0; k < transitions_.size(); ++k) {
      auto io = classify_io(transitions_[k], k);
      if (!io) throw ProtocolError("transition " + describe(transitions_[k]) + " is not immediate observation");
      out.push_back(*io);
    }
    return out;
  }

  bool is_io() const {
    return std::all_of(transitions_.begin(), transitions_.end(), [](const Transition& t) { return classify_io(t).has_value(); });
  }

  /// IO and no transition in which an agent observes its own source state.
  bool is_normal_form() const {
    for (const Transition& t : transitions_) {
      auto io = classify_io(t);
      if (!io || io->self_observing()) return false;
    }
    return true;
  }

  std::string describe(const Transition& t) const {
    return "(" + states_[t.a] + ", " + states_[t.b] + ") -> (" + states_[t.c] + ", " + states_[t.d] + ")";
  }

  friend bool operator==(const ProtocolScheme& x, const ProtocolScheme& y) {
    return x.states_ == y.states_ && x.transitions_ == y.transitions_;
  }

 private:
  std::vector<std::string> states_;
  std::unordered_map<std::string, StateId> index_;
  std::vector<Transition> transitions_;
};

/// Multiset of agents over the states of a scheme, with at least two agents.
class Configuration {
 public:
  explicit Configuration(Point counts) : counts_(std::move(counts)) {
    if (total() < 2) throw ProtocolError("a population needs at least two agents");
  }

  const Point& counts() const noexcept { return counts_; }
  Nat operator[](StateId q) const { return counts_[q]; }
  Nat total() const {
    Nat s = 0;
    for (Nat c : counts_) s = checked_add(s, c);
    return s;
  }

  friend auto operator<=>(const Configuration&, const Configuration&) = default;

 private:
  Point counts_;
};

/// Applies t to raw counts in place; false (and counts untouched) if disabled.
inline bool apply_transition(Point& counts, const Transition& t) {
  if (t.a == t.b ? counts[t.a] < 2 : (counts[t.a] < 1 || counts[t.b] < 1)) return false;
  --counts[t.a];
  --counts[t.b];
  ++counts[t.c];
  ++counts[t.d];
  return true;
}

/// One interaction; nullopt when t is disabled at c.
inline std::optional<Configuration> step(const Configuration& c, const Transition& t) {
  Point next = c.counts();
  for (StateId q : {t.a, t.b, t.c, t.d})
    if (q >= next.size()) throw ProtocolError("transition refers to a state outside the configuration");
  if (!apply_transition(next, t)) return std::nullopt;
  return Configuration(std::move(next));
}

struct InputBinding {
  std::string variable;
  StateId state = 0;
  friend bool operator==(const InputBinding&, const InputBinding&) = default;
};

/// Scheme plus a simple (injective) input mapping and an output map.
struct PopulationProtocol {
  std::string name;
  ProtocolScheme scheme;
  std::vector<InputBinding> inputs;
  std::vector<int> output;  // per state, 0 or 1

  std::size_t size() const noexcept { return scheme.size(); }

  void validate() const {
    if (output.size() != scheme.size()) throw ProtocolError("output map must assign every state");
    for (int o : output)
      if (o != 0 && o != 1) throw ProtocolError("outputs must be 0 or 1");
    std::vector<bool> used(scheme.size(), false);
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      const InputBinding& in = inputs[i];
      if (in.state >= scheme.size()) throw ProtocolError("input '" + in.variable + "' maps to an undeclared state");
      if (used[in.state]) throw ProtocolError("input mapping is not injective at state '" + scheme.name(in.state) + "'");
      used[in.state] = true;
      for (std::size_t j = 0; j < i; ++j)
        if (inputs[j].variable == in.variable) throw ProtocolError("duplicate input variable '" + in.variable + "'");
    }
  }

  std::optional<std::size_t> input_index(const std::string& variable) const {
    for (std::size_t i = 0; i < inputs.size(); ++i)
      if (inputs[i].variable == variable) return i;
    return std::nullopt;
  }

  /// Configuration I(X) for an input population given per input variable.
  Point initial_point(std::span<const Nat> per_input) const {
    require_same_dim(inputs.size(), per_input.size());
    Point c(size(), 0);
    for (std::size_t i = 0; i < inputs.size(); ++i) c[inputs[i].state] = per_input[i];
    return c;
  }

  friend bool operator==(const PopulationProtocol&, const PopulationProtocol&) = default;
};

/// Minterms over `dim` variables with `pinned` fixed to zero and "sum over
/// `free` >= 2" encoded as one lower bound of 2 or two lower bounds of 1.
inline CountingConstraint at_least_two(std::size_t dim, std::span<const StateId> free, const Minterm& background) {
  std::vector<Minterm> ms;
  for (std::size_t i = 0; i < free.size(); ++i) {
    Minterm m = background;
    m.set_lower(free[i], 2);
    ms.push_back(m);
    for (std::size_t j = i + 1; j < free.size(); ++j) {
      Minterm pair = background;
      pair.set_lower(free[i], 1).set_lower(free[j], 1);
      ms.push_back(std::move(pair));
    }
  }
  return canonicalize(CountingConstraint(dim, std::move(ms)));
}

/// Initial configurations: non-input states empty and at least two agents.
inline CountingConstraint initial_constraint(const PopulationProtocol& p) {
  if (p.inputs.empty()) throw ProtocolError("protocol declares no input states");
  Minterm background(p.size());
  for (StateId q = 0; q < p.size(); ++q) background.set_exact(q, 0);
  std::vector<StateId> free;
  for (const InputBinding& in : p.inputs) {
    background.set_upper(in.state, Bound::infinity());
    free.push_back(in.state);
  }
  return at_least_two(p.size(), free, background);
}

/// b-consensus configurations: every state with output 1-b is empty.
inline CountingConstraint consensus_constraint(const PopulationProtocol& p, int b) {
  Minterm m(p.size());
  for (StateId q = 0; q < p.size(); ++q)
    if (p.output[q] != b) m.set_exact(q, 0);
  return CountingConstraint::of(m);
}

/// Whether some state outputs b; otherwise the b-consensus populations are empty.
inline bool has_output(const PopulationProtocol& p, int b) {
  return std::find(p.output.begin(), p.output.end(), b) != p.output.end();
}

inline ProtocolScheme reverse(const ProtocolScheme& s) {
  ProtocolScheme r(s.states());
  for (const Transition& t : s.transitions()) r.add_transition(Transition{t.c, t.d, t.a, t.b});
  return r;
}

/// Maps a predicate over the input variables to the initial configurations
/// satisfying it.
inline CountingConstraint predicate_to_state_constraint(const PopulationProtocol& p, const CountingConstraint& pred) {
  require_same_dim(p.inputs.size(), pred.dim());
  std::vector<StateId> target;
  Minterm background(p.size());
  for (StateId q = 0; q < p.size(); ++q) background.set_exact(q, 0);
  for (const InputBinding& in : p.inputs) target.push_back(in.state);
  return intersect(remap(pred, target, background), initial_constraint(p));
}

/// Result of bringing a protocol into normal form.
struct Normalized {
  PopulationProtocol protocol;
  CountingConstraint initial;       // over the normalized states
  std::size_t original_states = 0;  // original states keep their indices
  std::vector<StateId> origin;      // normalized state -> original state, or kNoState
  StateId r = kNoState, r_prime = kNoState;
  bool changed = false;

  /// Extends a constraint over the original states: helper agents pinned to
  /// one in r and none in r' or primed copies.
  CountingConstraint lift(const CountingConstraint& g) const {
    require_same_dim(original_states, g.dim());
    if (!changed) return canonicalize(g);
    Minterm background(protocol.size());
    for (StateId q = original_states; q < protocol.size(); ++q) background.set_exact(q, 0);
    background.set_exact(r, 1);
    std::vector<StateId> target(original_states);
    std::iota(target.begin(), target.end(), StateId{0});
    return remap(g, target, background);
  }

  /// A configuration over the original states, plus the helper agent in r.
  Point lift_point(std::span<const Nat> c) const {
    require_same_dim(original_states, c.size());
    Point out(protocol.size(), 0);
    std::copy(c.begin(), c.end(), out.begin());
    if (changed) out[r] = 1;
    return out;
  }

  /// Folds primed copies back onto their originals; r and r' are dropped.
  Point project(std::span<const Nat> c) const {
    require_same_dim(protocol.size(), c.size());
    Point out(original_states, 0);
    for (StateId q = 0; q < c.size(); ++q)
      if (origin[q] != kNoState) out[origin[q]] = checked_add(out[origin[q]], c[q]);
    return out;
  }

  Nat helper_agents(std::span<const Nat> c) const {
    if (!changed) return 0;
    return c[r] + c[r_prime];
  }
};

inline std::string fresh_name(const ProtocolScheme& s, std::string base) {
  while (s.find(base)) base += "_";
  return base;
}

/// Normal-form transform: self-observing transitions (q,q) -> (q,d) are
/// rerouted through a primed copy q' of q, guarded by a helper agent that
/// toggles between r (output 0) and r' (output 1).
inline Normalized normalize(const PopulationProtocol& p) {
  p.validate();
  const auto io = p.scheme.io_transitions();
  Normalized out;
  out.original_states = p.size();
  const bool needed = std::any_of(io.begin(), io.end(), [](const IOTransition& t) { return t.self_observing(); });
  if (!needed) {
    out.protocol = p;
    out.initial = p.inputs.empty() ? CountingConstraint(p.size()) : initial_constraint(p);
    out.origin.resize(p.size());
    std::iota(out.origin.begin(), out.origin.end(), StateId{0});
    return out;
  }
  out.changed = true;

  ProtocolScheme s(p.scheme.states());
  std::vector<int> output = p.output;
  out.origin.resize(p.size());
  std::iota(out.origin.begin(), out.origin.end(), StateId{0});

  out.r = s.add_state(fresh_name(p.scheme, "r"));
  output.push_back(0);
  out.origin.push_back(kNoState);
  out.r_prime = s.add_state(fresh_name(s, s.name(out.r) + "'"));
  output.push_back(1);
  out.origin.push_back(kNoState);
  const StateId r = out.r, rp = out.r_prime;

  std::vector<StateId> prime(p.size(), kNoState);
  auto primed = [&](StateId q) {
    if (prime[q] == kNoState) {
      prime[q] = s.add_state(fresh_name(s, s.name(q) + "'"));
      output.push_back(p.output[q]);
      out.origin.push_back(q);
    }
    return prime[q];
  };

  for (std::size_t k = 0; k < io.size(); ++k) {
    const IOTransition& t = io[k];
    if (t.self_observing()) {
      StateId qp = primed(t.source);
      s.add_transition(Transition{qp, t.source, qp, t.destination});
    } else {
      s.add_transition(p.scheme.transitions()[k]);
    }
  }
  for (StateId q = 0; q < p.size(); ++q) {
    if (prime[q] == kNoState) continue;
    for (StateId helper : {r, rp}) {
      s.add_transition(Transition{q, helper, helper, prime[q]});
      s.add_transition(Transition{prime[q], helper, helper, q});
    }
  }
  for (StateId q = 0; q < p.size(); ++q) {
    if (p.output[q] == output[rp])
      s.add_transition(Transition{q, r, q, rp});
    else
      s.add_transition(Transition{q, rp, q, r});
  }

  out.protocol.name = p.name;
  out.protocol.scheme = std::move(s);
  out.protocol.inputs = p.inputs;
  out.protocol.output = std::move(output);
  out.initial = p.inputs.empty() ? CountingConstraint(out.protocol.size()) : out.lift(initial_constraint(p));
  return out;
}

}  // namespace iopp

#endif  // IOPP_PROTOCOL_HPP
