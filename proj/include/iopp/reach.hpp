#ifndef IOPP_REACH_HPP
#define IOPP_REACH_HPP

// Accelerated symbolic reachability for IO protocols. fire(M, t) is the exact
// closure of a minterm under arbitrarily many firings of one transition; the
// closures post* / pre* saturate the union of fire over all transitions.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "iopp/constraint.hpp"
#include "iopp/protocol.hpp"

namespace iopp {

struct ReachOptions {
  /// Ceiling on minterms stored at once; exceeding it raises ResourceError.
  std::size_t max_minterms = 1'000'000;
  /// When set, minterms whose lower bounds sum above this are discarded. The
  /// closure is then exact on configurations with at most this many agents.
  std::optional<Nat> max_total;
  /// Accept transitions whose observer watches its own source state. Only the
  /// reversal of a normal-form scheme needs this.
  bool allow_self_observation = false;
  /// When set, every stored minterm is clipped to this set. For pre* this is
  /// exact on the universe whenever the universe is closed under steps, since
  /// every path starting in it stays in it.
  std::optional<CountingConstraint> universe;
};

struct ReachResult {
  CountingConstraint closure;
  std::size_t iterations = 0;
  std::size_t peak_minterms = 0;
  Nat l_norm = 0;
  Nat u_norm = 0;
};

namespace detail {

inline void fire_into(const Minterm& m, const IOTransition& t, std::vector<Minterm>& out) {
  const StateId s = t.source, o = t.observed, d = t.destination;
  // Agents that must stay in s: the observer itself when it watches s.
  const Nat keep = (s == o) ? 1 : 0;
  Minterm enabled = m;
  enabled.set_lower(s, std::max<Nat>(enabled.lower(s), 1 + keep));
  enabled.set_lower(o, std::max<Nat>(enabled.lower(o), 1));
  if (is_empty(enabled)) return;
  const Nat ls = enabled.lower(s);
  const Nat ld = enabled.lower(d);
  const Bound us = m.upper(s);
  const Bound ud = m.upper(d);
  if (us.is_finite()) {
    for (Nat k = 1; k + keep <= us.value(); ++k) {
      Minterm r = enabled;
      r.set_upper(s, Bound(us.value() - k));
      r.set_lower(s, ls > k + keep ? ls - k : keep);
      r.set_upper(d, ud.plus(k));
      r.set_lower(d, checked_add(ld, k));
      out.push_back(std::move(r));
    }
  } else {
    for (Nat k = 1; k + keep <= ls; ++k) {
      Minterm r = enabled;
      r.set_lower(s, ls - k);
      r.set_lower(d, checked_add(ld, k));
      r.set_upper(d, Bound::infinity());
      out.push_back(std::move(r));
    }
  }
}

inline void check_transition(const IOTransition& t, std::size_t dim, bool allow_self) {
  if (t.source >= dim || t.observed >= dim || t.destination >= dim)
    throw DimensionError("transition refers to a state outside the constraint space");
  if (!t.noop && t.source == t.observed && !allow_self)
    throw ProtocolError("fire requires normal form: the observer watches its own source state");
}

}  // namespace detail

/// Minterms reachable from m by firing t any number of times (including m).
inline CountingConstraint fire(const Minterm& m, const IOTransition& t) {
  detail::check_transition(t, m.dim(), false);
  std::vector<Minterm> out{m};
  if (!t.noop) detail::fire_into(m, t, out);
  return canonicalize(CountingConstraint(m.dim(), std::move(out)));
}

inline CountingConstraint post_star_t(const CountingConstraint& g, const IOTransition& t) {
  detail::check_transition(t, g.dim(), false);
  std::vector<Minterm> out;
  for (const Minterm& m : g) {
    out.push_back(m);
    if (!t.noop) detail::fire_into(m, t, out);
  }
  return canonicalize(CountingConstraint(g.dim(), std::move(out)));
}

/// One accelerated round: the union of post*[t](g) over every transition.
inline CountingConstraint post_a(const CountingConstraint& g, const ProtocolScheme& s) {
  require_same_dim(s.size(), g.dim());
  const auto io = s.io_transitions();
  std::vector<Minterm> out(g.begin(), g.end());
  for (const Minterm& m : g)
    for (const IOTransition& t : io) {
      detail::check_transition(t, g.dim(), false);
      if (!t.noop) detail::fire_into(m, t, out);
    }
  return canonicalize(CountingConstraint(g.dim(), std::move(out)));
}

/// Saturates g under post_a. Each round fires only the minterms added in the
/// previous round; the fixpoint is reached when a round adds no minterm not
/// already subsumed.
inline ReachResult post_star(const CountingConstraint& g, const ProtocolScheme& s, const ReachOptions& opt = {}) {
  require_same_dim(s.size(), g.dim());
  std::vector<IOTransition> io;
  for (const IOTransition& t : s.io_transitions()) {
    detail::check_transition(t, g.dim(), opt.allow_self_observation);
    if (!t.noop) io.push_back(t);
  }
  auto within = [&](const Minterm& m) { return !opt.max_total || l_norm(m) <= *opt.max_total; };

  ReachResult res;
  Antichain store(g.dim());
  std::vector<std::size_t> next;
  auto add = [&](Minterm m) {
    if (!within(m)) return;
    if (!opt.universe) {
      if (auto slot = store.insert(std::move(m))) next.push_back(*slot);
      return;
    }
    for (const Minterm& u : *opt.universe)
      if (auto piece = meet(m, u))
        if (auto slot = store.insert(std::move(*piece))) next.push_back(*slot);
  };
  if (opt.universe) require_same_dim(g.dim(), opt.universe->dim());
  for (const Minterm& m : g) add(m);
  std::vector<std::size_t> frontier;
  for (std::size_t slot : next)
    if (store.alive(slot)) frontier.push_back(slot);
  next.clear();
  res.peak_minterms = store.size();

  std::vector<Minterm> fired;
  do {
    ++res.iterations;
    for (std::size_t slot : frontier) {
      if (!store.alive(slot)) continue;
      const Minterm m = store.at(slot);
      for (const IOTransition& t : io) {
        fired.clear();
        detail::fire_into(m, t, fired);
        for (Minterm& f : fired) add(std::move(f));
        res.peak_minterms = std::max(res.peak_minterms, store.size());
        if (store.size() > opt.max_minterms)
          throw ResourceError("minterm ceiling exceeded",
                              "iterations=" + std::to_string(res.iterations) + " minterms=" + std::to_string(store.size()) +
                                  " ceiling=" + std::to_string(opt.max_minterms));
      }
    }
    frontier.clear();
    for (std::size_t slot : next)
      if (store.alive(slot)) frontier.push_back(slot);
    next.clear();
  } while (!frontier.empty());

  res.closure = to_constraint(store);
  res.l_norm = l_norm(res.closure);
  res.u_norm = u_norm(res.closure);
  return res;
}

/// Configurations that can reach g: post* in the reversed scheme.
inline ReachResult pre_star(const CountingConstraint& g, const ProtocolScheme& s, ReachOptions opt = {}) {
  for (const IOTransition& t : s.io_transitions())
    detail::check_transition(t, g.dim(), opt.allow_self_observation);
  opt.allow_self_observation = true;
  return post_star(g, reverse(s), opt);
}

}  // namespace iopp

#endif  // IOPP_REACH_HPP
