#ifndef IOPP_ORACLE_HPP
#define IOPP_ORACLE_HPP

// Explicit-state ground truth at a fixed population size. Fairness is read
// through bottom SCCs: a fair execution eventually enters a bottom SCC of the
// finite configuration graph and visits all of its members forever, so it
// stabilizes to b iff that SCC consists of b-consensus configurations only.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "iopp/constraint.hpp"
#include "iopp/protocol.hpp"
#include "iopp/reach.hpp"

namespace iopp {

struct PointHash {
  std::size_t operator()(const Point& p) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (Nat v : p) {
      h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

inline Nat total(std::span<const Nat> c) {
  Nat s = 0;
  for (Nat v : c) s = checked_add(s, v);
  return s;
}

/// Every configuration of `size` agents over n states, lexicographically.
inline std::vector<Point> enumerate_configs(std::size_t n, Nat size) {
  if (size < 2) throw ProtocolError("populations have at least two agents");
  if (n == 0) throw DimensionError("no states");
  std::vector<Point> out;
  Point c(n, 0);
  auto rec = [&](auto&& self, std::size_t i, Nat left) -> void {
    if (i + 1 == n) {
      c[i] = left;
      out.push_back(c);
      return;
    }
    for (Nat v = 0; v <= left; ++v) {
      c[i] = v;
      self(self, i + 1, left - v);
    }
  };
  rec(rec, 0, size);
  return out;
}

/// Members of ⟦g⟧ with exactly `size` agents, sorted and without duplicates.
inline std::vector<Point> slice(const CountingConstraint& g, Nat size) {
  std::vector<Point> out;
  const std::size_t n = g.dim();
  if (n == 0) return out;
  Point c(n, 0);
  for (const Minterm& m : g) {
    if (is_empty(m)) continue;
    // Room left for variables i.. given their lower bounds.
    std::vector<Nat> rest_lo(n + 1, 0);
    for (std::size_t i = n; i-- > 0;) rest_lo[i] = checked_add(rest_lo[i + 1], m.lower(i));
    auto rec = [&](auto&& self, std::size_t i, Nat left) -> void {
      if (i + 1 == n) {
        if (left >= m.lower(i) && m.upper(i).admits(left)) {
          c[i] = left;
          out.push_back(c);
        }
        return;
      }
      const Nat hi = m.upper(i).is_finite() ? std::min(m.upper(i).value(), left) : left;
      for (Nat v = m.lower(i); v <= hi && v + rest_lo[i + 1] <= left; ++v) {
        c[i] = v;
        self(self, i + 1, left - v);
      }
    };
    if (rest_lo[0] <= size) rec(rec, 0, size);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct OracleOptions {
  std::size_t max_nodes = 2'000'000;
};

/// Configuration graph of one population size: either every configuration or
/// only those reachable from a seed set.
class ConfigGraph {
 public:
  struct Edge {
    std::uint32_t to;
    std::uint32_t transition;  // index into the scheme's transitions
  };

  static ConfigGraph complete(const ProtocolScheme& s, Nat size, const OracleOptions& opt = {}) {
    ConfigGraph g(s, size, opt);
    for (Point& c : enumerate_configs(s.size(), size)) g.intern(std::move(c));
    g.expand_all(s, false);
    return g;
  }

  /// Nodes reachable from the seeds (backward: nodes that reach them).
  static ConfigGraph explore(const ProtocolScheme& s, std::span<const Point> seeds, const OracleOptions& opt = {},
                             bool backward = false) {
    if (seeds.empty()) return ConfigGraph(s, 0, opt);
    const Nat size = total(seeds.front());
    ConfigGraph g(s, size, opt);
    for (const Point& c : seeds) {
      require_same_dim(s.size(), c.size());
      if (total(c) != size) throw ProtocolError("seed configurations have different population sizes");
      if (size < 2) throw ProtocolError("populations have at least two agents");
      g.intern(c);
    }
    g.expand_all(s, backward);
    return g;
  }

  Nat population() const noexcept { return size_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  const std::vector<Point>& nodes() const noexcept { return nodes_; }
  const Point& node(std::size_t i) const { return nodes_[i]; }
  const std::vector<Edge>& edges(std::size_t i) const { return adj_[i]; }

  std::optional<std::size_t> find(const Point& c) const {
    auto it = index_.find(c);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  ConfigGraph(const ProtocolScheme& s, Nat size, const OracleOptions& opt) : size_(size), opt_(opt) {
    for (std::size_t k = 0; k < s.transitions().size(); ++k) {
      auto io = classify_io(s.transitions()[k]);
      if (!io || !io->noop) moving_.push_back(k);
    }
  }

  std::uint32_t intern(Point c) {
    auto [it, fresh] = index_.try_emplace(c, static_cast<std::uint32_t>(nodes_.size()));
    if (fresh) {
      if (nodes_.size() >= opt_.max_nodes)
        throw ResourceError("configuration graph too large",
                            "size=" + std::to_string(size_) + " nodes>" + std::to_string(opt_.max_nodes));
      nodes_.push_back(std::move(c));
      adj_.emplace_back();
    }
    return it->second;
  }

  void expand_all(const ProtocolScheme& s, bool backward) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      for (std::size_t k : moving_) {
        Transition t = s.transitions()[k];
        if (backward) t = Transition{t.c, t.d, t.a, t.b};
        Point next = nodes_[i];
        if (!apply_transition(next, t) || next == nodes_[i]) continue;
        const std::uint32_t j = intern(std::move(next));
        adj_[i].push_back({j, static_cast<std::uint32_t>(k)});
      }
    }
  }

  Nat size_;
  OracleOptions opt_;
  std::vector<std::size_t> moving_;
  std::vector<Point> nodes_;
  std::vector<std::vector<Edge>> adj_;
  std::unordered_map<Point, std::uint32_t, PointHash> index_;
};

inline std::vector<Point> post_star_explicit(const ProtocolScheme& s, std::span<const Point> seeds,
                                             const OracleOptions& opt = {}) {
  auto nodes = ConfigGraph::explore(s, seeds, opt).nodes();
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

inline std::vector<Point> pre_star_explicit(const ProtocolScheme& s, std::span<const Point> seeds,
                                            const OracleOptions& opt = {}) {
  auto nodes = ConfigGraph::explore(s, seeds, opt, true).nodes();
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

/// Consensus value of a configuration, or nullopt for a dissensus.
inline std::optional<int> consensus_of(const PopulationProtocol& p, std::span<const Nat> c) {
  std::optional<int> v;
  for (StateId q = 0; q < c.size(); ++q) {
    if (c[q] == 0) continue;
    if (v && *v != p.output[q]) return std::nullopt;
    v = p.output[q];
  }
  return v;
}

/// Per-node fairness facts of a forward graph.
class Stability {
 public:
  Stability(const ConfigGraph& g, const PopulationProtocol& p) : graph_(&g) {
    const std::size_t n = g.size();
    comp_.assign(n, kUnset);
    tarjan();
    // Components come out of Tarjan's algorithm successors first.
    const std::size_t m = comp_info_.size();
    for (std::size_t k = 0; k < m; ++k) {
      Info& info = comp_info_[k];
      info.all_consensus[0] = info.all_consensus[1] = true;
      for (std::uint32_t v : members_[k]) {
        auto cv = consensus_of(p, g.node(v));
        for (int b : {0, 1}) info.all_consensus[b] = info.all_consensus[b] && cv == b;
      }
      info.bottom = true;
      for (std::uint32_t v : members_[k])
        for (const auto& e : g.edges(v)) {
          const std::size_t c = comp_[e.to];
          if (c == k) continue;
          info.bottom = false;
          const Info& succ = comp_info_[c];
          for (int b : {0, 1}) {
            info.all_consensus[b] = info.all_consensus[b] && succ.stable[b];
            info.reaches_stable[b] = info.reaches_stable[b] || succ.reaches_stable[b];
          }
          info.bottom_values |= succ.bottom_values;
        }
      for (int b : {0, 1}) {
        info.stable[b] = info.all_consensus[b];
        info.reaches_stable[b] = info.reaches_stable[b] || info.stable[b];
      }
      if (info.bottom) info.bottom_values = info.stable[0] ? kZero : info.stable[1] ? kOne : kNone;
    }
  }

  /// The value every fair execution from node i stabilizes to, if unique.
  std::optional<int> stabilizes_to(std::size_t i) const {
    const unsigned v = comp_info_[comp_[i]].bottom_values;
    if (v == kZero) return 0;
    if (v == kOne) return 1;
    return std::nullopt;
  }
  /// Node i is a stable b-consensus: it and everything it reaches output b.
  bool stable(std::size_t i, int b) const { return comp_info_[comp_[i]].stable[b]; }
  bool reaches_stable(std::size_t i, int b) const { return comp_info_[comp_[i]].reaches_stable[b]; }
  bool in_bottom(std::size_t i) const { return comp_info_[comp_[i]].bottom; }
  std::size_t components() const noexcept { return comp_info_.size(); }

 private:
  static constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  static constexpr unsigned kZero = 1, kOne = 2, kNone = 4;

  struct Info {
    bool bottom = false;
    bool all_consensus[2] = {true, true};
    bool stable[2] = {false, false};
    bool reaches_stable[2] = {false, false};
    unsigned bottom_values = 0;
  };

  void tarjan() {
    const ConfigGraph& g = *graph_;
    const std::size_t n = g.size();
    std::vector<std::size_t> index(n, kUnset), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::uint32_t> stack;
    std::vector<std::pair<std::uint32_t, std::size_t>> call;  // node, next edge
    std::size_t counter = 0;
    for (std::uint32_t root = 0; root < n; ++root) {
      if (index[root] != kUnset) continue;
      call.emplace_back(root, 0);
      while (!call.empty()) {
        auto& [v, next] = call.back();
        if (next == 0 && index[v] == kUnset) {
          index[v] = low[v] = counter++;
          stack.push_back(v);
          on_stack[v] = true;
        }
        const auto& es = g.edges(v);
        if (next < es.size()) {
          const std::uint32_t w = es[next++].to;
          if (index[w] == kUnset) {
            call.emplace_back(w, 0);
          } else if (on_stack[w]) {
            low[v] = std::min(low[v], index[w]);
          }
          continue;
        }
        const std::uint32_t done = v;
        call.pop_back();
        if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
        if (low[done] == index[done]) {
          std::vector<std::uint32_t> members;
          std::uint32_t w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp_[w] = comp_info_.size();
            members.push_back(w);
          } while (w != done);
          members_.push_back(std::move(members));
          comp_info_.emplace_back();
        }
      }
    }
  }

  const ConfigGraph* graph_;
  std::vector<std::size_t> comp_;
  std::vector<Info> comp_info_;
  std::vector<std::vector<std::uint32_t>> members_;
};

/// 0 or 1 if every fair execution from c0 stabilizes to that value; nullopt
/// (NONE) otherwise.
inline std::optional<int> stabilizes_to(const PopulationProtocol& p, const Point& c0, const OracleOptions& opt = {}) {
  Configuration check(c0);
  require_same_dim(p.size(), c0.size());
  const Point seed[] = {c0};
  ConfigGraph g = ConfigGraph::explore(p.scheme, seed, opt);
  return Stability(g, p).stabilizes_to(0);
}

struct SizeVerdict {
  bool well_specified = true;
  std::optional<Point> witness;  // first initial configuration without a unique value
  std::vector<std::pair<Point, std::optional<int>>> values;
};

/// Checks every configuration of init_slice (all of one size) for a unique
/// stabilization value.
inline SizeVerdict well_specified_at_size(const PopulationProtocol& p, std::span<const Point> init_slice,
                                          const OracleOptions& opt = {}) {
  SizeVerdict out;
  if (init_slice.empty()) return out;
  ConfigGraph g = ConfigGraph::explore(p.scheme, init_slice, opt);
  Stability st(g, p);
  for (const Point& c : init_slice) {
    auto v = st.stabilizes_to(*g.find(c));
    out.values.emplace_back(c, v);
    if (!v && out.well_specified) {
      out.well_specified = false;
      out.witness = c;
    }
  }
  return out;
}

/// Initial configurations of a simple-input protocol with `size` agents.
inline std::vector<Point> initial_slice(const PopulationProtocol& p, Nat size) {
  return slice(initial_constraint(p), size);
}

struct SimulationSummary {
  std::size_t steps = 0;  // interactions actually taken
  Point last;
  bool frozen = false;  // no transition enabled at the end
  std::optional<std::size_t> stable_entered;  // first step at a stable consensus
  std::optional<int> value;                    // its consensus value
  bool graph_known = true;  // false if the graph was too large to classify nodes
};

/// Uniformly random scheduler over enabled, configuration-changing
/// transitions; deterministic per seed.
inline SimulationSummary simulate_fair(const PopulationProtocol& p, const Point& c0, std::size_t max_steps,
                                       std::uint64_t seed, const OracleOptions& opt = {}) {
  Configuration check(c0);
  require_same_dim(p.size(), c0.size());
  SimulationSummary out;
  std::optional<ConfigGraph> graph;
  std::optional<Stability> st;
  try {
    const Point s[] = {c0};
    graph.emplace(ConfigGraph::explore(p.scheme, s, opt));
    st.emplace(*graph, p);
  } catch (const ResourceError&) {
    out.graph_known = false;
  }
  auto note = [&](const Point& c, std::size_t step) {
    if (!st || out.stable_entered) return;
    const std::size_t i = *graph->find(c);
    for (int b : {0, 1})
      if (st->stable(i, b)) {
        out.stable_entered = step;
        out.value = b;
      }
  };

  std::vector<Transition> moving;
  for (const Transition& t : p.scheme.transitions()) {
    auto io = classify_io(t);
    if (!io || !io->noop) moving.push_back(t);
  }
  std::mt19937_64 rng(seed);
  Point c = c0;
  note(c, 0);
  std::vector<std::size_t> enabled;
  for (std::size_t step = 0; step < max_steps; ++step) {
    enabled.clear();
    for (std::size_t k = 0; k < moving.size(); ++k) {
      Point probe = c;
      if (apply_transition(probe, moving[k]) && probe != c) enabled.push_back(k);
    }
    if (enabled.empty()) {
      out.frozen = true;
      break;
    }
    std::uniform_int_distribution<std::size_t> pick(0, enabled.size() - 1);
    apply_transition(c, moving[enabled[pick(rng)]]);
    ++out.steps;
    note(c, out.steps);
  }
  if (!out.frozen) {
    bool any = false;
    for (const Transition& t : moving) {
      Point probe = c;
      any = any || (apply_transition(probe, t) && probe != c);
    }
    out.frozen = !any;
  }
  out.last = std::move(c);
  return out;
}

enum class Direction { Post, Pre };

struct Agreement {
  Nat size = 0;
  std::size_t symbolic = 0;        // members of the symbolic closure at this size
  std::size_t explicit_count = 0;  // members of the explicit closure
  std::vector<Point> missing;      // explicit but not symbolic
  std::vector<Point> extra;        // symbolic but not explicit
  bool agrees() const noexcept { return missing.empty() && extra.empty(); }
};

/// Compares the size-N slice of a symbolic closure with explicit BFS from the
/// size-N slice of its seed. `closure` is the symbolic result for g.
inline Agreement compare_slices(const ProtocolScheme& s, const CountingConstraint& g, const CountingConstraint& closure,
                                Direction dir, Nat size, const OracleOptions& opt = {}) {
  Agreement a;
  a.size = size;
  const auto seeds = slice(g, size);
  const auto want = seeds.empty() ? std::vector<Point>{}
                                  : (dir == Direction::Post ? post_star_explicit(s, seeds, opt)
                                                            : pre_star_explicit(s, seeds, opt));
  const auto got = slice(closure, size);
  a.symbolic = got.size();
  a.explicit_count = want.size();
  std::set_difference(want.begin(), want.end(), got.begin(), got.end(), std::back_inserter(a.missing));
  std::set_difference(got.begin(), got.end(), want.begin(), want.end(), std::back_inserter(a.extra));
  return a;
}

inline Agreement compare_symbolic(const ProtocolScheme& s, const CountingConstraint& g, Direction dir, Nat size,
                                  const ReachOptions& ropt = {}, const OracleOptions& opt = {}) {
  const auto closure = dir == Direction::Post ? post_star(g, s, ropt).closure : pre_star(g, s, ropt).closure;
  return compare_slices(s, g, closure, dir, size, opt);
}

/// Oracle check of a symbolic ill-specification witness, over the protocol the
/// witness lives in. cond1: w is reachable from a configuration of init with
/// the same size and reaches no stable consensus. cond2: w is initial and
/// reaches stable consensus of both values.
inline bool confirm_witness(const PopulationProtocol& p, const CountingConstraint& init, const Point& w, bool condition1,
                            const OracleOptions& opt = {}) {
  const Nat size = total(w);
  if (size < 2) return false;
  if (condition1) {
    const auto starts = slice(init, size);
    if (starts.empty()) return false;
    const auto reach = post_star_explicit(p.scheme, starts, opt);
    if (!std::binary_search(reach.begin(), reach.end(), w)) return false;
  } else if (!init.contains(w)) {
    return false;
  }
  const Point seed[] = {w};
  ConfigGraph g = ConfigGraph::explore(p.scheme, seed, opt);
  Stability st(g, p);
  const bool r0 = st.reaches_stable(0, 0), r1 = st.reaches_stable(0, 1);
  return condition1 ? (!r0 && !r1) : (r0 && r1);
}

}  // namespace iopp

#endif  // IOPP_ORACLE_HPP
