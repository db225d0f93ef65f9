#ifndef IOPP_TESTS_SUPPORT_HPP
#define IOPP_TESTS_SUPPORT_HPP

// Shared test helpers: seeded random instances and a brute-force box model of
// counting sets that does not use the constraint algebra.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "iopp/iopp.hpp"

namespace iopp::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(gen_); }
  Nat between(Nat lo, Nat hi) { return std::uniform_int_distribution<Nat>(lo, hi)(gen_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(gen_); }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

/// A minterm with constants <= c; some variables unbounded above, some
/// minterms possibly crossed (empty).
inline Minterm random_minterm(Rng& r, std::size_t dim, Nat c, bool allow_empty = true) {
  Minterm m(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const Nat lo = r.between(0, c);
    m.set_lower(i, lo);
    if (r.chance(0.4)) continue;
    Nat hi = r.between(allow_empty && r.chance(0.1) ? 0 : lo, c);
    m.set_upper(i, Bound(hi));
  }
  return m;
}

inline CountingConstraint random_constraint(Rng& r, std::size_t dim, Nat c, std::size_t max_terms = 3) {
  std::vector<Minterm> ms;
  const std::size_t k = r.below(max_terms + 1);
  for (std::size_t i = 0; i < k; ++i) ms.push_back(random_minterm(r, dim, c));
  return CountingConstraint(dim, std::move(ms));
}

/// Bitmap of a predicate over the box [0..side-1]^dim.
using BoxSet = std::vector<bool>;

inline std::vector<Point> box_points(std::size_t dim, Nat side) {
  std::vector<Point> out;
  Point p(dim, 0);
  while (true) {
    out.push_back(p);
    std::size_t i = 0;
    while (i < dim && ++p[i] == side) p[i++] = 0;
    if (i == dim) break;
  }
  return out;
}

/// Membership straight from the bounds, independent of the library's helpers.
inline bool raw_member(const Minterm& m, const Point& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < m.lower(i)) return false;
    if (m.upper(i).is_finite() && v[i] > m.upper(i).value()) return false;
  }
  return true;
}

inline bool raw_member(const CountingConstraint& g, const Point& v) {
  for (const Minterm& m : g)
    if (raw_member(m, v)) return true;
  return false;
}

inline BoxSet box(const CountingConstraint& g, const std::vector<Point>& pts) {
  BoxSet out;
  out.reserve(pts.size());
  for (const Point& p : pts) out.push_back(raw_member(g, p));
  return out;
}

/// A random IO scheme: each transition is (s, o) -> (d, o) written in a random
/// orientation. Self-observation only when allowed.
inline ProtocolScheme random_scheme(Rng& r, std::size_t n, std::size_t max_transitions, bool self_observation) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("q" + std::to_string(i));
  ProtocolScheme s(names);
  const std::size_t k = r.below(max_transitions + 1);
  for (std::size_t j = 0; j < k; ++j) {
    StateId src = r.below(n), obs = r.below(n), dst = r.below(n);
    if (!self_observation && n > 1)
      while (obs == src) obs = r.below(n);
    if (n > 1 && dst == src && r.chance(0.7)) dst = (src + 1 + r.below(n - 1)) % n;
    Transition t{src, obs, dst, obs};
    if (r.chance(0.5)) t = Transition{obs, src, obs, dst};
    if (r.chance(0.5)) std::swap(t.c, t.d);
    s.add_transition(t);
  }
  return s;
}

/// A random protocol over a random scheme with 1 or 2 input states.
inline PopulationProtocol random_protocol(Rng& r, std::size_t n, std::size_t max_transitions, bool self_observation) {
  PopulationProtocol p;
  p.name = "random";
  p.scheme = random_scheme(r, n, max_transitions, self_observation);
  p.output.resize(n);
  for (int& o : p.output) o = static_cast<int>(r.below(2));
  const std::size_t inputs = n >= 2 && r.chance(0.5) ? 2 : 1;
  for (std::size_t i = 0; i < inputs; ++i) p.inputs.push_back({"x" + std::to_string(i), i});
  return p;
}

/// A protocol that surely contains a self-observation transition.
inline PopulationProtocol random_self_observing(Rng& r, std::size_t n, std::size_t max_transitions) {
  while (true) {
    PopulationProtocol p = random_protocol(r, n, max_transitions, true);
    for (const IOTransition& t : p.scheme.io_transitions())
      if (t.self_observing()) return p;
  }
}

/// The threshold protocol for x >= k over states 1..k.
inline PopulationProtocol threshold_protocol(Nat k) {
  PopulationProtocol p;
  p.name = "threshold" + std::to_string(k);
  for (Nat i = 1; i <= k; ++i) p.scheme.add_state(std::to_string(i));
  for (StateId i = 0; i + 1 < k; ++i) p.scheme.add_transition(Transition{i, i, i, i + 1});
  for (StateId i = 0; i + 1 < k; ++i) p.scheme.add_transition(Transition{i, k - 1, k - 1, k - 1});
  p.output.assign(k, 0);
  p.output[k - 1] = 1;
  p.inputs.push_back({"x", 0});
  return p;
}

/// Sorted size-N configurations satisfying pred.
inline std::vector<Point> filter_configs(std::size_t n, Nat size, const std::function<bool(const Point&)>& pred) {
  std::vector<Point> out;
  for (Point& c : enumerate_configs(n, size))
    if (pred(c)) out.push_back(std::move(c));
  return out;
}

}  // namespace iopp::testing

#endif  // IOPP_TESTS_SUPPORT_HPP
