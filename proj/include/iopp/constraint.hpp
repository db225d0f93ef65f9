#ifndef IOPP_CONSTRAINT_HPP
#define IOPP_CONSTRAINT_HPP

// Counting constraints in counting normal form (CoNF): finite disjunctions of
// minterms, each minterm fixing one lower and one upper bound per variable.
// All operations return canonical constraints (no empty minterm, no minterm
// subsumed by another) unless stated otherwise.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "iopp/error.hpp"

namespace iopp {

using Nat = std::uint64_t;
using Point = std::vector<Nat>;

inline Nat checked_add(Nat a, Nat b) {
  if (a > std::numeric_limits<Nat>::max() - 1 - b) throw OverflowError("natural overflow in bound arithmetic");
  return a + b;
}

inline Nat checked_mul(Nat a, Nat b) {
  if (a != 0 && b > (std::numeric_limits<Nat>::max() - 1) / a)
    throw OverflowError("natural overflow in bound arithmetic");
  return a * b;
}

/// Upper bound of a variable: a natural number or infinity.
class Bound {
 public:
  constexpr Bound() noexcept = default;
  constexpr Bound(Nat value) : raw_(value) {  // NOLINT(google-explicit-constructor)
    if (value == kInfinity) throw OverflowError("finite bound out of range");
  }

  static constexpr Bound infinity() noexcept {
    Bound b;
    b.raw_ = kInfinity;
    return b;
  }

  constexpr bool is_infinite() const noexcept { return raw_ == kInfinity; }
  constexpr bool is_finite() const noexcept { return raw_ != kInfinity; }
  constexpr Nat value() const noexcept { return raw_; }

  /// v <= *this, with every natural below infinity.
  constexpr bool admits(Nat v) const noexcept { return v <= raw_; }

  /// Shift up by k; infinity absorbs.
  Bound plus(Nat k) const { return is_infinite() ? *this : Bound(checked_add(raw_, k)); }

  friend constexpr auto operator<=>(Bound, Bound) noexcept = default;

 private:
  static constexpr Nat kInfinity = std::numeric_limits<Nat>::max();
  Nat raw_ = 0;
};

/// One conjunction l_x <= x <= u_x over every variable x.
class Minterm {
 public:
  Minterm() = default;

  /// The full space N^dim.
  explicit Minterm(std::size_t dim) : lo_(dim, 0), hi_(dim, Bound::infinity()) {}

  Minterm(std::vector<Nat> lower, std::vector<Bound> upper) : lo_(std::move(lower)), hi_(std::move(upper)) {
    if (lo_.size() != hi_.size()) throw DimensionError("minterm bound vectors differ in length");
  }

  static Minterm point(std::span<const Nat> p) {
    Minterm m(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) m.set_exact(i, p[i]);
    return m;
  }

  static Minterm upward(std::span<const Nat> p) {
    Minterm m(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) m.lo_[i] = p[i];
    return m;
  }

  std::size_t dim() const noexcept { return lo_.size(); }
  Nat lower(std::size_t i) const { return lo_[i]; }
  Bound upper(std::size_t i) const { return hi_[i]; }
  std::span<const Nat> lowers() const noexcept { return lo_; }
  std::span<const Bound> uppers() const noexcept { return hi_; }

  Minterm& set_lower(std::size_t i, Nat l) {
    lo_[i] = l;
    return *this;
  }
  Minterm& set_upper(std::size_t i, Bound u) {
    hi_[i] = u;
    return *this;
  }
  Minterm& set_exact(std::size_t i, Nat v) {
    lo_[i] = v;
    hi_[i] = Bound(v);
    return *this;
  }

  friend auto operator<=>(const Minterm&, const Minterm&) = default;

 private:
  std::vector<Nat> lo_;
  std::vector<Bound> hi_;
};

inline void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) throw DimensionError("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

inline bool is_empty(const Minterm& m) noexcept {
  for (std::size_t i = 0; i < m.dim(); ++i)
    if (!m.upper(i).admits(m.lower(i))) return true;
  return false;
}

inline bool contains(const Minterm& m, std::span<const Nat> v) {
  require_same_dim(m.dim(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] < m.lower(i) || !m.upper(i).admits(v[i])) return false;
  return true;
}

/// ⟦big⟧ ⊇ ⟦small⟧. Decided componentwise for nonempty minterms.
inline bool subsumes(const Minterm& big, const Minterm& small) {
  require_same_dim(big.dim(), small.dim());
  if (is_empty(small)) return true;
  for (std::size_t i = 0; i < big.dim(); ++i)
    if (big.lower(i) > small.lower(i) || big.upper(i) < small.upper(i)) return false;
  return true;
}

/// Componentwise interval intersection; nullopt when empty.
inline std::optional<Minterm> meet(const Minterm& a, const Minterm& b) {
  require_same_dim(a.dim(), b.dim());
  Minterm r(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    Nat lo = std::max(a.lower(i), b.lower(i));
    Bound hi = std::min(a.upper(i), b.upper(i));
    if (!hi.admits(lo)) return std::nullopt;
    r.set_lower(i, lo).set_upper(i, hi);
  }
  return r;
}

inline Nat l_norm(const Minterm& m) {
  Nat s = 0;
  for (Nat l : m.lowers()) s = checked_add(s, l);
  return s;
}

inline Nat u_norm(const Minterm& m) {
  Nat s = 0;
  for (Bound u : m.uppers())
    if (u.is_finite()) s = checked_add(s, u.value());
  return s;
}

/// Pieces whose union is a \ b. Pieces may overlap; each is maximal within a.
inline std::vector<Minterm> minterm_difference(const Minterm& a, const Minterm& b) {
  std::vector<Minterm> out;
  if (!meet(a, b)) {
    out.push_back(a);
    return out;
  }
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (b.lower(i) > a.lower(i)) {
      Minterm piece = a;
      piece.set_upper(i, std::min(a.upper(i), Bound(b.lower(i) - 1)));
      out.push_back(std::move(piece));
    }
    if (b.upper(i).is_finite() && b.upper(i) < a.upper(i)) {
      Minterm piece = a;
      piece.set_lower(i, std::max(a.lower(i), checked_add(b.upper(i).value(), 1)));
      out.push_back(std::move(piece));
    }
  }
  return out;
}

/// Incrementally maintained antichain of minterms under subsumption.
/// Inserting a minterm drops it if a stored one subsumes it and evicts stored
/// minterms it subsumes. Slots of evicted entries stay addressable (dead).
class Antichain {
 public:
  explicit Antichain(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return live_; }
  std::size_t slots() const noexcept { return entries_.size(); }
  bool alive(std::size_t slot) const { return entries_[slot].alive; }
  const Minterm& at(std::size_t slot) const { return entries_[slot].m; }

  /// Returns the slot of the inserted minterm, or nullopt if it was empty or
  /// already subsumed.
  std::optional<std::size_t> insert(Minterm m) {
    require_same_dim(dim_, m.dim());
    if (is_empty(m)) return std::nullopt;
    Entry e = make_entry(std::move(m));
    evict_.clear();
    for (std::size_t s = 0; s < entries_.size(); ++s) {
      const Entry& o = entries_[s];
      if (!o.alive) continue;
      if (may_subsume(o, e) && subsumes_raw(o.m, e.m)) return std::nullopt;
      if (may_subsume(e, o) && subsumes_raw(e.m, o.m)) evict_.push_back(s);
    }
    for (std::size_t s : evict_) {
      entries_[s].alive = false;
      --live_;
    }
    entries_.push_back(std::move(e));
    ++live_;
    return entries_.size() - 1;
  }

  bool covers(const Minterm& m) const {
    Entry e = make_entry(m);
    for (const Entry& o : entries_)
      if (o.alive && may_subsume(o, e) && subsumes_raw(o.m, e.m)) return true;
    return false;
  }

  /// Live minterms in lexicographic order.
  std::vector<Minterm> sorted() const {
    std::vector<Minterm> out;
    out.reserve(live_);
    for (const Entry& e : entries_)
      if (e.alive) out.push_back(e.m);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  struct Entry {
    Minterm m;
    Nat sum_lo = 0;
    std::uint64_t inf_mask = 0;   // folded positions with infinite upper bound
    std::uint64_t supp_mask = 0;  // folded positions with nonzero lower bound
    bool alive = true;
  };

  static Entry make_entry(Minterm m) {
    Entry e;
    for (std::size_t i = 0; i < m.dim(); ++i) {
      e.sum_lo = checked_add(e.sum_lo, m.lower(i));
      if (m.upper(i).is_infinite()) e.inf_mask |= std::uint64_t{1} << (i % 64);
      if (m.lower(i) != 0) e.supp_mask |= std::uint64_t{1} << (i % 64);
    }
    e.m = std::move(m);
    return e;
  }

  // Necessary conditions for big ⊇ small: lower sums, infinite uppers, supports.
  static bool may_subsume(const Entry& big, const Entry& small) noexcept {
    return big.sum_lo <= small.sum_lo && (small.inf_mask & ~big.inf_mask) == 0 &&
           (big.supp_mask & ~small.supp_mask) == 0;
  }

  static bool subsumes_raw(const Minterm& big, const Minterm& small) noexcept {
    for (std::size_t i = 0; i < big.dim(); ++i)
      if (big.lower(i) > small.lower(i) || big.upper(i) < small.upper(i)) return false;
    return true;
  }

  std::size_t dim_;
  std::vector<Entry> entries_;
  std::size_t live_ = 0;
  std::vector<std::size_t> evict_;
};

/// A finite set of minterms denoting the union of their solution sets.
class CountingConstraint {
 public:
  CountingConstraint() = default;

  /// The empty set over dim variables.
  explicit CountingConstraint(std::size_t dim) : dim_(dim) {}

  /// Raw construction; not canonicalized.
  CountingConstraint(std::size_t dim, std::vector<Minterm> minterms) : dim_(dim), terms_(std::move(minterms)) {
    for (const Minterm& m : terms_) require_same_dim(dim_, m.dim());
  }

  static CountingConstraint full(std::size_t dim) { return CountingConstraint(dim, {Minterm(dim)}); }
  static CountingConstraint of(const Minterm& m) { return CountingConstraint(m.dim(), {m}); }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return terms_.size(); }
  const std::vector<Minterm>& minterms() const noexcept { return terms_; }
  auto begin() const noexcept { return terms_.begin(); }
  auto end() const noexcept { return terms_.end(); }

  bool contains(std::span<const Nat> v) const {
    require_same_dim(dim_, v.size());
    return std::any_of(terms_.begin(), terms_.end(), [&](const Minterm& m) { return iopp::contains(m, v); });
  }

  /// Syntactic equality; use equivalent() for semantic comparison.
  friend bool operator==(const CountingConstraint&, const CountingConstraint&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Minterm> terms_;
};

inline CountingConstraint to_constraint(const Antichain& a) { return CountingConstraint(a.dim(), a.sorted()); }

/// Drops empty and subsumed minterms and duplicates; sorts the rest.
inline CountingConstraint canonicalize(const CountingConstraint& g) {
  // Sorting by (sum of lowers, lowers asc, uppers desc) puts every subsumer
  // before the minterms it subsumes, so one forward pass suffices.
  struct Keyed {
    Nat sum;
    const Minterm* m;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(g.size());
  for (const Minterm& m : g)
    if (!is_empty(m)) keyed.push_back({l_norm(m), &m});
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    if (a.sum != b.sum) return a.sum < b.sum;
    auto al = a.m->lowers(), bl = b.m->lowers();
    if (!std::equal(al.begin(), al.end(), bl.begin())) return std::lexicographical_compare(al.begin(), al.end(), bl.begin(), bl.end());
    auto au = a.m->uppers(), bu = b.m->uppers();
    return std::lexicographical_compare(bu.begin(), bu.end(), au.begin(), au.end());
  });
  Antichain kept(g.dim());
  for (const Keyed& k : keyed)
    if (!kept.covers(*k.m)) kept.insert(*k.m);
  return to_constraint(kept);
}

inline bool is_empty(const CountingConstraint& g) {
  return std::all_of(g.begin(), g.end(), [](const Minterm& m) { return is_empty(m); });
}

inline CountingConstraint unite(const CountingConstraint& a, const CountingConstraint& b) {
  require_same_dim(a.dim(), b.dim());
  std::vector<Minterm> all(a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  return canonicalize(CountingConstraint(a.dim(), std::move(all)));
}

inline CountingConstraint intersect(const CountingConstraint& a, const CountingConstraint& b) {
  require_same_dim(a.dim(), b.dim());
  Antichain out(a.dim());
  for (const Minterm& x : a)
    for (const Minterm& y : b)
      if (auto m = meet(x, y)) out.insert(std::move(*m));
  return to_constraint(out);
}

/// ⟦a⟧ \ ⟦b⟧, subtracting one minterm of b at a time with eager pruning.
inline CountingConstraint subtract(const CountingConstraint& a, const CountingConstraint& b) {
  require_same_dim(a.dim(), b.dim());
  std::vector<Minterm> current = canonicalize(a).minterms();
  for (const Minterm& cut : b) {
    if (current.empty()) break;
    if (is_empty(cut)) continue;
    Antichain next(a.dim());
    for (const Minterm& piece : current)
      for (Minterm& rest : minterm_difference(piece, cut)) next.insert(std::move(rest));
    current = next.sorted();
  }
  return CountingConstraint(a.dim(), std::move(current));
}

inline CountingConstraint complement(const CountingConstraint& g) { return subtract(CountingConstraint::full(g.dim()), g); }

namespace detail {

// Whether every point of a lies in b[from..]; on failure stores a point of a
// outside b. Minterms b[j] with j < from are known to be disjoint from a.
inline bool covered(const Minterm& a, const CountingConstraint& b, std::size_t from, Point* witness) {
  const auto& bs = b.minterms();
  for (std::size_t j = from; j < bs.size(); ++j) {
    if (!meet(a, bs[j])) continue;
    if (subsumes(bs[j], a)) return true;
    for (const Minterm& piece : minterm_difference(a, bs[j]))
      if (!covered(piece, b, j + 1, witness)) return false;
    return true;
  }
  if (witness) witness->assign(a.lowers().begin(), a.lowers().end());
  return false;
}

}  // namespace detail

/// A point of ⟦a⟧ \ ⟦b⟧, if any.
inline std::optional<Point> find_outside(const CountingConstraint& a, const CountingConstraint& b) {
  require_same_dim(a.dim(), b.dim());
  Point w;
  for (const Minterm& m : a)
    if (!is_empty(m) && !detail::covered(m, b, 0, &w)) return w;
  return std::nullopt;
}

inline bool is_subset(const CountingConstraint& a, const CountingConstraint& b) { return !find_outside(a, b); }

inline bool equivalent(const CountingConstraint& a, const CountingConstraint& b) {
  return is_subset(a, b) && is_subset(b, a);
}

inline Nat l_norm(const CountingConstraint& g) {
  Nat r = 0;
  for (const Minterm& m : g) r = std::max(r, l_norm(m));
  return r;
}

inline Nat u_norm(const CountingConstraint& g) {
  Nat r = 0;
  for (const Minterm& m : g) r = std::max(r, u_norm(m));
  return r;
}

inline CountingConstraint from_finite(std::size_t dim, std::span<const Point> points) {
  std::vector<Minterm> ms;
  for (const Point& p : points) {
    require_same_dim(dim, p.size());
    ms.push_back(Minterm::point(p));
  }
  return canonicalize(CountingConstraint(dim, std::move(ms)));
}

inline CountingConstraint from_upward_closed(std::size_t dim, std::span<const Point> minimal_points) {
  std::vector<Minterm> ms;
  for (const Point& p : minimal_points) {
    require_same_dim(dim, p.size());
    ms.push_back(Minterm::upward(p));
  }
  return canonicalize(CountingConstraint(dim, std::move(ms)));
}

/// Re-indexes g into a space of new_dim variables: old variable i becomes
/// variable target[i]; variables not targeted take their bounds from
/// background.
inline CountingConstraint remap(const CountingConstraint& g, std::span<const std::size_t> target, const Minterm& background) {
  require_same_dim(g.dim(), target.size());
  std::vector<Minterm> out;
  out.reserve(g.size());
  for (const Minterm& m : g) {
    Minterm r = background;
    for (std::size_t i = 0; i < target.size(); ++i) r.set_lower(target[i], m.lower(i)).set_upper(target[i], m.upper(i));
    out.push_back(std::move(r));
  }
  return canonicalize(CountingConstraint(background.dim(), std::move(out)));
}

}  // namespace iopp

#endif  // IOPP_CONSTRAINT_HPP
