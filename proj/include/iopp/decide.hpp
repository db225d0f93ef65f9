#ifndef IOPP_DECIDE_HPP
#define IOPP_DECIDE_HPP

// Well-specification and correctness of IO population protocols.
//
// A protocol is well-specified iff
//   (1) post*(I) ⊆ pre*(ST_0 ∪ ST_1), and
//   (2) pre*(ST_0) ∩ pre*(ST_1) ∩ I = ∅,
// where ST_b, the stable b-consensus configurations, is the complement of
// pre* of the complement of the b-consensus set. Every set is a counting
// constraint over the normalized protocol, so all checks are exact.

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iopp/constraint.hpp"
#include "iopp/protocol.hpp"
#include "iopp/reach.hpp"

namespace iopp {

enum class VerdictKind { WellSpecified, IllSpecified, Correct, Incorrect };

enum class Violation { None, Condition1, Condition2, WrongValue0, WrongValue1 };

/// Diagnostics of one closure computation.
struct ClosureStats {
  std::string label;
  std::size_t iterations = 0;
  std::size_t peak_minterms = 0;
  std::size_t minterms = 0;
  Nat l_norm = 0;
  Nat u_norm = 0;
};

struct Verdict {
  VerdictKind kind = VerdictKind::WellSpecified;
  Violation violated = Violation::None;
  std::optional<Point> witness;           // normalized coordinates
  std::optional<Point> original_witness;  // primed copies folded back, helpers dropped
  Nat helper_agents = 0;                  // agents in r / r' in the witness
  std::optional<Point> input_witness;     // per input variable, for correctness
  std::vector<ClosureStats> stats;

  bool positive() const noexcept { return kind == VerdictKind::WellSpecified || kind == VerdictKind::Correct; }
};

struct DecisionOptions {
  ReachOptions reach;
  /// For an initial set with bounded population size, work inside the finite
  /// set post*(I): discard minterms above the size bound and clip every
  /// backward closure and complement to post*(I). All paths from post*(I) stay
  /// in it, so the verdict is unaffected.
  bool bound_population = true;
};

/// The pieces of the decision procedure for one protocol and initial set,
/// computed on demand and cached.
class Decider {
 public:
  /// init ranges over the original states or, if its dimension says so, over
  /// the normalized states. Without init, the simple input mapping is used.
  explicit Decider(const PopulationProtocol& p, std::optional<CountingConstraint> init = std::nullopt,
                   DecisionOptions opt = {})
      : norm_(normalize(p)), opt_(opt) {
    if (!init) {
      init_ = norm_.initial;
    } else if (init->dim() == norm_.original_states) {
      init_ = norm_.lift(*init);
    } else if (init->dim() == norm_.protocol.size()) {
      init_ = canonicalize(*init);
    } else {
      throw DimensionError("initial set has " + std::to_string(init->dim()) + " variables; protocol has " +
                           std::to_string(norm_.original_states) + " (normalized " + std::to_string(norm_.protocol.size()) +
                           ")");
    }
    if (opt_.bound_population && !init_.minterms().empty()) {
      Nat bound = 0;
      bool finite = true;
      for (const Minterm& m : init_)
        for (Bound u : m.uppers()) finite = finite && u.is_finite();
      if (finite) {
        for (const Minterm& m : init_) bound = std::max(bound, u_norm(m));
        opt_.reach.max_total = bound;
        opt_.reach.universe = reachable();
      }
    }
  }

  const Normalized& normalized() const noexcept { return norm_; }
  const PopulationProtocol& protocol() const noexcept { return norm_.protocol; }
  const CountingConstraint& initial() const noexcept { return init_; }
  const std::vector<ClosureStats>& stats() const noexcept { return stats_; }
  std::optional<Nat> population_bound() const noexcept { return opt_.reach.max_total; }

  /// Everything the computation ranges over: post*(I) when bounded, else all
  /// configurations.
  CountingConstraint universe() const {
    return opt_.reach.universe ? *opt_.reach.universe : CountingConstraint::full(protocol().size());
  }

  /// Stable b-consensus configurations (within the universe).
  const CountingConstraint& stable(int b) {
    auto& slot = stable_[b];
    if (!slot) {
      const std::size_t n = protocol().size();
      if (!has_output(protocol(), b)) {
        slot = CountingConstraint(n);
      } else {
        const auto all = universe();
        auto bad = subtract(all, consensus_constraint(protocol(), b));
        slot = subtract(all, run(pre_star(bad, protocol().scheme, opt_.reach), "pre*(!C_" + std::to_string(b) + ")"));
      }
    }
    return *slot;
  }

  const CountingConstraint& can_stabilize(int b) {
    auto& slot = pre_stable_[b];
    if (!slot) slot = run(pre_star(stable(b), protocol().scheme, opt_.reach), "pre*(ST_" + std::to_string(b) + ")");
    return *slot;
  }

  const CountingConstraint& reachable() {
    if (!post_) post_ = run(post_star(init_, protocol().scheme, opt_.reach), "post*(I)");
    return *post_;
  }

  /// Initial configurations from which every fair execution stabilizes to b.
  CountingConstraint stabilizes(int b) {
    auto escape = run(pre_star(subtract(universe(), can_stabilize(b)), protocol().scheme, opt_.reach),
                      "pre*(!pre*(ST_" + std::to_string(b) + "))");
    return subtract(init_, escape);
  }

  Verdict well_specified() {
    Verdict v;
    auto undecided = subtract(subtract(reachable(), can_stabilize(0)), can_stabilize(1));
    if (!undecided.minterms().empty()) {
      v.kind = VerdictKind::IllSpecified;
      v.violated = Violation::Condition1;
      set_witness(v, undecided);
    } else {
      auto ambiguous = intersect(intersect(init_, can_stabilize(0)), can_stabilize(1));
      if (!ambiguous.minterms().empty()) {
        v.kind = VerdictKind::IllSpecified;
        v.violated = Violation::Condition2;
        set_witness(v, ambiguous);
      }
    }
    v.stats = stats_;
    return v;
  }

  void set_witness(Verdict& v, const CountingConstraint& violating) const {
    auto lex = [](const Minterm& a, const Minterm& b) {
      return std::ranges::lexicographical_compare(a.lowers(), b.lowers());
    };
    const auto lo = std::ranges::min_element(violating.minterms(), lex)->lowers();
    Point w(lo.begin(), lo.end());
    v.original_witness = norm_.project(w);
    v.helper_agents = norm_.helper_agents(w);
    v.witness = std::move(w);
  }

 private:
  CountingConstraint run(ReachResult r, std::string label) {
    stats_.push_back({std::move(label), r.iterations, r.peak_minterms, r.closure.size(), r.l_norm, r.u_norm});
    return std::move(r.closure);
  }

  Normalized norm_;
  DecisionOptions opt_;
  CountingConstraint init_;
  std::optional<CountingConstraint> stable_[2], pre_stable_[2], post_;
  std::vector<ClosureStats> stats_;
};

inline CountingConstraint stable_set(const PopulationProtocol& normalized_protocol, int b, const ReachOptions& opt = {}) {
  if (!normalized_protocol.scheme.is_normal_form()) throw ProtocolError("stable_set expects a protocol in normal form");
  DecisionOptions d;
  d.reach = opt;
  Decider dec(normalized_protocol, CountingConstraint::full(normalized_protocol.size()), d);
  return dec.stable(b);
}

inline Verdict well_specified(const PopulationProtocol& p, std::optional<CountingConstraint> init = std::nullopt,
                              const DecisionOptions& opt = {}) {
  Decider dec(p, std::move(init), opt);
  return dec.well_specified();
}

struct Partition {
  CountingConstraint w0, w1;  // over the normalized states
};

inline Partition stabilization_partition(const PopulationProtocol& p, std::optional<CountingConstraint> init = std::nullopt,
                                         const DecisionOptions& opt = {}) {
  Decider dec(p, std::move(init), opt);
  return {dec.stabilizes(0), dec.stabilizes(1)};
}

/// Whether p computes pred (a constraint over p's input variables, in
/// declaration order).
inline Verdict check_correct(const PopulationProtocol& p, const CountingConstraint& pred, const DecisionOptions& opt = {}) {
  if (pred.dim() != p.inputs.size())
    throw DimensionError("predicate ranges over " + std::to_string(pred.dim()) + " variables; protocol has " +
                         std::to_string(p.inputs.size()) + " inputs");
  Decider dec(p, std::nullopt, opt);
  const Normalized& norm = dec.normalized();
  const CountingConstraint expect1 = norm.lift(predicate_to_state_constraint(p, pred));
  const CountingConstraint expect0 = norm.lift(predicate_to_state_constraint(p, complement(pred)));

  Verdict v;
  v.kind = VerdictKind::Correct;
  auto w1 = dec.stabilizes(1);
  auto miss1 = subtract(expect1, w1);
  if (!miss1.minterms().empty()) {
    v.kind = VerdictKind::Incorrect;
    v.violated = Violation::WrongValue1;
    dec.set_witness(v, miss1);
  } else {
    auto w0 = dec.stabilizes(0);
    auto miss0 = subtract(expect0, w0);
    if (!miss0.minterms().empty()) {
      v.kind = VerdictKind::Incorrect;
      v.violated = Violation::WrongValue0;
      dec.set_witness(v, miss0);
    }
  }
  if (v.original_witness) {
    Point in;
    for (const InputBinding& b : p.inputs) in.push_back((*v.original_witness)[b.state]);
    v.input_witness = std::move(in);
  }
  v.stats = dec.stats();
  return v;
}

}  // namespace iopp

#endif  // IOPP_DECIDE_HPP
