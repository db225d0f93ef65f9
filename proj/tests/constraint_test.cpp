#include <gtest/gtest.h>

#include "support.hpp"

namespace iopp {
namespace {

using testing::box;
using testing::box_points;
using testing::raw_member;
using testing::Rng;

constexpr Bound kInf = Bound::infinity();

Minterm mt(std::vector<Nat> lo, std::vector<Bound> hi) { return Minterm(std::move(lo), std::move(hi)); }

CountingConstraint cc(std::size_t dim, std::vector<Minterm> ms) { return CountingConstraint(dim, std::move(ms)); }

TEST(Minterm, Emptiness) {
  EXPECT_FALSE(is_empty(mt({0}, {kInf})));
  EXPECT_TRUE(is_empty(mt({2}, {1})));
  EXPECT_FALSE(is_empty(mt({1, 2}, {3, 2})));
}

TEST(Minterm, Membership) {
  const Minterm row2 = mt({1, 2, 1}, {1, 2, kInf});
  const Minterm row1 = mt({0, 2, 1}, {0, kInf, 1});
  EXPECT_TRUE(contains(row2, Point{1, 2, 3}));
  EXPECT_FALSE(contains(row1, Point{1, 2, 1}));
  EXPECT_TRUE(contains(Minterm(2), Point{7, 0}));
  EXPECT_THROW(contains(row1, Point{1, 2}), DimensionError);
}

TEST(Minterm, Subsumption) {
  EXPECT_TRUE(subsumes(mt({1, 0}, {1, kInf}), mt({1, 2}, {1, 5})));
  EXPECT_FALSE(subsumes(mt({2}, {kInf}), mt({1}, {kInf})));
  const Minterm m = mt({1, 3}, {4, kInf});
  EXPECT_TRUE(subsumes(m, m));
  EXPECT_TRUE(subsumes(mt({5}, {5}), mt({3}, {1})));
}

TEST(Minterm, Norms) {
  EXPECT_EQ(l_norm(mt({0, 2, 1}, {0, kInf, 1})), 3u);
  EXPECT_EQ(u_norm(mt({0, 2, 1}, {0, kInf, 1})), 1u);
  EXPECT_EQ(l_norm(mt({1, 2, 1}, {1, 2, kInf})), 4u);
  EXPECT_EQ(u_norm(mt({1, 2, 1}, {1, 2, kInf})), 3u);
  EXPECT_EQ(l_norm(Minterm(3)), 0u);
  EXPECT_EQ(u_norm(Minterm(3)), 0u);
  EXPECT_EQ(l_norm(CountingConstraint(2)), 0u);
  EXPECT_EQ(u_norm(CountingConstraint(2)), 0u);
}

TEST(Constraint, Canonicalize) {
  EXPECT_EQ(canonicalize(cc(1, {mt({2}, {1}), mt({0}, {kInf})})), CountingConstraint::full(1));
  EXPECT_EQ(canonicalize(cc(1, {mt({1}, {5}), mt({0}, {kInf})})), CountingConstraint::full(1));
  EXPECT_EQ(canonicalize(CountingConstraint(1)).size(), 0u);
  EXPECT_EQ(canonicalize(cc(1, {mt({1}, {2}), mt({1}, {2})})).size(), 1u);
}

TEST(Constraint, Union) {
  const auto ge2 = CountingConstraint::of(mt({2}, {kInf}));
  const auto le1 = CountingConstraint::of(mt({0}, {1}));
  EXPECT_TRUE(equivalent(unite(ge2, le1), CountingConstraint::full(1)));
  EXPECT_EQ(unite(CountingConstraint(1), ge2), ge2);

  const Minterm a = mt({1, 2, 1}, {1, 2, kInf}), b = mt({1, 1, 2}, {1, 1, kInf});
  const auto u = unite(CountingConstraint::of(a), CountingConstraint::of(b));
  EXPECT_EQ(u.size(), 2u);
  EXPECT_TRUE(u.contains(Point{1, 2, 1}));
  EXPECT_TRUE(u.contains(Point{1, 1, 2}));
  EXPECT_FALSE(u.contains(Point{1, 1, 1}));
  EXPECT_THROW(unite(ge2, CountingConstraint(2)), DimensionError);
}

TEST(Constraint, Intersection) {
  const auto r = intersect(CountingConstraint::of(mt({1, 0}, {kInf, 2})), CountingConstraint::of(mt({0, 2}, {3, kInf})));
  EXPECT_EQ(r, CountingConstraint::of(mt({1, 2}, {3, 2})));
  EXPECT_TRUE(is_empty(intersect(CountingConstraint::of(mt({1}, {kInf})), CountingConstraint::of(mt({0}, {0})))));
  const auto g = cc(2, {mt({1, 0}, {3, kInf}), mt({0, 4}, {0, 4})});
  EXPECT_TRUE(equivalent(intersect(g, CountingConstraint::full(2)), g));
  EXPECT_THROW(intersect(g, CountingConstraint::full(3)), DimensionError);
}

TEST(Constraint, Complement) {
  EXPECT_TRUE(is_empty(complement(CountingConstraint::full(2))));
  EXPECT_TRUE(equivalent(complement(CountingConstraint::of(mt({2}, {kInf}))), CountingConstraint::of(mt({0}, {1}))));
  const auto split = complement(CountingConstraint::of(mt({2}, {3})));
  EXPECT_TRUE(equivalent(split, cc(1, {mt({0}, {1}), mt({4}, {kInf})})));
}

TEST(Constraint, SubsetAndEquality) {
  EXPECT_TRUE(is_subset(CountingConstraint::of(mt({1}, {1})), CountingConstraint::full(1)));
  EXPECT_FALSE(is_subset(CountingConstraint::full(1), CountingConstraint::of(mt({1}, {kInf}))));
  const auto computed = cc(2, {mt({2, 1}, {kInf, 1}), mt({1, 2}, {kInf, kInf}), mt({0, 3}, {kInf, kInf})});
  const auto table = cc(2, {mt({2, 1}, {kInf, kInf}), mt({1, 2}, {kInf, kInf}), mt({0, 3}, {kInf, kInf})});
  EXPECT_TRUE(equivalent(computed, table));
}

TEST(Constraint, FindOutsideReturnsGenuineWitness) {
  const auto a = CountingConstraint::of(mt({0, 0}, {4, 4}));
  const auto b = cc(2, {mt({0, 0}, {4, 3}), mt({0, 4}, {3, 4})});
  auto w = find_outside(a, b);
  ASSERT_TRUE(w);
  EXPECT_EQ(*w, (Point{4, 4}));
}

TEST(Constraint, FromPoints) {
  const std::vector<Point> one{{1, 1}};
  EXPECT_EQ(from_finite(2, one), CountingConstraint::of(mt({1, 1}, {1, 1})));
  EXPECT_EQ(from_finite(2, std::vector<Point>{}).size(), 0u);

  const std::vector<Point> minimal{{2, 0}, {0, 2}, {1, 1}};
  const auto up = from_upward_closed(2, minimal);
  EXPECT_EQ(up.size(), 3u);
  for (const Point& v : box_points(2, 4)) EXPECT_EQ(up.contains(v), v[0] + v[1] >= 2) << v[0] << "," << v[1];
}

TEST(Constraint, OverflowIsAnError) {
  EXPECT_THROW(checked_add(std::numeric_limits<Nat>::max() - 1, 5), OverflowError);
  EXPECT_THROW(Bound(std::numeric_limits<Nat>::max()), OverflowError);
  EXPECT_THROW(Bound(std::numeric_limits<Nat>::max() - 1).plus(1), OverflowError);
}

// Property suite against the box model: constants <= c means every literal is
// constant beyond c, so the box [0..c+1]^n decides semantics exactly.
class BoxProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(BoxProperties, BooleanOpsMatchSetOps) {
  Rng r(GetParam());
  for (int iter = 0; iter < 60; ++iter) {
    const std::size_t n = 1 + r.below(4);
    const Nat c = 4;
    const auto pts = box_points(n, c + 2);
    const auto g1 = testing::random_constraint(r, n, c);
    const auto g2 = testing::random_constraint(r, n, c);
    const auto b1 = box(g1, pts), b2 = box(g2, pts);

    const auto u = unite(g1, g2), i = intersect(g1, g2), c1 = complement(g1), d = subtract(g1, g2);
    const auto bu = box(u, pts), bi = box(i, pts), bc = box(c1, pts), bd = box(d, pts);
    for (std::size_t k = 0; k < pts.size(); ++k) {
      ASSERT_EQ(bu[k], b1[k] || b2[k]);
      ASSERT_EQ(bi[k], b1[k] && b2[k]);
      ASSERT_EQ(bc[k], !b1[k]);
      ASSERT_EQ(bd[k], b1[k] && !b2[k]);
    }
    ASSERT_EQ(equivalent(g1, g2), b1 == b2);
    ASSERT_EQ(is_subset(g1, g2), [&] {
      for (std::size_t k = 0; k < pts.size(); ++k)
        if (b1[k] && !b2[k]) return false;
      return true;
    }());
    if (auto w = find_outside(g1, g2)) {
      ASSERT_TRUE(raw_member(g1, *w));
      ASSERT_FALSE(raw_member(g2, *w));
    }
  }
}

TEST_P(BoxProperties, CanonicalFormInvariants) {
  Rng r(GetParam() ^ 0x5a5a);
  for (int iter = 0; iter < 60; ++iter) {
    const std::size_t n = 1 + r.below(4);
    const auto g = testing::random_constraint(r, n, 4, 5);
    const auto k = canonicalize(g);
    for (std::size_t a = 0; a < k.size(); ++a) {
      ASSERT_FALSE(is_empty(k.minterms()[a]));
      for (std::size_t b = 0; b < k.size(); ++b)
        if (a != b) {
          ASSERT_FALSE(subsumes(k.minterms()[a], k.minterms()[b]));
        }
    }
    const auto pts = box_points(n, 6);
    ASSERT_EQ(box(g, pts), box(k, pts));
    ASSERT_EQ(canonicalize(k), k);
  }
}

TEST_P(BoxProperties, DeMorganAndInvolution) {
  Rng r(GetParam() ^ 0xd3);
  for (int iter = 0; iter < 40; ++iter) {
    const std::size_t n = 1 + r.below(4);
    const auto g1 = testing::random_constraint(r, n, 4), g2 = testing::random_constraint(r, n, 4);
    ASSERT_TRUE(equivalent(complement(complement(g1)), g1));
    ASSERT_TRUE(equivalent(complement(unite(g1, g2)), intersect(complement(g1), complement(g2))));
    ASSERT_TRUE(equivalent(complement(intersect(g1, g2)), unite(complement(g1), complement(g2))));
  }
}

TEST_P(BoxProperties, NormBounds) {
  Rng r(GetParam() ^ 0x77);
  for (int iter = 0; iter < 60; ++iter) {
    const std::size_t n = 1 + r.below(4);
    const auto g1 = canonicalize(testing::random_constraint(r, n, 4));
    const auto g2 = canonicalize(testing::random_constraint(r, n, 4));
    const auto u = unite(g1, g2), i = intersect(g1, g2), c = complement(g1);
    ASSERT_LE(u_norm(u), std::max(u_norm(g1), u_norm(g2)));
    ASSERT_LE(l_norm(u), std::max(l_norm(g1), l_norm(g2)));
    ASSERT_LE(u_norm(i), u_norm(g1) + u_norm(g2));
    ASSERT_LE(l_norm(i), l_norm(g1) + l_norm(g2));
    ASSERT_LE(u_norm(c), n * l_norm(g1));
    ASSERT_LE(l_norm(c), n * u_norm(g1) + n);
  }
}

TEST_P(BoxProperties, SubsumptionIsSemanticContainment) {
  Rng r(GetParam() ^ 0x99);
  for (int iter = 0; iter < 200; ++iter) {
    const std::size_t n = 1 + r.below(3);
    const Minterm a = testing::random_minterm(r, n, 3), b = testing::random_minterm(r, n, 3);
    bool contained = true;
    for (const Point& v : box_points(n, 5))
      if (raw_member(b, v) && !raw_member(a, v)) contained = false;
    ASSERT_EQ(subsumes(a, b), contained);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, BoxProperties, ::testing::Values(1u, 2u, 3u, 4u, 5u));

}  // namespace
}  // namespace iopp
