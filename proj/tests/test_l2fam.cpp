#include "oracles.hpp"

#include "orthofam/l2fam.hpp"
#include "orthofam/sequences.hpp"

#include <gtest/gtest.h>

using namespace orthofam;

TEST(GridIndex, RoundTrip) {
  for (Index k = 0; k < 5000; ++k) {
    const auto [r, c] = GridIndex::unpair(k);
    EXPECT_EQ(GridIndex::pair(r, c), k);
  }
  EXPECT_EQ(GridIndex::pair(0, 0), 0u);
  EXPECT_EQ(GridIndex::pair(1, 0), 1u);
  EXPECT_EQ(GridIndex::pair(0, 1), 2u);
}

TEST(Staircase, PairwiseOrthogonal) {
  for (std::size_t a = 0; a < 8; ++a)
    for (std::size_t b = a + 1; b < 8; ++b) {
      auto u = staircase(a), v = staircase(b);
      const std::size_t d = std::max(u.size(), v.size());
      u.resize(d, BigRat(0));
      v.resize(d, BigRat(0));
      EXPECT_EQ(oracle::dot(u, v), 0) << a << " " << b;
    }
}

TEST(Staircase, GridVectorsOrthogonalToCompletions) {
  const Completions cp = completions(3);
  for (Index n = 0; n < 3; ++n)
    for (Index m = 0; m < 4; ++m) {
      const SeqHandle x = grid_vector(n, m);
      for (const auto& y : cp.y) EXPECT_TRUE(inner_partial(x, y, 200).is_zero());
      EXPECT_TRUE(inner_partial(x, cp.v, 200).is_zero());
    }
  EXPECT_TRUE(is_exact_zero(inner_certified(cp.y[0], cp.v)));
  EXPECT_TRUE(std::holds_alternative<DivergentInner>(inner_certified(cp.v, cp.v)));
}

TEST(Complement, OnesDirection) {
  for (std::size_t d = 2; d <= 8; ++d) {
    const ComplementBasis cb = complement_basis(d);
    ASSERT_EQ(cb.basis.size(), 1u);
    EXPECT_TRUE(cb.ones_direction);
  }
}

TEST(UnequalTree, DeltaAndOrthogonality) {
  const UnequalTree t = unequal_tree(10);
  for (std::size_t n = 1; n <= 10; ++n) {
    const auto vs = t.level_vectors(n);
    EXPECT_EQ(vs.size(), n);
    EXPECT_EQ(oracle::rank(vs), n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) EXPECT_EQ(oracle::dot(vs[i], vs[j]), 0);
    if (n < 10) EXPECT_LE(t.delta(n), half_pow(n - 1));
  }
}

TEST(UnequalTree, MinmaxAgainstGrid) {
  const UnequalTree t = unequal_tree(3);
  for (std::size_t n = 1; n <= 3; ++n) {
    std::vector<std::vector<double>> lv;
    for (const auto& v : t.level_vectors(n)) {
      lv.emplace_back();
      for (const auto& e : v) lv.back().push_back(e.get_d());
    }
    const double closed = minmax_radius_sq(t.level_vectors(n)).get_d();
    EXPECT_NEAR(oracle::minmax_grid(lv), closed, 0.1 * closed) << n;
  }
}

TEST(ETail, MemberWithinBound) {
  auto shared = std::make_shared<SharedUnequalTree>();
  shared->tree = unequal_tree(16);
  const SeqHandle m = e_member(shared, 3, [](std::size_t c) { return c % 2 ? -1 : 1; }, "m");
  const ETailCheck c = e_tail_check(m, shared->tree, 3, 15);
  EXPECT_TRUE(c.holds);
  EXPECT_EQ(c.bound, e_tail_bound(3));
}

TEST(L2Witness, RandomVectors) {
  std::mt19937_64 rng(11);
  auto shared = std::make_shared<SharedUnequalTree>();
  shared->tree = unequal_tree(2);
  for (int k = 0; k < 25; ++k) {
    std::vector<BigRat> x(1 + rng() % 6);
    for (auto& v : x) v = oracle::random_rat(rng, 4, 5);
    if (oracle::dot(x, x) == 0) continue;
    const L2Witness w = l2_witness(shared, x);
    EXPECT_NE(w.value, 0);
    EXPECT_EQ(w.value, w.head);
    const BigRat q = w.scale * w.scale * oracle::dot(x, x);
    EXPECT_GE(q, make_rat(9, 16));
    EXPECT_LE(q, 1);
  }
  EXPECT_THROW(l2_witness(shared, {BigRat(0)}), DomainError);
}
