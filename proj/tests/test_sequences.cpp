#include "orthofam/sequences.hpp"

#include <gtest/gtest.h>

using namespace orthofam;

TEST(SeqHandle, FiniteSupportInner) {
  const SeqHandle x = finite_handle("x", std::vector<BigRat>{1, 0, -2, 3});
  const SeqHandle y = finite_handle("y", std::vector<BigRat>{2, 5, 1});
  EXPECT_EQ(std::get<FiniteSupport>(x.support).indices, (std::vector<Index>{0, 2, 3}));
  const auto c = inner_certified(x, y);
  ASSERT_TRUE(std::holds_alternative<ExactInner>(c));
  EXPECT_TRUE(is_exact_zero(c));
  EXPECT_EQ(std::get<ExactInner>(c).stable_from, 4);
  EXPECT_TRUE(x(10).is_zero());
}

TEST(SeqHandle, UnitAgainstOnes) {
  const SeqHandle e = unit_vector("e3", 3);
  const SeqHandle ones = ones_handle();
  const auto c = inner_certified(ones, e);
  EXPECT_EQ(std::get<ExactInner>(c).value.rational_value(), 1);
}

TEST(SeqHandle, SelfInnerOfOnesDiverges) {
  const SeqHandle ones = ones_handle();
  const auto c = inner_certified(ones, ones);
  ASSERT_TRUE(std::holds_alternative<DivergentInner>(c));
  for (const auto& [b, n] : std::get<DivergentInner>(c).witnesses) EXPECT_GT(BigRat(n), b);
}

TEST(SeqHandle, MissingMetadataIsUnverifiable) {
  const SeqHandle a = ones_handle("a"), b = ones_handle("b");
  EXPECT_THROW(inner_certified(a, b), Unverifiable);
}

TEST(SeqHandle, DisjointBeyondUsesPrefix) {
  SeqHandle a = ones_handle("a");
  SeqHandle b = finite_handle("b", std::vector<BigRat>{1, -1});
  b.support = OpaqueSupport{};
  declare_disjoint_beyond(a, b, BigInt(2));
  const auto c = inner_certified(a, b);
  EXPECT_TRUE(is_exact_zero(c));
  EXPECT_EQ(std::get<ExactInner>(c).stable_from, 2);
}

TEST(SeqHandle, ConvergenceModulusGivesPartial) {
  SeqHandle a = ones_handle("a");
  SeqHandle b;
  b.id = "alt";
  b.value = [](Index n) { return Radical(make_rat(n % 2 ? -1 : 1, static_cast<long>(n + 1))); };
  b.support = FullSupport{};
  a.partners["alt"] = ConvergenceModulus{[](const BigRat& eps) { return static_cast<Index>(floor_rat(1 / eps).get_ui()); }};
  const auto c = inner_certified(a, b, make_rat(1, 100));
  ASSERT_TRUE(std::holds_alternative<PartialInner>(c));
  const auto& p = std::get<PartialInner>(c);
  EXPECT_EQ(p.sums.back().first, 100u);
  EXPECT_EQ(p.tail_bound, make_rat(1, 100));
}

TEST(LpReport, OnesIsExact) {
  const LpReport r = lp_report(ones_handle(), 2, 10);
  EXPECT_TRUE(r.exact);
  EXPECT_EQ(r.partial.lo, 10);
  EXPECT_FALSE(r.tail_bound.has_value());
}

TEST(LpReport, IrrationalPowerEncloses) {
  const SeqHandle x = finite_handle("x", std::vector<BigRat>{2, 2});
  const LpReport r = lp_report(x, make_rat(1, 2), 2, 40);
  EXPECT_FALSE(r.exact);
  // 2 sqrt(2)
  EXPECT_LE(r.partial.lo * r.partial.lo, 8);
  EXPECT_GE(r.partial.hi * r.partial.hi, 8);
}

TEST(MinAbs, Entrywise) {
  const SeqHandle x = finite_handle("x", std::vector<BigRat>{3, -1, 0});
  const SeqHandle y = finite_handle("y", std::vector<BigRat>{-2, 4, 5});
  const PrefixVec m = min_abs_seq(x, y, 3);
  EXPECT_EQ(m[0], Radical(2));
  EXPECT_EQ(m[1], Radical(1));
  EXPECT_TRUE(m[2].is_zero());
}

TEST(StrongOrthogonality, FiniteAndFull) {
  const SeqHandle x = finite_handle("x", std::vector<BigRat>{1, 1});
  const SeqHandle y = finite_handle("y", std::vector<BigRat>{1, -1});
  EXPECT_TRUE(strongly_orthogonal(x, y).holds);
  SeqHandle f1 = ones_handle("f1"), f2 = ones_handle("f2");
  const auto s = strongly_orthogonal(f1, f2);
  EXPECT_FALSE(s.holds);
}
