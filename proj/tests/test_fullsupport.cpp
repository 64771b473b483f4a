#include "oracles.hpp"

#include "orthofam/fullsupport.hpp"

#include <gtest/gtest.h>

using namespace orthofam;

TEST(Hadamard, PatternCountsByEnumeration) {
  for (unsigned h = 2; h <= 7; ++h) {
    const auto blk = hadamard_block(h);
    const std::uint64_t N = std::uint64_t{1} << h;
    for (unsigned i = 0; i < h; ++i)
      for (unsigned j = i + 1; j < h; ++j)
        for (int si : {1, -1})
          for (int sj : {1, -1}) {
            std::uint64_t c = 0;
            for (std::uint64_t t = 0; t < N; ++t) c += blk[i][t] == si && blk[j][t] == sj;
            EXPECT_EQ(c, N / 4);
            EXPECT_EQ(sign_pattern_count(blk, i, j, si, sj), c);
          }
  }
}

TEST(Hadamard, AltPadColumnsOrthogonal) {
  const unsigned h = 4;
  const Matrix<BigRat> m = alt_pad_columns(h, make_rat(1, 8));
  ASSERT_EQ(m.size(), h);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = i + 1; j < h; ++j) {
      BigRat d = 0;
      for (std::size_t c = 0; c < m[i].size(); ++c) d += m[i][c] * m[j][c];
      EXPECT_EQ(d, 0);
    }
}

TEST(SignCondition, RequirePairShrinksTail) {
  SignCondition c(default_seed(2));
  c = require_pair(std::move(c), 0, 1, make_rat(1, 2));
  ASSERT_EQ(c.requirements().size(), 1u);
  EXPECT_LT(abs_rat(c.gram(0, 1)), make_rat(1, 2));
  const ConditionReport r = verify_condition(c);
  EXPECT_TRUE(r.ok());
}

TEST(SignCondition, AddRequirementRejectsFailingCheckpoint) {
  SignCondition c({{BigRat(1), BigRat(1)}, {BigRat(1), BigRat(1)}});
  EXPECT_THROW(c.add_requirement(0, 1, BigRat(1)), InvariantViolation);
  EXPECT_THROW(c.add_requirement(0, 0, BigRat(1)), DomainError);
}

TEST(SignCondition, DoublingCopiesRowsAndRequirements) {
  SignCondition c(default_seed(2));
  c = require_pair(std::move(c), 0, 1, make_rat(1, 2));
  const SignCondition d = c.doubled();
  EXPECT_EQ(d.h(), 4u);
  EXPECT_EQ(d.requirements().size(), 2 * c.requirements().size());
  EXPECT_EQ(d.gram(0, 2), c.gram(0, 1));
  EXPECT_EQ(d.gram(1, 3), c.gram(0, 1));
}

TEST(FullSupportBuild, VerifiesAndMatchesGram) {
  const FullSupportBuild b = build_perfect_family(2, default_seed(2), 4);
  const ConditionReport rep = verify_condition(b.condition);
  EXPECT_TRUE(rep.ok());
  const std::size_t h = b.condition.h();
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = i; j < h; ++j) EXPECT_EQ(rep.gram[i * h + j], b.condition.gram(i, j));
  for (const auto& rec : b.records) {
    EXPECT_EQ(rec.eps_req, make_rat(1, rec.stage));
    EXPECT_LE(rec.pad_begin, rec.pad_end);
  }
}

// Tampering a single explicit entry must be caught by the recomputation.
TEST(FullSupportBuild, TamperedEntryDetected) {
  const FullSupportBuild b = build_perfect_family(2, default_seed(2), 3);
  auto segs = b.condition.segments();
  bool changed = false;
  for (auto& s : segs)
    if (auto* e = std::get_if<ExplicitColumn>(&s); e && !changed) {
      e->entries[0] = BigRat(0);
      changed = true;
    }
  ASSERT_TRUE(changed);
  const SignCondition t = SignCondition::from_parts(b.condition.h(), segs, b.condition.requirements());
  EXPECT_FALSE(verify_condition(t).ok());
}

TEST(FullSupportBuild, HeightSeriesLowerBound) {
  const FullSupportBuild b = build_perfect_family(2, default_seed(2), 5);
  for (unsigned p = 1; p <= 5; ++p) {
    const HeightSeries hs = height_series(b, p);
    EXPECT_EQ(hs.lower_bound, BigRat(5 - static_cast<long>(p) + 1));
    EXPECT_TRUE(hs.holds);
    EXPECT_GE(hs.sum, hs.lower_bound);
  }
}

TEST(Precondition, RestoringPair) {
  for (const BigRat& x : {BigRat(0), make_rat(-5, 2), make_rat(3, 7), BigRat(-2), BigRat(-3)}) {
    const auto [u, v] = restoring_pair(x);
    EXPECT_GE(u, 2);
    EXPECT_GE(abs_rat(x + BigRat(u)), 1);
    EXPECT_EQ(x + BigRat(u) + v, 0);
  }
}

TEST(Precondition, ExtensionRepairsPairs) {
  AdSupportCondition c;
  c.add_row(0, {BigRat(1), BigRat(2), BigRat(0)});
  c.add_row(1, {BigRat(1), BigRat(0), BigRat(3)});
  c.add_row(2, {BigRat(0), BigRat(0), BigRat(1)});
  c.add_promise(0, 2, 2);
  const OrthogonalExtension e = extend_to_orthogonal(c);
  EXPECT_TRUE(e.condition.non_orthogonal_pairs().empty());
  EXPECT_EQ(e.condition.N(), c.N() + 2 * e.repaired.size());
  for (const auto& [a, r] : e.condition.rows())
    for (const auto& v : r.entries) EXPECT_TRUE(v == 0 || abs_rat(v) >= 1);
}

TEST(Precondition, BrokenPromiseThrows) {
  AdSupportCondition c;
  c.add_row(0, {BigRat(1), BigRat(1)});
  c.add_row(1, {BigRat(1), BigRat(1)});
  c.add_promise(0, 1, 0);
  EXPECT_THROW(extend_to_orthogonal(c), InvariantViolation);
  EXPECT_THROW(c.add_row(2, {make_rat(1, 2), BigRat(1)}), InvariantViolation);
}
