#include "oracles.hpp"

#include "orthofam/diagonal.hpp"

#include <gtest/gtest.h>

using namespace orthofam;

TEST(Registry, DerivedPairs) {
  Registry reg;
  reg.add(residue_class_seq("e", 2, 0));
  reg.add(residue_class_seq("o", 2, 1));
  reg.add(residue_class_seq("t", 3, 1));
  reg.add(harmonic_signs_seq("h"));
  reg.add(finite_seq("f", {BigRat(1), BigRat(0), BigRat(2)}));
  EXPECT_EQ(reg.pair("e", "o")->disjoint_from, Index{0});
  EXPECT_FALSE(reg.pair("e", "t").has_value());
  EXPECT_TRUE(reg.pair("h", "t").has_value());
  EXPECT_FALSE(reg.pair("h", "e").has_value());
  EXPECT_EQ(reg.pair("f", "e")->disjoint_from, Index{3});
  EXPECT_THROW(reg.add(residue_class_seq("e", 2, 0)), DomainError);
}

TEST(Registry, DivergenceWitness) {
  const RegisteredSeq s = residue_class_seq("t", 3, 2);
  for (Index n0 : {0u, 1u, 5u})
    for (const BigRat& b : {BigRat(0), make_rat(5, 2), BigRat(7)}) {
      const Index n1 = s.divergence(n0, b);
      BigRat sq = 0;
      for (Index n = n0; n < n1; ++n) sq += s(n) * s(n);
      EXPECT_GT(sq, b);
      BigRat less = sq - s(n1 - 1) * s(n1 - 1);
      EXPECT_LE(less, b);
    }
}

TEST(Script, ParsesAndRejects) {
  const Script sc = parse_script("# comment\nSEQ a even\nSEQ b mod 3 1\nREQ a 1/4\nNORM 5\n");
  EXPECT_EQ(sc.registry.ids().size(), 2u);
  EXPECT_EQ(sc.goals.size(), 2u);
  EXPECT_THROW(parse_script("SEQ a even\nSEQ a odd\n"), ScriptError);
  EXPECT_THROW(parse_script("REQ z 1/2\n"), ScriptError);
  EXPECT_THROW(parse_script("SEQ a even\nREQ a 0\n"), ScriptError);
  EXPECT_THROW(parse_script("FOO\n"), ScriptError);
  try {
    parse_script("SEQ a even\nSEQ b nope\n");
    FAIL();
  } catch (const ScriptError& e) {
    EXPECT_EQ(e.line_no, 2u);
  }
}

TEST(Diagonalize, RequirementsAndNorm) {
  const Script sc = parse_script("SEQ a mod 3 0\nSEQ b mod 3 1\nSEQ d mod 3 2\nSEQ h harmonic-signs\nREQ a 1/3\nREQ b 1/5\nNORM 20\nREQ a 1/9\n");
  const DiagonalReport d = diagonalize(sc.registry, sc.goals);
  const MAReport r = verify_ma(d.condition, sc.registry);
  EXPECT_TRUE(r.ok());
  EXPECT_GT(r.square_sum, 20);
  // Side condition against the square summable sequence is exact.
  BigRat side = 0;
  const auto& h = sc.registry.get("h");
  for (Index n = 0; n < d.condition.N(); ++n) side += d.condition.s[n] * h(n);
  EXPECT_EQ(side, 0);
}

TEST(Diagonalize, EmptyGoals) {
  const Script sc = parse_script("SEQ a ones\n");
  const DiagonalReport d = diagonalize(sc.registry, sc.goals);
  EXPECT_EQ(d.condition.N(), 0u);
  EXPECT_TRUE(d.report.ok());
}

TEST(Diagonalize, AddRequirementKeepsOld) {
  Registry reg;
  reg.add(residue_class_seq("a", 2, 0));
  reg.add(residue_class_seq("b", 2, 1));
  MACondition c = ma_start(reg);
  c = ma_add_requirement(c, reg, "a", make_rat(1, 2));
  c = ma_grow_norm(c, reg, BigRat(4));
  c = ma_add_requirement(c, reg, "b", make_rat(1, 8));
  EXPECT_EQ(c.P.size(), 2u);
  EXPECT_TRUE(verify_ma(c, reg).ok());
}

TEST(SolveTargets, RandomSystems) {
  std::mt19937_64 rng(7);
  int done = 0;
  while (done < 20) {
    const std::size_t d = 1 + rng() % 5, m = 1 + rng() % d;
    std::vector<std::vector<BigRat>> v(m, std::vector<BigRat>(d));
    for (auto& row : v)
      for (auto& e : row) e = oracle::random_rat(rng, 3, 3);
    if (oracle::rank(v) != m) continue;
    ++done;
    std::vector<BigRat> beta(m);
    for (auto& b : beta) b = oracle::random_rat(rng, 5, 4);
    const TargetSolution s = solve_targets(v, beta);
    for (std::size_t i = 0; i < m; ++i) EXPECT_EQ(oracle::dot(v[i], s.t), beta[i]);
    EXPECT_EQ(oracle::dot(s.t, s.t), s.norm_sq);
  }
}

TEST(SolveTargets, DependentReportsCoefficients) {
  const std::vector<std::vector<BigRat>> v{{BigRat(1), BigRat(2)}, {BigRat(2), BigRat(4)}};
  try {
    solve_targets(v, {BigRat(1), BigRat(1)});
    FAIL();
  } catch (const DependentVectors& e) {
    ASSERT_EQ(e.coefficients.size(), 2u);
    for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(e.coefficients[0] * v[0][j] + e.coefficients[1] * v[1][j], 0);
  }
}
