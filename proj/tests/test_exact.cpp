#include "oracles.hpp"

#include "orthofam/exact.hpp"
#include "orthofam/exact/serialize.hpp"

#include <gtest/gtest.h>

using namespace orthofam;

namespace {

// Square part by trial division over every d with d^2 <= n.
BigInt slow_square_root_part(BigInt n) {
  BigInt root = 1;
  for (BigInt d = 2; d * d <= n; ++d)
    while (n % (d * d) == 0) {
      n /= d * d;
      root *= d;
    }
  return root;
}

}  // namespace

TEST(BigRat, ParseAndPrint) {
  EXPECT_EQ(parse_rat("6/4"), make_rat(3, 2));
  EXPECT_EQ(parse_rat("-7"), BigRat(-7));
  EXPECT_EQ(to_string(make_rat(-3, 6)), "-1/2");
  EXPECT_THROW(parse_rat("1/0"), DomainError);
  EXPECT_THROW(parse_rat("abc"), DomainError);
  EXPECT_THROW(make_rat(1, 0), DomainError);
}

TEST(BigRat, FloorCeilRoot) {
  EXPECT_EQ(floor_rat(make_rat(-7, 2)), -4);
  EXPECT_EQ(ceil_rat(make_rat(-7, 2)), -3);
  EXPECT_EQ(ceil_rat(make_rat(7, 2)), 4);
  bool exact = false;
  EXPECT_EQ(int_root(BigInt(1000), 3, &exact), 10);
  EXPECT_TRUE(exact);
  EXPECT_EQ(int_root(BigInt(1001), 3, &exact), 10);
  EXPECT_FALSE(exact);
  EXPECT_EQ(largest_power_of_half_below(make_rat(3, 10)), make_rat(1, 4));
}

TEST(SquareFree, MatchesTrialDivision) {
  for (long n = 1; n <= 3000; ++n) {
    const SquareFreeParts p = square_free_parts(BigInt(n));
    const BigInt root = slow_square_root_part(BigInt(n));
    ASSERT_EQ(p.root, root) << n;
    ASSERT_EQ(p.core * p.root * p.root, n);
  }
}

TEST(SquareFree, LargeSemiprimeAndSquare) {
  const BigInt p("1000000007"), q("998244353");
  const SquareFreeParts a = square_free_parts(p * p * q * 12);
  EXPECT_EQ(a.root, p * 2);
  EXPECT_EQ(a.core, q * 3);
  EXPECT_THROW(square_free_parts(BigInt(0)), DomainError);
}

TEST(Radical, Normalization) {
  EXPECT_EQ(Radical::sqrt(8), Radical::of(2, 2));
  EXPECT_EQ(Radical::of(3, make_rat(4, 9)), Radical(2));
  EXPECT_EQ(Radical::sqrt(make_rat(1, 2)), Radical::of(make_rat(1, 2), 2));
  EXPECT_EQ(Radical::of(0, 5).radicand(), 1);
  EXPECT_THROW(Radical::sqrt(-1), DomainError);
  EXPECT_EQ((Radical::sqrt(6) * Radical::sqrt(10)), Radical::of(2, 15));
  EXPECT_EQ(Radical::sqrt(2).square(), 2);
}

TEST(Radical, ProductSquaresProperty) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    const BigRat a = oracle::random_rat(rng, 9, 9), b = oracle::random_rat(rng, 9, 9);
    const BigRat ra = abs_rat(oracle::random_rat(rng, 50, 6)), rb = abs_rat(oracle::random_rat(rng, 50, 6));
    const Radical x = Radical::of(a, ra), y = Radical::of(b, rb);
    EXPECT_EQ((x * y).square(), x.square() * y.square());
    EXPECT_EQ((x * y).sign(), x.sign() * y.sign());
  }
}

TEST(RadicalSum, CancellationAndSign) {
  RadicalSum s;
  s += Radical::sqrt(2);
  s += Radical(-1);
  EXPECT_EQ(sign(s), 1);
  s += Radical::of(-1, 2);
  EXPECT_EQ(s.rational_value(), -1);
  RadicalSum z = RadicalSum(Radical::sqrt(3)) - RadicalSum(Radical::sqrt(3));
  EXPECT_TRUE(z.is_zero());
  // sqrt(2) + sqrt(3) - sqrt(10) is about -0.016.
  RadicalSum close;
  close += Radical::sqrt(2);
  close += Radical::sqrt(3);
  close += Radical::of(-1, 10);
  EXPECT_EQ(sign(close), -1);
  EXPECT_THROW(close.rational_value(), DomainError);
}

TEST(Interval, RootEnclosure) {
  const Interval r = root_enclosure(2, 2, 40);
  EXPECT_LE(r.lo * r.lo, 2);
  EXPECT_GE(r.hi * r.hi, 2);
  EXPECT_LE(r.width(), half_pow(40));
  EXPECT_EQ(root_enclosure(make_rat(9, 4), 2, 10).lo, make_rat(3, 2));
  const Interval p = abs_pow_enclosure(Radical::sqrt(2), make_rat(5, 2), 30);
  // 2^(5/4) ~ 2.3784
  EXPECT_TRUE(p.contains(make_rat(23784, 10000)) || p.width() < half_pow(20));
  EXPECT_LT(abs_rat(p.lo - make_rat(23784, 10000)), make_rat(1, 1000));
}

TEST(Linalg, RankNullspaceOracle) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 60; ++t) {
    const std::size_t rows = 1 + rng() % 4, cols = 1 + rng() % 5;
    Matrix<BigRat> m(rows, std::vector<BigRat>(cols));
    for (auto& r : m)
      for (auto& e : r) e = (rng() % 3 == 0) ? BigRat(0) : oracle::random_rat(rng, 3, 2);
    if (rows > 1 && rng() % 2) m.back() = m.front();  // force a dependency sometimes
    const std::size_t rk = rank(m);
    EXPECT_EQ(rk, oracle::rank(m));
    const auto ns = nullspace(m, cols);
    EXPECT_EQ(ns.size(), cols - rk);
    for (const auto& u : ns)
      for (const auto& r : m) EXPECT_EQ(oracle::dot(r, u), 0);
    const auto dep = find_dependency(m, BigRat(0));
    EXPECT_EQ(dep.has_value(), rk < rows);
    if (dep) {
      std::vector<BigRat> comb(cols, BigRat(0));
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) comb[j] += (*dep)[i] * m[i][j];
      for (const auto& v : comb) EXPECT_EQ(v, 0);
    }
  }
}

TEST(Linalg, SolveSquare) {
  const Matrix<BigRat> a{{2, 1}, {1, 3}};
  const auto x = solve_square(a, std::vector<BigRat>{3, 5}, BigRat(0));
  EXPECT_EQ(x[0], make_rat(4, 5));
  EXPECT_EQ(x[1], make_rat(7, 5));
  EXPECT_THROW(solve_square(Matrix<BigRat>{{1, 2}, {2, 4}}, std::vector<BigRat>{1, 1}, BigRat(0)), DomainError);
}

TEST(QuadraticField, RankOverSqrt2) {
  const QuadElem r2 = QuadElem::from(Radical::sqrt(2), 2);
  // (1, sqrt2) and (sqrt2, 2) are dependent over Q(sqrt 2) but not over Q.
  const Matrix<QuadElem> m{{QuadElem(1), r2}, {r2, QuadElem(2)}};
  EXPECT_EQ(rank(m), 1u);
  EXPECT_TRUE(is_zero(r2 * r2 - QuadElem(2)));
  EXPECT_TRUE(is_zero(r2 * r2.inverse() - QuadElem(1)));
  EXPECT_THROW(QuadElem::from(Radical::sqrt(3), 2), DomainError);
}

TEST(Serialize, RoundTripAndCanonical) {
  for (const Radical& r : {Radical(0), Radical(make_rat(-3, 7)), Radical::of(5, 6), Radical::sqrt(make_rat(1, 8))}) {
    const Json j = to_json_scalar(r);
    EXPECT_EQ(radical_from_json(j), r);
    EXPECT_EQ(radical_from_json(Json::parse(j.dump())), r);
  }
  EXPECT_THROW(radical_from_json(Json{{"num", "2"}, {"den", "4"}, {"radicand", "1"}}), DomainError);
  EXPECT_THROW(radical_from_json(Json{{"num", "1"}, {"den", "1"}, {"radicand", "8"}}), DomainError);
  EXPECT_THROW(radical_from_json(Json{{"num", "0"}, {"den", "1"}, {"radicand", "2"}}), DomainError);
  EXPECT_THROW(rational_from_json(to_json_scalar(Radical::sqrt(2))), DomainError);
  RadicalSum s;
  s += Radical::sqrt(2);
  s += Radical(make_rat(1, 3));
  EXPECT_TRUE((sum_from_json(to_json_sum(s)) - s).is_zero());
}
