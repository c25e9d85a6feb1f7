#include <cmath>
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "gtmp/errors.hpp"
#include "gtmp/poly.hpp"
#include "gtmp/semialgebraic.hpp"

using namespace gtmp;

namespace {

using Dense = std::map<std::vector<int>, double>;

// Random polynomial together with the same data held as a plain exponent map.
struct Sample {
  Polynomial p;
  Dense dense;
};

Sample random_poly(std::mt19937_64& rng, int n, int max_deg, int terms) {
  std::uniform_int_distribution<int> e(0, max_deg);
  std::uniform_real_distribution<double> c(-2.0, 2.0);
  Sample s{Polynomial(n), {}};
  for (int t = 0; t < terms; ++t) {
    std::vector<int> alpha(n, 0);
    int budget = e(rng);
    for (int i = 0; i < n && budget > 0; ++i) {
      std::uniform_int_distribution<int> take(0, budget);
      alpha[i] = take(rng);
      budget -= alpha[i];
    }
    const double v = c(rng);
    s.p.add_term(MultiIndex(alpha), v);
    s.dense[alpha] += v;
  }
  return s;
}

double naive_eval(const Dense& d, const std::vector<double>& x) {
  double total = 0.0;
  for (const auto& [alpha, c] : d) {
    double m = c;
    for (std::size_t i = 0; i < alpha.size(); ++i)
      for (int r = 0; r < alpha[i]; ++r) m *= x[i];
    total += m;
  }
  return total;
}

std::vector<double> random_point(std::mt19937_64& rng, int n, double scale = 1.5) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> x(n);
  for (auto& v : x) v = u(rng);
  return x;
}

bool same(const Polynomial& p, const Dense& d, double tol = 1e-12) {
  for (const auto& [alpha, c] : d)
    if (std::abs(p.coefficient(MultiIndex(alpha)) - c) > tol) return false;
  for (const auto& [alpha, c] : p.terms())
    if (!d.count(alpha.exponents()) && std::abs(c) > tol) return false;
  return true;
}

}  // namespace

TEST(MultiIndex, GradedLexOrder) {
  const auto mons = monomials_up_to(2, 2);
  ASSERT_EQ(mons.size(), 6u);
  EXPECT_EQ(mons[0].exponents(), (std::vector<int>{0, 0}));
  EXPECT_EQ(mons[1].exponents(), (std::vector<int>{1, 0}));
  EXPECT_EQ(mons[2].exponents(), (std::vector<int>{0, 1}));
  EXPECT_EQ(mons[3].exponents(), (std::vector<int>{2, 0}));
  EXPECT_EQ(mons[4].exponents(), (std::vector<int>{1, 1}));
  EXPECT_EQ(mons[5].exponents(), (std::vector<int>{0, 2}));
  EXPECT_EQ(monomial_count(7, 4), 330u);
}

TEST(Polynomial, EvaluateExamples) {
  const Polynomial p = parse_polynomial("x0^2 + x1^2", 2, true);
  EXPECT_DOUBLE_EQ(p.evaluate(Eigen::Vector2d(1, 0)), 1.0);
  const Polynomial f = parse_polynomial("x1^3+x2^3+3*x1*x2+1", 2);
  EXPECT_DOUBLE_EQ(f.evaluate(Eigen::Vector2d(0, 0)), 1.0);
  EXPECT_THROW(f.evaluate(Eigen::Vector3d(0, 0, 0)), DimensionMismatchError);
}

TEST(Polynomial, EvaluateMatchesNaiveSum) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 4;
    const Sample s = random_poly(rng, n, 3, 8);
    const auto x = random_point(rng, n);
    EXPECT_NEAR(s.p.evaluate(x), naive_eval(s.dense, x), 1e-12);
  }
}

TEST(Polynomial, ArithmeticMatchesDenseOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 4;
    const Sample a = random_poly(rng, n, 4, 6);
    const Sample b = random_poly(rng, n, 4, 6);
    Dense sum = a.dense, prod;
    for (const auto& [k, v] : b.dense) sum[k] += v;
    for (const auto& [ka, va] : a.dense) {
      for (const auto& [kb, vb] : b.dense) {
        std::vector<int> k(n);
        for (int i = 0; i < n; ++i) k[i] = ka[i] + kb[i];
        prod[k] += va * vb;
      }
    }
    EXPECT_TRUE(same(a.p + b.p, sum));
    EXPECT_TRUE(same(a.p * b.p, prod, 1e-10));
    EXPECT_TRUE((a.p - a.p).is_zero());
  }
}

TEST(Polynomial, ExactZeroPruningOnly) {
  Polynomial p(1);
  p.add_term(MultiIndex({1}), 1e-300);
  EXPECT_FALSE(p.is_zero());
  p.add_term(MultiIndex({1}), -1e-300);
  EXPECT_TRUE(p.is_zero());
}

TEST(Parse, TermsAndParentheses) {
  const Polynomial p = parse_polynomial("3*x1^2*x2 - x3 + 1", 3);
  EXPECT_DOUBLE_EQ(p.coefficient(MultiIndex({2, 1, 0})), 3.0);
  EXPECT_DOUBLE_EQ(p.coefficient(MultiIndex({0, 0, 1})), -1.0);
  EXPECT_DOUBLE_EQ(p.coefficient(MultiIndex({0, 0, 0})), 1.0);
  const Polynomial q = parse_polynomial("x1*(x2^2+1) + (x1 - x2)^2", 2);
  const Polynomial want = parse_polynomial("x1*x2^2 + x1 + x1^2 - 2*x1*x2 + x2^2", 2);
  EXPECT_LE(q.max_coefficient_difference(want), 1e-15);
  EXPECT_LE(parse_polynomial(" x1 ^ 2 +x2", 2).max_coefficient_difference(parse_polynomial("x1^2+x2", 2)), 0.0);
}

TEST(Parse, RejectsWithPosition) {
  try {
    parse_polynomial("x1 + sin(x2)", 2);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 5u);
  }
  EXPECT_THROW(parse_polynomial("x3", 2), ParseError);
  EXPECT_THROW(parse_polynomial("x0", 2), ParseError);
  EXPECT_THROW(parse_polynomial("x1^-1", 2), ParseError);
  EXPECT_THROW(parse_polynomial("x1 +", 2), ParseError);
}

TEST(Parse, RoundTripThroughText) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Sample s = random_poly(rng, 3, 4, 6);
    const Polynomial back = parse_polynomial(s.p.to_string(), 3);
    EXPECT_LE(back.max_coefficient_difference(s.p), 1e-12 * (1 + s.p.degree()));
  }
}

TEST(Homogenize, Examples) {
  const Polynomial c = parse_polynomial("x1^2 + x2^2 - 1", 2);
  const Polynomial h = homogenize(c);
  EXPECT_LE(h.max_coefficient_difference(parse_polynomial("x1^2 + x2^2 - x0^2", 3, true)), 0.0);
  EXPECT_TRUE(h.is_homogeneous());
  EXPECT_THROW(homogenize(c, 1), DegreeUnderflowError);
  EXPECT_LE(dehomogenize(h).max_coefficient_difference(c), 0.0);
}

// 500 random polynomials: x0^d p(x / x0) agrees with the homogenized
// polynomial, and x0 = 1 recovers p.
TEST(Homogenize, EvaluationIdentity) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u0(0.2, 2.0);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + trial % 4;
    const Sample s = random_poly(rng, n, 4, 7);
    const int d = std::max(0, s.p.degree()) + trial % 3;
    const Polynomial h = homogenize(s.p, d);
    ASSERT_TRUE(h.is_homogeneous() || h.is_zero());
    for (int r = 0; r < 3; ++r) {
      const auto x = random_point(rng, n);
      std::vector<double> one(n + 1, 1.0);
      std::copy(x.begin(), x.end(), one.begin() + 1);
      EXPECT_NEAR(h.evaluate(one), naive_eval(s.dense, x), 1e-10);

      const double x0 = u0(rng);
      std::vector<double> scaled(n), lifted(n + 1);
      lifted[0] = x0;
      for (int i = 0; i < n; ++i) {
        scaled[i] = x[i] / x0;
        lifted[i + 1] = x[i];
      }
      const double want = std::pow(x0, d) * naive_eval(s.dense, scaled);
      EXPECT_NEAR(h.evaluate(lifted), want, 1e-9 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST(Homogenize, DegreeScaling) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ut(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 3;
    const Sample s = random_poly(rng, n, 4, 5);
    if (s.p.is_zero()) continue;
    const Polynomial h = homogenize(s.p);
    const auto x = random_point(rng, n + 1);
    const double t = ut(rng);
    std::vector<double> tx(x);
    for (auto& v : tx) v *= t;
    const double want = std::pow(t, s.p.degree()) * h.evaluate(x);
    EXPECT_NEAR(h.evaluate(tx), want, 1e-9 * std::max(1.0, std::abs(want)));
  }
}

TEST(PowerSupport, HomogenizedIndices) {
  const PowerSupport A = PowerSupport::full(1, 2);
  const PowerSupport H = A.homogenized();
  ASSERT_EQ(H.size(), 3u);
  EXPECT_TRUE(H.contains(MultiIndex({2, 0})));
  EXPECT_TRUE(H.contains(MultiIndex({1, 1})));
  EXPECT_TRUE(H.contains(MultiIndex({0, 2})));
  for (const auto& b : H) EXPECT_EQ(b.degree(), 2);
}

TEST(LiftSet, WholeSpace) {
  const HomogenizedSet L = lift_set(SemialgebraicSet::whole_space(6));
  ASSERT_EQ(L.eq_tuple.size(), 1u);
  ASSERT_EQ(L.ineq_tuple.size(), 1u);
  EXPECT_LE(L.eq_tuple[0].max_coefficient_difference(
                parse_polynomial("x0^2+x1^2+x2^2+x3^2+x4^2+x5^2+x6^2-1", 7, true)),
            0.0);
  EXPECT_LE(L.ineq_tuple[0].max_coefficient_difference(Polynomial::variable(7, 0)), 0.0);
}

TEST(LiftSet, OutsideUnitBall) {
  SemialgebraicSet K = SemialgebraicSet::whole_space(6);
  K.inequalities.push_back(parse_polynomial("x1^2+x2^2+x3^2+x4^2+x5^2+x6^2-1", 6));
  const HomogenizedSet L = lift_set(K);
  const Polynomial want = parse_polynomial("x1^2+x2^2+x3^2+x4^2+x5^2+x6^2-x0^2", 7, true);
  bool found = false, x0 = false;
  for (const auto& g : L.ineq_tuple) {
    found = found || g.max_coefficient_difference(want) == 0.0;
    x0 = x0 || g.max_coefficient_difference(Polynomial::variable(7, 0)) == 0.0;
  }
  EXPECT_TRUE(found);
  EXPECT_TRUE(x0);
}

TEST(LiftSet, PositiveOrthantWithProductEquality) {
  SemialgebraicSet K = SemialgebraicSet::nonnegative_orthant(3);
  K.equalities.push_back(parse_polynomial("x1*x2*x3*(x1+x2+x3-6)", 3));
  const HomogenizedSet L = lift_set(K);
  const Polynomial want = parse_polynomial("x1*x2*x3*(x1+x2+x3-6*x0)", 4, true);
  bool found = false, sphere = false;
  for (const auto& g : L.eq_tuple) {
    found = found || g.max_coefficient_difference(want) <= 1e-15;
    sphere = sphere || g.max_coefficient_difference(sphere_polynomial(4)) == 0.0;
  }
  EXPECT_TRUE(found);
  EXPECT_TRUE(sphere);
  EXPECT_EQ(L.ineq_tuple.size(), 4u);
  EXPECT_EQ(L.d_K(), 2);
}

TEST(LiftSet, AlwaysHasSphereAndX0) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 4;
    SemialgebraicSet K = SemialgebraicSet::whole_space(n);
    for (int i = 0; i < trial % 3; ++i) K.equalities.push_back(random_poly(rng, n, 3, 3).p);
    for (int i = 0; i < trial % 2 + 1; ++i) K.inequalities.push_back(random_poly(rng, n, 3, 3).p);
    const HomogenizedSet L = lift_set(K);
    int sphere = 0, x0 = 0;
    for (const auto& g : L.eq_tuple) sphere += g.max_coefficient_difference(sphere_polynomial(n + 1)) == 0.0;
    for (const auto& g : L.ineq_tuple) x0 += g.max_coefficient_difference(Polynomial::variable(n + 1, 0)) == 0.0;
    EXPECT_GE(sphere, 1);
    EXPECT_GE(x0, 1);
  }
}
