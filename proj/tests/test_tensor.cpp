#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "gtmp/errors.hpp"
#include "gtmp/tensor.hpp"

using namespace gtmp;

namespace {

SymmetricTensor staircase(int n) {
  SymmetricTensor B(3, n + 1);
  for (const auto& tup : SymmetricTensor::sorted_tuples(3, n + 1)) B.set(tup, n - tup.back());
  return B;
}

// B(t) = sum_{j=1..4} (e0 + e_j)^{(x)3} + (t e0 + e5)^{(x)3} in S^3(R^6).
SymmetricTensor scp_family(double t) {
  SymmetricTensor B(3, 6);
  for (int j = 1; j <= 4; ++j) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(6);
    v[0] = 1.0;
    v[j] = 1.0;
    B.add_power(1.0, v);
  }
  Eigen::VectorXd v = Eigen::VectorXd::Zero(6);
  v[0] = t;
  v[5] = 1.0;
  B.add_power(1.0, v);
  return B;
}

// The listed tms over N^2_6 in degree-lexicographic order, as a tensor.
SymmetricTensor fialkow_variation(double c, double t) {
  const std::vector<double> b{1, 1, 0, 1, 0, 1, 1, 0, 1, c, 1, 0, 1, c, 1 + c * c, 1, 0, 1, c, 1 + c * c,
                              2 * c + c * c * c, 1, 0, 1, c, 1 + c * c, 2 * c + c * c * c,
                              1 + 3 * c * c + std::pow(c, 4) + t};
  SymmetricTensor B(6, 3);
  std::size_t pos = 0;
  for (int deg = 0; deg <= 6; ++deg) {
    for (int a1 = deg; a1 >= 0; --a1) B.set(tuple_of(MultiIndex({a1, deg - a1}), 6), b[pos++]);
  }
  return B;
}

// Largest distance from each expected vector to the nearest recovered one.
double vector_error(const std::vector<Eigen::VectorXd>& expected, const std::vector<TensorTerm>& got) {
  double worst = 0.0;
  for (const auto& e : expected) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& g : got) best = std::min(best, (e - g.vector).cwiseAbs().maxCoeff());
    worst = std::max(worst, best);
  }
  return worst;
}

void expect_reconstruction(const SymmetricTensor& B, const TensorOutcome& r) {
  EXPECT_LE(r.residual, 1e-5 * std::max(1.0, B.max_abs()));
  SymmetricTensor rebuilt(B.order(), B.dim());
  for (const auto& t : r.terms) rebuilt.add_power(t.weight, t.vector);
  EXPECT_LE(rebuilt.max_difference(B), 1e-5 * std::max(1.0, B.max_abs()));
}

}  // namespace

TEST(TensorTms, StatedRuleOfFirstExample) {
  SymmetricTensor B(3, 5);
  for (const auto& tup : SymmetricTensor::sorted_tuples(3, 5)) B.set(tup, tup.front() == 0 ? 1.0 : 3.0);
  const Tms y = tensor_to_tms(B);
  ASSERT_EQ(y.support.num_vars(), 4);
  for (std::size_t i = 0; i < y.support.size(); ++i) {
    const double want = y.support[i].degree() < 3 ? 1.0 : 3.0;
    EXPECT_EQ(y.values[static_cast<Eigen::Index>(i)], want);
  }
}

TEST(TensorTms, BijectionByCounting) {
  for (int m = 1; m <= 5; ++m) {
    for (int dim = 1; dim <= 5; ++dim) {
      const auto tuples = SymmetricTensor::sorted_tuples(m, dim);
      const PowerSupport A = PowerSupport::full(dim - 1, m);
      ASSERT_EQ(tuples.size(), A.size());
      std::set<std::vector<int>> images;
      for (const auto& a : A) images.insert(tuple_of(a, m));
      EXPECT_EQ(images.size(), tuples.size());
      EXPECT_EQ(images, std::set<std::vector<int>>(tuples.begin(), tuples.end()));
    }
  }
}

TEST(TensorTms, ZeroTensor) {
  const Tms y = tensor_to_tms(SymmetricTensor(4, 3));
  EXPECT_EQ(y.values.size(), static_cast<Eigen::Index>(monomial_count(2, 4)));
  EXPECT_EQ(y.values.cwiseAbs().maxCoeff(), 0.0);
}

TEST(TensorTms, RandomRoundTrip) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 1 + trial % 5, dim = 2 + trial % 4;
    SymmetricTensor B(m, dim);
    for (const auto& tup : SymmetricTensor::sorted_tuples(m, dim)) B.set(tup, g(rng));
    const SymmetricTensor back = tms_to_tensor(tensor_to_tms(B), m);
    EXPECT_EQ(back.max_difference(B), 0.0);
  }
}

TEST(SymmetricTensorType, IndicesSortedOnAccess) {
  SymmetricTensor B(3, 4);
  B.set({3, 0, 2}, 5.0);
  EXPECT_EQ(B.at({0, 2, 3}), 5.0);
  EXPECT_EQ(B.at({2, 3, 0}), 5.0);
  EXPECT_EQ(B.values().size(), 1u);
  EXPECT_THROW(B.at({0, 4, 1}), DimensionMismatchError);
  EXPECT_THROW(B.set({0, 1}, 1.0), DimensionMismatchError);
}

TEST(SymmetricTensorType, AddPowerMatchesProducts) {
  std::mt19937_64 rng(22);
  std::normal_distribution<double> g;
  Eigen::VectorXd v(4);
  for (int i = 0; i < 4; ++i) v[i] = g(rng);
  SymmetricTensor B(3, 4);
  B.add_power(2.5, v);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) EXPECT_NEAR(B.at({i, j, k}), 2.5 * v[i] * v[j] * v[k], 1e-14);
}

TEST(DetectPsop, RankOneInput) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 3; ++trial) {
    Eigen::VectorXd v(4);
    v << 1.0, g(rng), g(rng), g(rng);
    SymmetricTensor B(3, 4);
    B.add_power(1.7, v);
    const TensorOutcome r = detect_psop(B);
    ASSERT_EQ(r.outcome.tag, OutcomeTag::KMeasureFound) << "trial " << trial;
    ASSERT_EQ(r.terms.size(), 1u);
    EXPECT_NEAR(r.terms[0].weight, 1.7, 1e-5);
    EXPECT_LE((r.terms[0].vector - v).cwiseAbs().maxCoeff(), 1e-5);
    expect_reconstruction(B, r);
  }
}

TEST(DetectPsop, StaircaseDecomposition) {
  for (int n = 1; n <= 5; ++n) {
    const SymmetricTensor B = staircase(n);
    const TensorOutcome r = detect_psop(B);
    ASSERT_EQ(r.outcome.tag, OutcomeTag::KMeasureFound) << "n = " << n;
    EXPECT_EQ(r.outcome.order, 2);
    ASSERT_EQ(r.terms.size(), static_cast<std::size_t>(n)) << "n = " << n;
    std::vector<Eigen::VectorXd> expected;
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(n + 1);
      v.head(j + 1).setOnes();
      expected.push_back(v);
    }
    EXPECT_LE(vector_error(expected, r.terms), 1e-4) << "n = " << n;
    for (const auto& t : r.terms) EXPECT_NEAR(t.weight, 1.0, 1e-4) << "n = " << n;
    expect_reconstruction(B, r);
  }
}

TEST(DetectPsop, FlatTwoAtomSextic) {
  const SymmetricTensor B = fialkow_variation(0.0, 0.0);
  SymmetricTensor expect(6, 3);
  expect.add_power(0.5, Eigen::Vector3d(1, 1, -1));
  expect.add_power(0.5, Eigen::Vector3d(1, 1, 1));
  ASSERT_EQ(B.max_difference(expect), 0.0);
  const TensorOutcome r = detect_psop(B);
  ASSERT_EQ(r.outcome.tag, OutcomeTag::KMeasureFound);
  EXPECT_EQ(r.outcome.order, 4);
  ASSERT_EQ(r.terms.size(), 2u);
  EXPECT_LE(vector_error({Eigen::Vector3d(1, 1, -1), Eigen::Vector3d(1, 1, 1)}, r.terms), 1e-4);
  for (const auto& t : r.terms) EXPECT_NEAR(t.weight, 0.5, 1e-4);
  expect_reconstruction(B, r);
}

TEST(DetectPsop, PerturbedSexticIsClosureOnly) {
  const TensorOutcome r = detect_psop(fialkow_variation(0.0, 1.0));
  ASSERT_EQ(r.outcome.tag, OutcomeTag::ClosureMeasureOnly);
  ASSERT_TRUE(r.outcome.lifted_measure);
  int at_infinity = 0;
  for (const auto& a : r.outcome.lifted_measure->atoms) {
    if (std::abs(a.point[0]) > 1e-4) continue;
    ++at_infinity;
    EXPECT_NEAR(std::abs(a.point[2]), 1.0, 1e-4);
    EXPECT_NEAR(a.point[1], 0.0, 1e-4);
  }
  EXPECT_EQ(at_infinity, 1);
}

TEST(DetectScp, PositiveParameter) {
  const SymmetricTensor B = scp_family(1.0);
  const TensorOutcome r = detect_scp(B);
  ASSERT_EQ(r.outcome.tag, OutcomeTag::KMeasureFound);
  EXPECT_EQ(r.outcome.order, 2);
  ASSERT_EQ(r.terms.size(), 5u);
  ASSERT_TRUE(r.outcome.lifted_measure);
  for (const auto& a : r.outcome.lifted_measure->atoms) {
    EXPECT_NEAR(a.weight, 2.0 * std::sqrt(2.0), 1e-4);
    EXPECT_NEAR(a.point[0], 1.0 / std::sqrt(2.0), 1e-4);
  }
  for (const auto& t : r.terms) {
    EXPECT_NEAR(t.weight, 1.0, 1e-4);
    EXPECT_GE(t.vector.minCoeff(), -1e-6);
  }
  expect_reconstruction(B, r);
}

TEST(DetectScp, ZeroParameterIsClosureOnly) {
  const TensorOutcome r = detect_scp(scp_family(0.0));
  ASSERT_EQ(r.outcome.tag, OutcomeTag::ClosureMeasureOnly);
  ASSERT_TRUE(r.outcome.lifted_measure);
  Eigen::VectorXd e5 = Eigen::VectorXd::Zero(6);
  e5[5] = 1.0;
  int hits = 0;
  for (const auto& a : r.outcome.lifted_measure->atoms) {
    if ((a.point - e5).cwiseAbs().maxCoeff() <= 1e-4) {
      ++hits;
      EXPECT_NEAR(a.weight, 1.0, 1e-4);
    }
  }
  EXPECT_EQ(hits, 1);
}

TEST(DetectScp, NegativeParameterIsInfeasible) {
  const TensorOutcome r = detect_scp(scp_family(-1.0));
  ASSERT_EQ(r.outcome.tag, OutcomeTag::Infeasible);
  EXPECT_EQ(r.outcome.order, 2);
  ASSERT_TRUE(r.outcome.certificate);
  EXPECT_LT(r.outcome.certificate->pairing_value, -1e-8);
  EXPECT_TRUE(r.terms.empty());
}

TEST(DetectScp, VectorsAreNonnegative) {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int found = 0;
  for (int trial = 0; trial < 3; ++trial) {
    SymmetricTensor B(3, 4);
    for (int r = 0; r < 2; ++r) {
      Eigen::VectorXd v(4);
      v << 1.0, u(rng), u(rng), u(rng);
      B.add_power(0.5 + u(rng), v);
    }
    const TensorOutcome r = detect_scp(B);
    if (r.outcome.tag != OutcomeTag::KMeasureFound) continue;
    ++found;
    for (const auto& t : r.terms) EXPECT_GE(t.vector.minCoeff(), -1e-6) << "trial " << trial;
    expect_reconstruction(B, r);
  }
  EXPECT_GT(found, 0);
}

TEST(TensorProblem, RowsAreEveryMonomial) {
  const SymmetricTensor B = staircase(2);
  const MomentProblemSpec s = tensor_problem(B, true);
  EXPECT_EQ(s.num_rows(), static_cast<int>(monomial_count(2, 3)));
  EXPECT_EQ(s.m1, s.num_rows());
  EXPECT_EQ(s.K.inequalities.size(), 2u);
  EXPECT_TRUE(tensor_problem(B, false).K.inequalities.empty());
  EXPECT_THROW(tensor_problem(SymmetricTensor(3, 1), false), PreconditionError);
}
