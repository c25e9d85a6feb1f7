#include "gtmp/semialgebraic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gtmp/errors.hpp"

namespace gtmp {
namespace {

int half_degree(const Polynomial& p) { return std::max(1, (p.degree() + 1) / 2); }

}  // namespace

SemialgebraicSet SemialgebraicSet::whole_space(int num_vars) {
  SemialgebraicSet K;
  K.num_vars = num_vars;
  return K;
}

SemialgebraicSet SemialgebraicSet::nonnegative_orthant(int num_vars) {
  SemialgebraicSet K;
  K.num_vars = num_vars;
  for (int i = 0; i < num_vars; ++i) K.inequalities.push_back(Polynomial::variable(num_vars, i));
  return K;
}

int SemialgebraicSet::d_K() const {
  int d = 1;
  for (const auto& c : equalities) d = std::max(d, half_degree(c));
  for (const auto& c : inequalities) d = std::max(d, half_degree(c));
  return d;
}

bool SemialgebraicSet::contains(const Eigen::VectorXd& x, double tol) const {
  if (x.size() != num_vars) throw DimensionMismatchError("point dimension does not match K");
  for (const auto& c : equalities) {
    if (std::abs(c.evaluate(x)) > tol) return false;
  }
  for (const auto& c : inequalities) {
    if (c.evaluate(x) < -tol) return false;
  }
  return true;
}

int HomogenizedSet::d_K() const {
  int d = 1;
  for (const auto& c : eq_tuple) d = std::max(d, half_degree(c));
  for (const auto& c : ineq_tuple) d = std::max(d, half_degree(c));
  return d;
}

double HomogenizedSet::max_equality_violation(const Eigen::VectorXd& x) const {
  double worst = 0.0;
  for (const auto& c : eq_tuple) worst = std::max(worst, std::abs(c.evaluate(x)));
  return worst;
}

double HomogenizedSet::min_inequality_value(const Eigen::VectorXd& x) const {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& c : ineq_tuple) worst = std::min(worst, c.evaluate(x));
  return worst;
}

Polynomial sphere_polynomial(int lifted_vars) {
  Polynomial s = Polynomial::constant(lifted_vars, -1.0);
  for (int i = 0; i < lifted_vars; ++i) {
    std::vector<int> e(lifted_vars, 0);
    e[i] = 2;
    s.add_term(MultiIndex(std::move(e)), 1.0);
  }
  return s;
}

HomogenizedSet lift_set(const SemialgebraicSet& K, double x0_floor) {
  HomogenizedSet H;
  H.num_vars = K.num_vars + 1;
  for (const auto& c : K.equalities) {
    if (c.num_vars() != K.num_vars) throw DimensionMismatchError("equality constraint arity");
    H.eq_tuple.push_back(homogenize(c));
  }
  H.eq_tuple.push_back(sphere_polynomial(H.num_vars));
  for (const auto& c : K.inequalities) {
    if (c.num_vars() != K.num_vars) throw DimensionMismatchError("inequality constraint arity");
    H.ineq_tuple.push_back(homogenize(c));
  }
  Polynomial x0 = Polynomial::variable(H.num_vars, 0);
  if (x0_floor > 0.0) x0.add_term(MultiIndex::zero(H.num_vars), -x0_floor);
  H.ineq_tuple.push_back(x0);
  return H;
}

}  // namespace gtmp
