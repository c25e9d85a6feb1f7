#pragma once

#include <vector>

#include "gtmp/poly.hpp"

namespace gtmp {

// K = {x in R^n : c_i(x) = 0 (i in E), c_j(x) >= 0 (j in I)}.
// closed_at_infinity is taken on trust from the caller; nothing checks it.
struct SemialgebraicSet {
  int num_vars = 0;
  std::vector<Polynomial> equalities;
  std::vector<Polynomial> inequalities;
  bool closed_at_infinity = true;

  static SemialgebraicSet whole_space(int num_vars);
  static SemialgebraicSet nonnegative_orthant(int num_vars);

  // max over constraints of max(1, ceil(deg/2)); 1 when there are none.
  int d_K() const;
  bool contains(const Eigen::VectorXd& x, double tol) const;
};

// The lift of K into (x0, x): homogenized equalities plus ||x~||^2 - 1, and
// homogenized inequalities plus x0. Variable 0 is always x0.
struct HomogenizedSet {
  int num_vars = 0;
  std::vector<Polynomial> eq_tuple;
  std::vector<Polynomial> ineq_tuple;

  int d_K() const;
  // Largest equality violation and most negative inequality value at x.
  double max_equality_violation(const Eigen::VectorXd& x) const;
  double min_inequality_value(const Eigen::VectorXd& x) const;
};

// ||x~||^2 - 1 over n + 1 variables.
Polynomial sphere_polynomial(int lifted_vars);

// With x0_floor > 0 the generator x0 is replaced by x0 - x0_floor.
HomogenizedSet lift_set(const SemialgebraicSet& K, double x0_floor = 0.0);

}  // namespace gtmp
