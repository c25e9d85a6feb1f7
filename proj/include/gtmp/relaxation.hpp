#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "gtmp/conic.hpp"
#include "gtmp/moments.hpp"
#include "gtmp/poly.hpp"
#include "gtmp/semialgebraic.hpp"

namespace gtmp {

// <a_i, y> = b_i for i < m1 and <a_i, y> >= b_i otherwise, over A-tms y
// admitting a K-representing measure.
struct MomentProblemSpec {
  SemialgebraicSet K;
  PowerSupport support;
  std::vector<Polynomial> a_polys;
  Eigen::VectorXd b_vals;
  int m1 = 0;

  int num_vars() const { return K.num_vars; }
  int deg() const { return support.deg(); }
  int num_rows() const { return static_cast<int>(a_polys.size()); }
  void validate() const;
};

// Smallest even d1 > d.
int default_d1(int d);

struct RelaxationInstance {
  int order = 0;
  int d1 = 0;
  int d = 0;
  Polynomial f;
  HomogenizedSet lifted;
  std::shared_ptr<const MonomialBasis> basis;  // grid of w

  // Homogenized rows a^_i and their pairing with w, in input order. The
  // first m1 are program.eq_rows, the rest program.ineq_rows.
  std::vector<Polynomial> a_hat;
  std::vector<SparseRow> a_rows;
  int m1 = 0;

  ConicProgram program;
  // Block i of program.zero_blocks localizes lifted.eq_tuple[zero_generator[i]];
  // psd block i localizes lifted.ineq_tuple[psd_generator[i]], or is M_k when -1.
  std::vector<LocalizerPlan> zero_plans;
  std::vector<int> zero_generator;
  std::vector<LocalizerPlan> psd_plans;
  std::vector<int> psd_generator;

  // The polynomial a block multiplier is attached to.
  const Polynomial& zero_polynomial(int block) const { return lifted.eq_tuple[zero_generator[block]]; }
  Polynomial psd_polynomial(int block) const;
};

// [x~]_{d0}' R'R [x~]_{d0} over all monomials of degree <= d0 = d1 / 2 in
// (x0, x), with R standard Gaussian from the seed.
Polynomial random_interior_objective(int d1, int num_vars, std::uint64_t seed);
// Same construction with an explicit R (square, side = number of monomials).
Polynomial gram_objective(int d1, int num_vars, const Eigen::MatrixXd& R);

RelaxationInstance build_relaxation(const MomentProblemSpec& spec, int k, const Polynomial& f,
                                    double x0_floor = 0.0);

// Same blocks and rows under an arbitrary objective of degree <= 2k.
RelaxationInstance build_moment_optimization(const MomentProblemSpec& spec, int k, const Polynomial& objective,
                                             double x0_floor = 0.0);

// Feasibility of w|_A~ = y~ under the same block list.
RelaxationInstance build_cone_membership(const Tms& y, const SemialgebraicSet& K, int k);

// p~ = sum_j g_j sigma_j + sum_h h phi_h, with g_0 = 1, the remaining g_j
// taken from lifted.ineq_tuple, and h from lifted.eq_tuple.
struct SosDecomposition {
  int num_vars = 0;
  std::vector<Polynomial> generators;          // g_j
  std::vector<std::vector<MultiIndex>> bases;  // monomial basis of each Gram matrix
  std::vector<Eigen::MatrixXd> grams;          // sigma_j = m' G_j m
  std::vector<Polynomial> ideal_generators;    // h
  std::vector<Polynomial> multipliers;         // phi_h

  Polynomial expand() const;
  double min_gram_eigenvalue() const;
};

struct SosProgram {
  int order = 0;
  Polynomial target;  // p~
  HomogenizedSet lifted;
  ConicProgram program;
  SosDecomposition layout;  // generators and bases; grams/multipliers empty
  std::vector<int> gram_offset;
  std::vector<int> multiplier_offset;
  std::vector<std::vector<MultiIndex>> multiplier_bases;

  SosDecomposition decode(const Eigen::VectorXd& x) const;
};

SosProgram build_sos_membership(const Polynomial& p, const SemialgebraicSet& K, int k);

// sum_i x^{m_i + m_j} G_ij.
Polynomial gram_polynomial(int num_vars, const std::vector<MultiIndex>& basis, const Eigen::MatrixXd& G);

}  // namespace gtmp
