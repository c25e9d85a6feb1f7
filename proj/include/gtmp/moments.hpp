#pragma once

#include <memory>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gtmp/poly.hpp"

namespace gtmp {

// Monomials of degree <= max_degree in graded lexicographic order, with a
// reverse lookup. Shared between every object indexed over the same grid.
class MonomialBasis {
 public:
  MonomialBasis(int num_vars, int max_degree);

  int num_vars() const { return num_vars_; }
  int max_degree() const { return max_degree_; }
  int size() const { return static_cast<int>(monomials_.size()); }
  const MultiIndex& operator[](int i) const { return monomials_[i]; }
  const std::vector<MultiIndex>& monomials() const { return monomials_; }
  // -1 when the index is not in the basis.
  int find(const MultiIndex& index) const;
  int index_of(const MultiIndex& index) const;  // throws when absent
  // Number of leading entries with degree <= d.
  int count_up_to(int d) const;

 private:
  int num_vars_;
  int max_degree_;
  std::vector<MultiIndex> monomials_;
  std::unordered_map<MultiIndex, int, MultiIndexHash> lookup_;
};

std::shared_ptr<const MonomialBasis> shared_basis(int num_vars, int max_degree);

// y = (y_alpha) over a power support A.
struct Tms {
  PowerSupport support;
  Eigen::VectorXd values;
};

// y~ over A~ (every index homogeneous of degree d in n + 1 variables).
struct HomTms {
  int num_vars = 0;
  int deg = 0;
  PowerSupport support;
  Eigen::VectorXd values;
};

// w over the full grid N^{n+1}_{2k}.
struct FullTms {
  std::shared_ptr<const MonomialBasis> basis;
  Eigen::VectorXd values;

  FullTms() = default;
  FullTms(std::shared_ptr<const MonomialBasis> b, Eigen::VectorXd v);
  static FullTms zeros(int num_vars, int order);

  int num_vars() const { return basis->num_vars(); }
  int order() const { return basis->max_degree() / 2; }
  double operator()(const MultiIndex& index) const { return values[basis->index_of(index)]; }
  // w|_{2t}
  FullTms truncate(int t) const;
};

struct Atom {
  Eigen::VectorXd point;
  double weight = 0.0;
};

HomTms homogenize_tms(const Tms& y);
Tms dehomogenize_tms(const HomTms& y);
// Subvector of w at the indices of support, in support order.
Tms restrict(const FullTms& w, const PowerSupport& support);
// w_beta = sum_k weight_k * point_k^beta over N^{num_vars}_{2 order}.
FullTms moments_of_measure(const std::vector<Atom>& atoms, int num_vars, int order);

// An affine symmetric-matrix-valued map of w. Only the upper triangle
// (row <= col) is stored; the lower triangle mirrors it.
struct MatrixCell {
  int row = 0;
  int col = 0;
  std::vector<std::pair<int, double>> terms;  // (w index, coefficient)
  double constant = 0.0;
};

struct MatrixMap {
  int size = 0;
  std::vector<MatrixCell> cells;

  Eigen::MatrixXd assemble(const Eigen::VectorXd& w) const;
  // The adjoint: out_j = <F_j, Z> where F_j is the coefficient matrix of w_j.
  void add_adjoint(const Eigen::MatrixXd& Z, Eigen::VectorXd& out, double scale = 1.0) const;
  double constant_pairing(const Eigen::MatrixXd& Z) const;
};

// L_q^{(k)} as a linear map of w; q = 1 gives the moment matrix M_k.
struct LocalizerPlan {
  Polynomial generator;
  int order = 0;
  std::shared_ptr<const MonomialBasis> w_basis;
  std::vector<MultiIndex> row_basis;
  MatrixMap map;

  int size() const { return map.size; }
  Eigen::MatrixXd assemble(const FullTms& w) const { return map.assemble(w.values); }
  Eigen::MatrixXd assemble(const Eigen::VectorXd& w) const { return map.assemble(w); }
};

LocalizerPlan build_localizer(const Polynomial& q, int k);
LocalizerPlan build_moment_matrix(int num_vars, int k);

}  // namespace gtmp
