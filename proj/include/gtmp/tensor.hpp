#pragma once

#include <map>
#include <vector>

#include <Eigen/Dense>

#include "gtmp/engine.hpp"
#include "gtmp/moments.hpp"

namespace gtmp {

// Entries keyed by sorted index tuples i1 <= ... <= im over 0..dim-1.
// Missing entries are zero.
class SymmetricTensor {
 public:
  SymmetricTensor() = default;
  SymmetricTensor(int order, int dim);

  int order() const { return order_; }
  int dim() const { return dim_; }
  const std::map<std::vector<int>, double>& values() const { return values_; }

  // Indices in any order; they are sorted before lookup.
  double at(std::vector<int> indices) const;
  void set(std::vector<int> indices, double value);
  // this += weight * v^{(x) m}
  void add_power(double weight, const Eigen::VectorXd& v);
  double max_abs() const;
  // max over sorted tuples of |this - other|.
  double max_difference(const SymmetricTensor& other) const;

  // Every sorted tuple, in lexicographic order.
  static std::vector<std::vector<int>> sorted_tuples(int order, int dim);

 private:
  std::vector<int> check(std::vector<int> indices) const;

  int order_ = 0;
  int dim_ = 0;
  std::map<std::vector<int>, double> values_;
};

// b_alpha = B_{i1..im} with x0^{m-|alpha|} x^alpha = x_{i1} ... x_{im}.
Tms tensor_to_tms(const SymmetricTensor& B);
SymmetricTensor tms_to_tensor(const Tms& y, int order);

// (x0, x) index tuple of the monomial x0^{m-|alpha|} x^alpha.
std::vector<int> tuple_of(const MultiIndex& alpha, int order);

struct TensorTerm {
  double weight = 0.0;
  Eigen::VectorXd vector;  // (1, v) for KMeasureFound, the lifted atom otherwise
};

struct TensorOutcome {
  GtmpOutcome outcome;
  std::vector<TensorTerm> terms;  // B = sum weight * vector^{(x) m}
  double residual = 0.0;          // max entry error of the rebuilt tensor
};

// The GTMP whose rows are every monomial of A = N^n_m with b = tensor_to_tms(B).
MomentProblemSpec tensor_problem(const SymmetricTensor& B, bool nonnegative);

TensorOutcome detect_psop(const SymmetricTensor& B, const GtmpOptions& opts = {});
TensorOutcome detect_scp(const SymmetricTensor& B, const GtmpOptions& opts = {});

}  // namespace gtmp
