#include "gtmp/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "gtmp/errors.hpp"

namespace gtmp {

SymmetricTensor::SymmetricTensor(int order, int dim) : order_(order), dim_(dim) {
  if (order < 1 || dim < 1) throw PreconditionError("tensor order and dimension must be positive");
}

std::vector<int> SymmetricTensor::check(std::vector<int> indices) const {
  if (static_cast<int>(indices.size()) != order_) throw DimensionMismatchError("index tuple length differs from order");
  for (int i : indices) {
    if (i < 0 || i >= dim_) throw DimensionMismatchError("tensor index out of range");
  }
  std::sort(indices.begin(), indices.end());
  return indices;
}

double SymmetricTensor::at(std::vector<int> indices) const {
  auto it = values_.find(check(std::move(indices)));
  return it == values_.end() ? 0.0 : it->second;
}

void SymmetricTensor::set(std::vector<int> indices, double value) { values_[check(std::move(indices))] = value; }

void SymmetricTensor::add_power(double weight, const Eigen::VectorXd& v) {
  if (v.size() != dim_) throw DimensionMismatchError("vector length differs from tensor dimension");
  for (const auto& tup : sorted_tuples(order_, dim_)) {
    double p = weight;
    for (int i : tup) p *= v[i];
    values_[tup] += p;
  }
}

double SymmetricTensor::max_abs() const {
  double m = 0.0;
  for (const auto& [k, v] : values_) m = std::max(m, std::abs(v));
  return m;
}

double SymmetricTensor::max_difference(const SymmetricTensor& other) const {
  if (other.order_ != order_ || other.dim_ != dim_) throw DimensionMismatchError("tensor shapes differ");
  double m = 0.0;
  for (const auto& tup : sorted_tuples(order_, dim_)) m = std::max(m, std::abs(at(tup) - other.at(tup)));
  return m;
}

std::vector<std::vector<int>> SymmetricTensor::sorted_tuples(int order, int dim) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(order), 0);
  while (true) {
    out.push_back(cur);
    int pos = order - 1;
    while (pos >= 0 && cur[pos] == dim - 1) --pos;
    if (pos < 0) break;
    const int v = cur[pos] + 1;
    for (int j = pos; j < order; ++j) cur[j] = v;
  }
  return out;
}

std::vector<int> tuple_of(const MultiIndex& alpha, int order) {
  if (alpha.degree() > order) throw DimensionMismatchError("monomial degree exceeds tensor order");
  std::vector<int> tup(static_cast<std::size_t>(order - alpha.degree()), 0);
  for (int i = 0; i < alpha.num_vars(); ++i) {
    for (int e = 0; e < alpha[i]; ++e) tup.push_back(i + 1);
  }
  return tup;
}

Tms tensor_to_tms(const SymmetricTensor& B) {
  Tms y;
  y.support = PowerSupport::full(B.dim() - 1, B.order());
  y.values.resize(static_cast<Eigen::Index>(y.support.size()));
  for (std::size_t i = 0; i < y.support.size(); ++i) {
    y.values[static_cast<Eigen::Index>(i)] = B.at(tuple_of(y.support[i], B.order()));
  }
  return y;
}

SymmetricTensor tms_to_tensor(const Tms& y, int order) {
  const int n = y.support.num_vars();
  const PowerSupport full = PowerSupport::full(n, order);
  if (y.support.indices() != full.indices()) throw PreconditionError("tensor tms must be indexed by N^n_m");
  SymmetricTensor B(order, n + 1);
  for (std::size_t i = 0; i < full.size(); ++i) B.set(tuple_of(full[i], order), y.values[static_cast<Eigen::Index>(i)]);
  return B;
}

MomentProblemSpec tensor_problem(const SymmetricTensor& B, bool nonnegative) {
  const int n = B.dim() - 1;
  if (n < 1) throw PreconditionError("tensor dimension must be at least 2");
  MomentProblemSpec spec;
  spec.K = nonnegative ? SemialgebraicSet::nonnegative_orthant(n) : SemialgebraicSet::whole_space(n);
  const Tms y = tensor_to_tms(B);
  spec.support = y.support;
  for (const auto& a : y.support) spec.a_polys.push_back(Polynomial::monomial(a));
  spec.b_vals = y.values;
  spec.m1 = spec.num_rows();
  return spec;
}

namespace {

TensorOutcome detect(const SymmetricTensor& B, bool nonnegative, const GtmpOptions& opts) {
  TensorOutcome out;
  out.outcome = solve_gtmp(tensor_problem(B, nonnegative), opts);
  const auto& o = out.outcome;
  if (!o.measure) return out;
  for (const auto& a : o.measure->atoms) {
    if (o.tag == OutcomeTag::KMeasureFound) {
      Eigen::VectorXd v(a.point.size() + 1);
      v << 1.0, a.point;
      out.terms.push_back({a.weight, v});
    } else {
      out.terms.push_back({a.weight, a.point});
    }
  }
  SymmetricTensor rebuilt(B.order(), B.dim());
  for (const auto& t : out.terms) rebuilt.add_power(t.weight, t.vector);
  out.residual = rebuilt.max_difference(B);
  return out;
}

}  // namespace

TensorOutcome detect_psop(const SymmetricTensor& B, const GtmpOptions& opts) { return detect(B, false, opts); }
TensorOutcome detect_scp(const SymmetricTensor& B, const GtmpOptions& opts) { return detect(B, true, opts); }

}  // namespace gtmp
