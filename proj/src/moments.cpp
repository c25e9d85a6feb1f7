#include "gtmp/moments.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "gtmp/errors.hpp"

namespace gtmp {

MonomialBasis::MonomialBasis(int num_vars, int max_degree)
    : num_vars_(num_vars), max_degree_(max_degree), monomials_(monomials_up_to(num_vars, max_degree)) {
  lookup_.reserve(monomials_.size());
  for (int i = 0; i < size(); ++i) lookup_.emplace(monomials_[i], i);
}

int MonomialBasis::find(const MultiIndex& index) const {
  auto it = lookup_.find(index);
  return it == lookup_.end() ? -1 : it->second;
}

int MonomialBasis::index_of(const MultiIndex& index) const {
  int i = find(index);
  if (i < 0) {
    throw PreconditionError("monomial " + index.to_string() + " outside degree " +
                            std::to_string(max_degree_) + " grid");
  }
  return i;
}

int MonomialBasis::count_up_to(int d) const {
  return static_cast<int>(monomial_count(num_vars_, std::min(d, max_degree_)));
}

std::shared_ptr<const MonomialBasis> shared_basis(int num_vars, int max_degree) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const MonomialBasis>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{num_vars, max_degree}];
  if (!slot) slot = std::make_shared<const MonomialBasis>(num_vars, max_degree);
  return slot;
}

FullTms::FullTms(std::shared_ptr<const MonomialBasis> b, Eigen::VectorXd v)
    : basis(std::move(b)), values(std::move(v)) {
  if (values.size() != basis->size()) throw DimensionMismatchError("tms length does not match grid");
}

FullTms FullTms::zeros(int num_vars, int order) {
  auto b = shared_basis(num_vars, 2 * order);
  return FullTms(b, Eigen::VectorXd::Zero(b->size()));
}

FullTms FullTms::truncate(int t) const {
  if (2 * t > basis->max_degree()) throw PreconditionError("truncation beyond tms order");
  auto b = shared_basis(num_vars(), 2 * t);
  // Graded order makes the truncation a prefix.
  return FullTms(b, values.head(b->size()));
}

HomTms homogenize_tms(const Tms& y) {
  if (static_cast<std::size_t>(y.values.size()) != y.support.size()) {
    throw DimensionMismatchError("tms values do not match support");
  }
  HomTms out;
  out.num_vars = y.support.num_vars() + 1;
  out.deg = y.support.deg();
  out.support = y.support.homogenized();
  // Relabeling preserves graded order, so values carry over unchanged.
  out.values = y.values;
  return out;
}

Tms dehomogenize_tms(const HomTms& y) {
  std::vector<MultiIndex> idx;
  idx.reserve(y.support.size());
  for (const auto& b : y.support) {
    if (b.degree() != y.deg) throw PreconditionError("homogeneous tms index has wrong degree");
    idx.push_back(b.drop_first());
  }
  Tms out;
  out.support = PowerSupport(y.num_vars - 1, std::move(idx));
  out.values = y.values;
  return out;
}

Tms restrict(const FullTms& w, const PowerSupport& support) {
  if (support.num_vars() != w.num_vars()) throw DimensionMismatchError("support arity does not match tms");
  Tms out;
  out.support = support;
  out.values.resize(static_cast<Eigen::Index>(support.size()));
  for (std::size_t i = 0; i < support.size(); ++i) {
    int j = w.basis->find(support[i]);
    if (j < 0) throw PreconditionError("support index " + support[i].to_string() + " beyond tms degree");
    out.values[static_cast<Eigen::Index>(i)] = w.values[j];
  }
  return out;
}

FullTms moments_of_measure(const std::vector<Atom>& atoms, int num_vars, int order) {
  auto basis = shared_basis(num_vars, 2 * order);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(basis->size());
  for (const auto& atom : atoms) {
    if (atom.point.size() != num_vars) throw DimensionMismatchError("atom dimension mismatch");
    for (int b = 0; b < basis->size(); ++b) {
      const MultiIndex& beta = (*basis)[b];
      double v = atom.weight;
      for (int i = 0; i < num_vars; ++i) {
        for (int e = 0; e < beta[i]; ++e) v *= atom.point[i];
      }
      w[b] += v;
    }
  }
  return FullTms(basis, std::move(w));
}

Eigen::MatrixXd MatrixMap::assemble(const Eigen::VectorXd& w) const {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(size, size);
  for (const auto& cell : cells) {
    double v = cell.constant;
    for (const auto& [j, c] : cell.terms) v += c * w[j];
    M(cell.row, cell.col) = v;
    M(cell.col, cell.row) = v;
  }
  return M;
}

void MatrixMap::add_adjoint(const Eigen::MatrixXd& Z, Eigen::VectorXd& out, double scale) const {
  for (const auto& cell : cells) {
    double z = cell.row == cell.col ? Z(cell.row, cell.row) : Z(cell.row, cell.col) + Z(cell.col, cell.row);
    z *= scale;
    for (const auto& [j, c] : cell.terms) out[j] += c * z;
  }
}

double MatrixMap::constant_pairing(const Eigen::MatrixXd& Z) const {
  double s = 0.0;
  for (const auto& cell : cells) {
    if (cell.constant == 0.0) continue;
    double z = cell.row == cell.col ? Z(cell.row, cell.row) : Z(cell.row, cell.col) + Z(cell.col, cell.row);
    s += cell.constant * z;
  }
  return s;
}

LocalizerPlan build_localizer(const Polynomial& q, int k) {
  if (q.degree() > 2 * k) {
    throw PreconditionError("localizer generator degree " + std::to_string(q.degree()) +
                            " exceeds 2k = " + std::to_string(2 * k));
  }
  const int n = q.num_vars();
  LocalizerPlan plan;
  plan.generator = q;
  plan.order = k;
  plan.w_basis = shared_basis(n, 2 * k);
  const int half = (q.degree() + 1) / 2;
  plan.row_basis = monomials_up_to(n, k - half);
  const int s = static_cast<int>(plan.row_basis.size());
  plan.map.size = s;
  plan.map.cells.reserve(static_cast<std::size_t>(s) * (s + 1) / 2);
  for (int i = 0; i < s; ++i) {
    for (int j = i; j < s; ++j) {
      MatrixCell cell;
      cell.row = i;
      cell.col = j;
      MultiIndex mij = plan.row_basis[i] + plan.row_basis[j];
      for (const auto& [gamma, c] : q.terms()) {
        int idx = plan.w_basis->index_of(gamma + mij);
        auto it = std::find_if(cell.terms.begin(), cell.terms.end(),
                               [idx](const auto& t) { return t.first == idx; });
        if (it == cell.terms.end()) {
          cell.terms.emplace_back(idx, c);
        } else {
          it->second += c;
        }
      }
      std::sort(cell.terms.begin(), cell.terms.end());
      plan.map.cells.push_back(std::move(cell));
    }
  }
  return plan;
}

LocalizerPlan build_moment_matrix(int num_vars, int k) {
  return build_localizer(Polynomial::constant(num_vars, 1.0), k);
}

}  // namespace gtmp
