#include "gtmp/relaxation.hpp"

#include <algorithm>
#include <map>
#include <random>

#include <Eigen/Eigenvalues>

#include "gtmp/errors.hpp"

namespace gtmp {
namespace {

int half_up(int deg) { return (deg + 1) / 2; }

SparseRow pair_with_grid(const Polynomial& p, const MonomialBasis& basis, double rhs) {
  SparseRow row;
  row.rhs = rhs;
  for (const auto& [beta, c] : p.terms()) row.terms.emplace_back(basis.index_of(beta), c);
  std::sort(row.terms.begin(), row.terms.end());
  return row;
}

void add_blocks(RelaxationInstance& inst) {
  const int k = inst.order;
  const auto& H = inst.lifted;
  for (std::size_t e = 0; e < H.eq_tuple.size(); ++e) {
    const int dg = H.eq_tuple[e].degree();
    if (dg > 2 * k || k - half_up(dg) < 0) continue;
    inst.zero_plans.push_back(build_localizer(H.eq_tuple[e], k));
    inst.zero_generator.push_back(static_cast<int>(e));
    inst.program.zero_blocks.push_back(inst.zero_plans.back().map);
  }
  for (std::size_t j = 0; j < H.ineq_tuple.size(); ++j) {
    const int dg = H.ineq_tuple[j].degree();
    if (dg > 2 * k || k - half_up(dg) < 0) continue;
    inst.psd_plans.push_back(build_localizer(H.ineq_tuple[j], k));
    inst.psd_generator.push_back(static_cast<int>(j));
    inst.program.psd_blocks.push_back(inst.psd_plans.back().map);
  }
  inst.psd_plans.push_back(build_moment_matrix(H.num_vars, k));
  inst.psd_generator.push_back(-1);
  inst.program.psd_blocks.push_back(inst.psd_plans.back().map);
}

void add_rows(RelaxationInstance& inst, const Eigen::VectorXd& b) {
  for (std::size_t i = 0; i < inst.a_hat.size(); ++i) {
    SparseRow row = pair_with_grid(inst.a_hat[i], *inst.basis, b[static_cast<Eigen::Index>(i)]);
    inst.a_rows.push_back(row);
    if (static_cast<int>(i) < inst.m1) {
      inst.program.eq_rows.push_back(std::move(row));
    } else {
      inst.program.ineq_rows.push_back(std::move(row));
    }
  }
}

}  // namespace

void MomentProblemSpec::validate() const {
  if (K.num_vars < 1) throw PreconditionError("problem needs at least one variable");
  if (support.size() == 0) throw PreconditionError("empty power support");
  if (support.num_vars() != K.num_vars) throw DimensionMismatchError("support arity does not match K");
  if (b_vals.size() != static_cast<Eigen::Index>(a_polys.size())) {
    throw DimensionMismatchError("row count does not match rhs count");
  }
  if (m1 < 0 || m1 > num_rows()) throw PreconditionError("m1 outside [0, m]");
  for (const auto& a : a_polys) {
    if (a.num_vars() != K.num_vars) throw DimensionMismatchError("row polynomial arity does not match K");
    for (const auto& [alpha, c] : a.terms()) {
      (void)c;
      if (!support.contains(alpha)) {
        throw PreconditionError("row polynomial term " + alpha.to_string() + " outside the support");
      }
    }
  }
}

int default_d1(int d) { return 2 * ((d + 2) / 2); }

Polynomial RelaxationInstance::psd_polynomial(int block) const {
  const int g = psd_generator[block];
  if (g < 0) return Polynomial::constant(lifted.num_vars, 1.0);
  return lifted.ineq_tuple[g];
}

Polynomial gram_objective(int d1, int num_vars, const Eigen::MatrixXd& R) {
  if (d1 < 2 || d1 % 2 != 0) throw PreconditionError("objective degree must be even and positive");
  const auto mons = monomials_up_to(num_vars, d1 / 2);
  const int N = static_cast<int>(mons.size());
  if (R.cols() != N) throw DimensionMismatchError("Gram factor width does not match the monomial count");
  const Eigen::MatrixXd G = R.transpose() * R;
  Polynomial f(num_vars);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) f.add_term(mons[i] + mons[j], G(i, j));
  }
  return f;
}

Polynomial random_interior_objective(int d1, int num_vars, std::uint64_t seed) {
  const int N = static_cast<int>(monomial_count(num_vars, d1 / 2));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd R(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) R(i, j) = gauss(rng);
  }
  return gram_objective(d1, num_vars, R);
}

RelaxationInstance build_moment_optimization(const MomentProblemSpec& spec, int k, const Polynomial& objective,
                                             double x0_floor) {
  spec.validate();
  const int n1 = spec.num_vars() + 1;
  if (objective.num_vars() != n1) throw DimensionMismatchError("objective must live in n + 1 variables");
  if (2 * k < std::max(objective.degree(), spec.deg())) throw PreconditionError("relaxation order too small");
  RelaxationInstance inst;
  inst.d = spec.deg();
  inst.d1 = objective.degree();
  inst.order = k;
  inst.f = objective;
  inst.lifted = lift_set(spec.K, x0_floor);
  inst.basis = shared_basis(n1, 2 * k);
  inst.m1 = spec.m1;
  for (const auto& a : spec.a_polys) inst.a_hat.push_back(homogenize(a, inst.d));

  inst.program.dim = inst.basis->size();
  inst.program.objective = Eigen::VectorXd::Zero(inst.program.dim);
  for (const auto& [beta, c] : objective.terms()) inst.program.objective[inst.basis->index_of(beta)] += c;
  add_rows(inst, spec.b_vals);
  add_blocks(inst);
  return inst;
}

RelaxationInstance build_relaxation(const MomentProblemSpec& spec, int k, const Polynomial& f, double x0_floor) {
  const int d1 = f.degree();
  if (d1 % 2 != 0 || d1 <= spec.deg()) throw PreconditionError("objective degree must be even and exceed deg(A)");
  if (2 * k < d1) throw PreconditionError("relaxation order below d1 / 2");
  return build_moment_optimization(spec, k, f, x0_floor);
}

RelaxationInstance build_cone_membership(const Tms& y, const SemialgebraicSet& K, int k) {
  if (y.support.num_vars() != K.num_vars) throw DimensionMismatchError("tms arity does not match K");
  if (static_cast<std::size_t>(y.values.size()) != y.support.size()) {
    throw DimensionMismatchError("tms values do not match support");
  }
  if (2 * k < y.support.deg()) throw PreconditionError("relaxation order below deg(A) / 2");
  const HomTms yh = homogenize_tms(y);
  const int n1 = yh.num_vars;
  RelaxationInstance inst;
  inst.d = yh.deg;
  inst.order = k;
  inst.f = Polynomial(n1);
  inst.lifted = lift_set(K);
  inst.basis = shared_basis(n1, 2 * k);
  inst.m1 = static_cast<int>(yh.support.size());
  for (const auto& beta : yh.support) inst.a_hat.push_back(Polynomial::monomial(beta));
  inst.program.dim = inst.basis->size();
  inst.program.objective = Eigen::VectorXd::Zero(inst.program.dim);
  add_rows(inst, yh.values);
  add_blocks(inst);
  return inst;
}

Polynomial gram_polynomial(int num_vars, const std::vector<MultiIndex>& basis, const Eigen::MatrixXd& G) {
  Polynomial p(num_vars);
  const int s = static_cast<int>(basis.size());
  for (int a = 0; a < s; ++a) {
    for (int b = 0; b < s; ++b) p.add_term(basis[a] + basis[b], G(a, b));
  }
  return p;
}

Polynomial SosDecomposition::expand() const {
  Polynomial out(num_vars);
  for (std::size_t j = 0; j < grams.size(); ++j) out += generators[j] * gram_polynomial(num_vars, bases[j], grams[j]);
  for (std::size_t h = 0; h < multipliers.size(); ++h) out += ideal_generators[h] * multipliers[h];
  return out;
}

double SosDecomposition::min_gram_eigenvalue() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& G : grams) {
    if (G.rows() == 0) continue;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
    m = std::min(m, es.eigenvalues()[0]);
  }
  return m;
}

SosProgram build_sos_membership(const Polynomial& p, const SemialgebraicSet& K, int k) {
  if (p.num_vars() != K.num_vars) throw DimensionMismatchError("polynomial arity does not match K");
  if (2 * k < p.degree()) throw PreconditionError("relaxation order below deg(p) / 2");
  SosProgram sp;
  sp.order = k;
  sp.lifted = lift_set(K);
  const int n1 = sp.lifted.num_vars;
  sp.target = homogenize(p);
  sp.layout.num_vars = n1;

  sp.layout.generators.push_back(Polynomial::constant(n1, 1.0));
  sp.layout.bases.push_back(monomials_up_to(n1, k));
  for (const auto& g : sp.lifted.ineq_tuple) {
    const int r = k - half_up(g.degree());
    if (r < 0) continue;
    sp.layout.generators.push_back(g);
    sp.layout.bases.push_back(monomials_up_to(n1, r));
  }
  for (const auto& h : sp.lifted.eq_tuple) {
    const int r = 2 * k - h.degree();
    if (r < 0) continue;
    sp.layout.ideal_generators.push_back(h);
    sp.multiplier_bases.push_back(monomials_up_to(n1, r));
  }

  auto grid = shared_basis(n1, 2 * k);
  std::vector<SparseRow> rows(static_cast<std::size_t>(grid->size()));
  for (const auto& [beta, c] : sp.target.terms()) rows[grid->index_of(beta)].rhs = c;
  auto add = [&](const MultiIndex& beta, int var, double c) {
    auto& terms = rows[grid->index_of(beta)].terms;
    terms.emplace_back(var, c);
  };

  int next = 0;
  for (std::size_t j = 0; j < sp.layout.bases.size(); ++j) {
    sp.gram_offset.push_back(next);
    const auto& B = sp.layout.bases[j];
    const int s = static_cast<int>(B.size());
    MatrixMap map;
    map.size = s;
    for (int a = 0; a < s; ++a) {
      for (int b = a; b < s; ++b) {
        const int var = next++;
        MatrixCell cell;
        cell.row = a;
        cell.col = b;
        cell.terms.emplace_back(var, 1.0);
        map.cells.push_back(std::move(cell));
        const double mult = a == b ? 1.0 : 2.0;
        for (const auto& [gamma, c] : sp.layout.generators[j].terms()) add(gamma + B[a] + B[b], var, mult * c);
      }
    }
    sp.program.psd_blocks.push_back(std::move(map));
  }
  for (std::size_t h = 0; h < sp.multiplier_bases.size(); ++h) {
    sp.multiplier_offset.push_back(next);
    for (const auto& m : sp.multiplier_bases[h]) {
      const int var = next++;
      for (const auto& [gamma, c] : sp.layout.ideal_generators[h].terms()) add(gamma + m, var, c);
    }
  }
  for (auto& row : rows) {
    std::map<int, double> merged;
    for (const auto& [v, c] : row.terms) merged[v] += c;
    row.terms.assign(merged.begin(), merged.end());
    if (!row.terms.empty() || row.rhs != 0.0) sp.program.eq_rows.push_back(std::move(row));
  }
  sp.program.dim = next;
  sp.program.objective = Eigen::VectorXd::Zero(next);
  return sp;
}

SosDecomposition SosProgram::decode(const Eigen::VectorXd& x) const {
  SosDecomposition d = layout;
  for (std::size_t j = 0; j < layout.bases.size(); ++j) {
    const int s = static_cast<int>(layout.bases[j].size());
    Eigen::MatrixXd G(s, s);
    int v = gram_offset[j];
    for (int a = 0; a < s; ++a) {
      for (int b = a; b < s; ++b) {
        G(a, b) = x[v];
        G(b, a) = x[v];
        ++v;
      }
    }
    d.grams.push_back(std::move(G));
  }
  for (std::size_t h = 0; h < multiplier_bases.size(); ++h) {
    Polynomial phi(layout.num_vars);
    int v = multiplier_offset[h];
    for (const auto& m : multiplier_bases[h]) phi.add_term(m, x[v++]);
    d.multipliers.push_back(std::move(phi));
  }
  return d;
}

}  // namespace gtmp
