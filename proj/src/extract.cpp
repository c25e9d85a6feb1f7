#include "gtmp/extract.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "gtmp/errors.hpp"

namespace gtmp {
namespace {

Eigen::VectorXd sorted_singular_values(const Eigen::MatrixXd& M) {
  if (M.rows() == 0) return Eigen::VectorXd();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  Eigen::VectorXd s = es.eigenvalues().cwiseAbs();
  std::sort(s.data(), s.data() + s.size(), std::greater<double>());
  return s;
}

bool lex_less(const Atom& a, const Atom& b) {
  for (Eigen::Index i = 0; i < a.point.size(); ++i) {
    if (a.point[i] != b.point[i]) return a.point[i] > b.point[i];
  }
  return a.weight > b.weight;
}

// Gauss-Newton onto the lifted constraints over the x block; x0 stays put.
Eigen::VectorXd project_fixed_x0(const HomogenizedSet& lifted, Eigen::VectorXd p) {
  const int N = lifted.num_vars;
  std::vector<Polynomial> cons;
  std::vector<bool> is_eq;
  for (const auto& c : lifted.eq_tuple) { cons.push_back(c); is_eq.push_back(true); }
  for (const auto& c : lifted.ineq_tuple) { cons.push_back(c); is_eq.push_back(false); }
  std::vector<std::vector<Polynomial>> grads(cons.size());
  for (std::size_t c = 0; c < cons.size(); ++c) {
    for (int i = 1; i < N; ++i) grads[c].push_back(derivative(cons[c], i));
  }

  for (int step = 0; step < 100; ++step) {
    std::vector<int> active;
    Eigen::VectorXd r(cons.size());
    for (std::size_t c = 0; c < cons.size(); ++c) {
      const double v = cons[c].evaluate(p);
      if (is_eq[c] || v < 0.0) {
        r[static_cast<Eigen::Index>(active.size())] = v;
        active.push_back(static_cast<int>(c));
      }
    }
    r.conservativeResize(static_cast<Eigen::Index>(active.size()));
    if (r.size() == 0 || r.lpNorm<Eigen::Infinity>() <= 1e-11) return p;
    Eigen::MatrixXd J(r.size(), N - 1);
    for (Eigen::Index a = 0; a < r.size(); ++a) {
      for (int i = 1; i < N; ++i) J(a, i - 1) = grads[active[a]][i - 1].evaluate(p);
    }
    p.tail(N - 1) += J.completeOrthogonalDecomposition().solve(-r);
  }
  throw ProjectionFailure("constraint correction did not converge in 100 steps");
}

}  // namespace

int numerical_rank(const Eigen::VectorXd& s, double tol) {
  if (s.size() == 0) return 0;
  const double cut = tol * std::max(s.maxCoeff(), 1.0);
  return static_cast<int>((s.array() > cut).count());
}

Eigen::MatrixXd moment_matrix(const FullTms& w, int t) {
  if (2 * t > w.basis->max_degree()) throw PreconditionError("moment matrix order exceeds tms order");
  const int s = w.basis->count_up_to(t);
  Eigen::MatrixXd M(s, s);
  for (int i = 0; i < s; ++i) {
    for (int j = i; j < s; ++j) {
      M(i, j) = M(j, i) = w.values[w.basis->index_of((*w.basis)[i] + (*w.basis)[j])];
    }
  }
  return M;
}

FlatReport check_flat(const FullTms& w, int t, int d_K, double tol) {
  if (t < d_K) throw PreconditionError("flatness needs t >= d_K");
  FlatReport r;
  r.t = t;
  r.d_K = d_K;
  r.tol = tol;
  r.sing_high = sorted_singular_values(moment_matrix(w, t));
  r.sing_low = sorted_singular_values(moment_matrix(w, t - d_K));
  r.rank_high = numerical_rank(r.sing_high, tol);
  r.rank_low = numerical_rank(r.sing_low, tol);
  r.flat = r.rank_low == r.rank_high;
  return r;
}

double AtomicMeasure::total_weight() const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.weight;
  return s;
}

Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  const Eigen::Index n = A.cols();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  const double tol = 10.0 * std::numeric_limits<double>::epsilon() * A.cwiseAbs().colwise().sum().maxCoeff() *
                     static_cast<double>(std::max(A.rows(), n));

  auto solve_passive = [&]() {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j) if (passive[j]) idx.push_back(j);
    Eigen::MatrixXd Ap(A.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) Ap.col(static_cast<Eigen::Index>(k)) = A.col(idx[k]);
    Eigen::VectorXd sp = Ap.colPivHouseholderQr().solve(b);
    Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
    for (std::size_t k = 0; k < idx.size(); ++k) s[idx[k]] = sp[static_cast<Eigen::Index>(k)];
    return s;
  };

  Eigen::VectorXd g = A.transpose() * (b - A * x);
  for (int outer = 0; outer < 3 * n + 10; ++outer) {
    Eigen::Index best = -1;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[j] && g[j] > tol && (best < 0 || g[j] > g[best])) best = j;
    }
    if (best < 0) break;
    passive[best] = true;
    Eigen::VectorXd s = solve_passive();
    for (int inner = 0; inner < 3 * n + 10; ++inner) {
      bool ok = true;
      for (Eigen::Index j = 0; j < n; ++j) if (passive[j] && s[j] <= 0.0) ok = false;
      if (ok) break;
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && s[j] <= 0.0) alpha = std::min(alpha, x[j] / (x[j] - s[j]));
      }
      x += alpha * (s - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && x[j] <= tol) { passive[j] = false; x[j] = 0.0; }
      }
      s = solve_passive();
    }
    x = s;
    g = A.transpose() * (b - A * x);
  }
  return x.cwiseMax(0.0);
}

AtomicMeasure extract_atoms(const FullTms& w, int t, const ExtractOptions& opts, std::vector<std::string>* log) {
  if (t < 1) throw PreconditionError("extraction needs t >= 1");
  const int N = w.num_vars();
  const MonomialBasis& basis = *w.basis;
  const int rows = basis.count_up_to(t);
  const int low = basis.count_up_to(t - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(moment_matrix(w, t));
  if (es.info() != Eigen::Success) throw EigenDecompositionFailure("eigendecomposition of M_t failed");
  Eigen::VectorXd mags = es.eigenvalues().cwiseAbs();
  std::sort(mags.data(), mags.data() + mags.size(), std::greater<double>());
  const int r = numerical_rank(mags, opts.rank_tol);
  if (r == 0) throw EigenDecompositionFailure("moment matrix is numerically zero");

  // Gram factor M_t ~ L L' over the r dominant eigenpairs.
  Eigen::MatrixXd L(rows, r);
  for (int j = 0; j < r; ++j) {
    const int src = rows - 1 - j;
    L.col(j) = es.eigenvectors().col(src) * std::sqrt(std::max(es.eigenvalues()[src], 0.0));
  }
  const Eigen::MatrixXd L_low = L.topRows(low);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(L_low);
  qr.setThreshold(opts.rank_tol);
  if (qr.rank() < r) {
    throw EigenDecompositionFailure("rank of M_{t-1} is below rank of M_t; column space has no shift-closed basis");
  }

  std::vector<Eigen::MatrixXd> Ni(N);
  for (int i = 0; i < N; ++i) {
    Eigen::MatrixXd shifted(low, r);
    for (int j = 0; j < low; ++j) shifted.row(j) = L.row(basis.index_of(basis[j] + MultiIndex::unit(N, i)));
    Ni[i] = qr.solve(shifted);
  }

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unif(0.1, 1.0);
  Eigen::MatrixXd comb = Eigen::MatrixXd::Zero(r, r);
  double csum = 0.0;
  for (int i = 0; i < N; ++i) {
    const double c = unif(rng);
    comb += c * Ni[i];
    csum += c;
  }
  comb /= csum;
  // The operators are symmetric in exact arithmetic, so the ordered Schur
  // form of the combination is its eigendecomposition.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> schur(0.5 * (comb + comb.transpose()));
  if (schur.info() != Eigen::Success) throw EigenDecompositionFailure("Schur decomposition failed");
  const Eigen::MatrixXd& Q = schur.eigenvectors();

  std::vector<Atom> atoms(static_cast<std::size_t>(r));
  for (auto& a : atoms) a.point.resize(N);
  double worst = 0.0;
  for (int i = 0; i < N; ++i) {
    const Eigen::MatrixXd D = Q.transpose() * Ni[i] * Q;
    const double off = (D - Eigen::MatrixXd(D.diagonal().asDiagonal())).norm();
    worst = std::max(worst, off / std::max(1.0, Ni[i].norm()));
    for (int j = 0; j < r; ++j) atoms[j].point[i] = D(j, j);
  }
  if (worst > opts.commute_tol) {
    std::ostringstream os;
    os << "multiplication operators are not jointly diagonalizable (off-diagonal " << worst << ")";
    throw EigenDecompositionFailure(os.str());
  }
  for (auto& a : atoms) {
    const double nrm = a.point.norm();
    if (nrm < 1e-12) throw EigenDecompositionFailure("extracted atom at the origin");
    a.point /= nrm;
  }

  const int m2 = basis.count_up_to(2 * t);
  Eigen::MatrixXd V(m2, r);
  for (int j = 0; j < r; ++j) {
    Atom unit{atoms[j].point, 1.0};
    V.col(j) = moments_of_measure({unit}, N, t).values;
  }
  const Eigen::VectorXd rho = nnls(V, w.values.head(m2));
  const double total = rho.sum();

  AtomicMeasure nu;
  nu.space = MeasureSpace::Lifted;
  int dropped = 0;
  for (int j = 0; j < r; ++j) {
    if (rho[j] < opts.weight_drop * total || rho[j] <= 0.0) {
      ++dropped;
      continue;
    }
    atoms[j].weight = rho[j];
    nu.atoms.push_back(atoms[j]);
  }
  if (nu.atoms.empty()) throw EigenDecompositionFailure("no atom kept a positive weight");
  std::sort(nu.atoms.begin(), nu.atoms.end(), lex_less);

  if (log) {
    std::ostringstream os;
    os << "extract t=" << t << " rank=" << r << " commute=" << worst;
    if (dropped) os << " dropped " << dropped << " atom(s) below weight threshold";
    log->push_back(os.str());
  }
  return nu;
}

DehomogenizedMeasure dehomogenize_measure(const AtomicMeasure& nu, int d, double tau_tol) {
  if (nu.space != MeasureSpace::Lifted) throw PreconditionError("dehomogenize_measure needs a lifted measure");
  DehomogenizedMeasure out;
  out.measure.space = MeasureSpace::Original;
  for (const auto& a : nu.atoms) {
    const double tau = a.point[0];
    out.tau.push_back(tau);
    if (tau <= tau_tol) {
      out.zero_tau_atoms.push_back(a);
      continue;
    }
    const Eigen::Index n = a.point.size() - 1;
    out.measure.atoms.push_back(Atom{a.point.tail(n) / tau, a.weight * std::pow(tau, d)});
  }
  out.all_positive = out.zero_tau_atoms.empty();
  if (!out.all_positive) out.measure.atoms.clear();
  return out;
}

std::vector<AtomicMeasure> approximate_sequence(const AtomicMeasure& nu, int d, const std::vector<double>& eps_schedule,
                                                const HomogenizedSet& lifted, double tau_tol) {
  if (nu.space != MeasureSpace::Lifted) throw PreconditionError("approximate_sequence needs a lifted measure");
  std::vector<AtomicMeasure> out;
  for (double eps : eps_schedule) {
    if (!(eps > 0.0)) throw PreconditionError("approximation schedule entries must be positive");
    AtomicMeasure mu;
    mu.space = MeasureSpace::Original;
    for (const auto& a : nu.atoms) {
      Eigen::VectorXd p = a.point;
      if (p[0] <= tau_tol) {
        p[0] = eps;
        p /= p.norm();
        p = project_fixed_x0(lifted, p);
      }
      const Eigen::Index n = p.size() - 1;
      mu.atoms.push_back(Atom{p.tail(n) / p[0], a.weight * std::pow(p[0], d)});
    }
    out.push_back(std::move(mu));
  }
  return out;
}

}  // namespace gtmp
