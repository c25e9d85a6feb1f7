#include "gtmp/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "gtmp/errors.hpp"

namespace gtmp {
namespace {

double max_residual(const KktReport& r) { return std::max(r.primal(), r.dual); }

OrderTrace trace_entry(int attempt, std::uint64_t seed, int k, const ConicSolution& sol) {
  OrderTrace t;
  t.attempt = attempt;
  t.seed = seed;
  t.k = k;
  t.status = sol.status;
  t.near_optimal = sol.near_optimal;
  t.iterations = sol.iterations;
  t.primal_residual = sol.residuals.primal();
  t.dual_residual = sol.residuals.dual;
  t.gap = sol.residuals.gap;
  if (sol.status != SolveStatus::Optimal && sol.near_optimal) {
    std::ostringstream os;
    os << "accepted near-optimal iterate (solver stopped with " << to_string(sol.status) << ", max residual "
       << max_residual(sol.residuals) << ")";
    t.notes.push_back(os.str());
  }
  return t;
}

bool usable(const ConicSolution& sol) { return sol.status == SolveStatus::Optimal || sol.near_optimal; }

bool has_ray(const ConicSolution& sol) {
  return sol.status == SolveStatus::PrimalInfeasible && sol.certificate_ray.has_value();
}

int half_up(int d) { return (d + 1) / 2; }

double scaled_value(const Polynomial& c, const Eigen::VectorXd& u) {
  const double s = std::pow(std::max(1.0, std::sqrt(1.0 + u.squaredNorm())), c.degree());
  return c.evaluate(u) / s;
}

std::vector<std::string> undetermined_reasons() {
  return {"finitely many KKT points of the moment optimization: not checkable",
          "finite-convergence membership of the objective: not checkable"};
}

// Tries flat truncations of w from t_start to k; returns the first extracted
// lifted measure and its t.
std::optional<std::pair<AtomicMeasure, int>> scan_flat(const FullTms& w, int t_start, int d_K,
                                                       const GtmpOptions& opts, std::uint64_t seed,
                                                       OrderTrace& tr) {
  for (int t = std::max(t_start, d_K); t <= w.order(); ++t) {
    FlatReport fr = check_flat(w, t, d_K, opts.rank_tol);
    tr.flats.push_back(fr);
    if (!fr.flat) continue;
    try {
      ExtractOptions eo;
      eo.rank_tol = opts.rank_tol;
      eo.seed = seed;
      AtomicMeasure nu = extract_atoms(w, t, eo, &tr.notes);
      return std::make_pair(std::move(nu), t);
    } catch (const EigenDecompositionFailure& e) {
      tr.notes.push_back(std::string("extraction failed at t=") + std::to_string(t) + ": " + e.what());
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace

std::string to_string(OutcomeTag tag) {
  switch (tag) {
    case OutcomeTag::KMeasureFound: return "KMeasureFound";
    case OutcomeTag::ClosureMeasureOnly: return "ClosureMeasureOnly";
    case OutcomeTag::Infeasible: return "Infeasible";
    case OutcomeTag::Undetermined: return "Undetermined";
  }
  return "Unknown";
}

std::string to_string(MembershipTag tag) {
  switch (tag) {
    case MembershipTag::InRelaxation: return "InRelaxation";
    case MembershipTag::NotInClosure: return "NotInClosure";
    case MembershipTag::Undetermined: return "Undetermined";
  }
  return "Unknown";
}

std::string to_string(RationalTag tag) {
  switch (tag) {
    case RationalTag::Solved: return "Solved";
    case RationalTag::NormalizationInfeasible: return "NormalizationInfeasible";
    case RationalTag::Undetermined: return "Undetermined";
  }
  return "Unknown";
}

CertificateCheck verify_certificate(const NonexistenceCertificate& cert, const std::vector<Polynomial>& a_hat,
                                    const Eigen::VectorXd& b, int m1, double tol) {
  CertificateCheck c;
  if (cert.theta.size() != static_cast<Eigen::Index>(a_hat.size()) || b.size() != cert.theta.size()) {
    c.residual = std::numeric_limits<double>::infinity();
    return c;
  }
  const int N = cert.q.num_vars();
  Polynomial comb(N);
  for (std::size_t i = 0; i < a_hat.size(); ++i) comb += a_hat[i] * cert.theta[static_cast<Eigen::Index>(i)];
  c.combination = comb.max_coefficient_difference(cert.q);
  c.residual = cert.decomposition.expand().max_coefficient_difference(cert.q);
  c.pairing = cert.theta.dot(b);
  c.min_gram_eigenvalue = cert.decomposition.grams.empty() ? 0.0 : cert.decomposition.min_gram_eigenvalue();
  for (Eigen::Index i = m1; i < cert.theta.size(); ++i) c.sign_violation = std::max(c.sign_violation, cert.theta[i]);
  c.valid = c.residual <= tol && c.combination <= tol && c.pairing < -1e-8 && c.min_gram_eigenvalue >= -tol &&
            c.sign_violation <= tol;
  return c;
}

NonexistenceCertificate certify_nonexistence(const ConicSolution& sol, const RelaxationInstance& ctx) {
  if (!has_ray(sol)) throw PreconditionError("certificate needs a primal-infeasible solution with a dual ray");
  const DualRay& ray = *sol.certificate_ray;
  const RayReport rr = check_ray(ctx.program, ray, 1e-6);
  if (!rr.valid) {
    std::ostringstream os;
    os << "dual ray failed verification (residual " << rr.residual << ", cone " << rr.cone_violation << ", pairing "
       << rr.pairing << ")";
    throw CertificateAssemblyFailure(os.str());
  }

  NonexistenceCertificate cert;
  cert.order = ctx.order;
  const int N = ctx.lifted.num_vars;
  const int m = static_cast<int>(ctx.a_hat.size());
  cert.theta.resize(m);
  Eigen::VectorXd b(m);
  for (int i = 0; i < m; ++i) {
    cert.theta[i] = i < ctx.m1 ? ray.eq[i] : -ray.ineq[i - ctx.m1];
    b[i] = ctx.a_rows[static_cast<std::size_t>(i)].rhs;
  }
  cert.q = Polynomial(N);
  for (int i = 0; i < m; ++i) cert.q += ctx.a_hat[static_cast<std::size_t>(i)] * cert.theta[i];

  SosDecomposition& dec = cert.decomposition;
  dec.num_vars = N;
  for (std::size_t blk = 0; blk < ctx.psd_plans.size(); ++blk) {
    dec.generators.push_back(ctx.psd_polynomial(static_cast<int>(blk)));
    dec.bases.push_back(ctx.psd_plans[blk].row_basis);
    dec.grams.push_back(ray.psd[blk]);
  }
  for (std::size_t blk = 0; blk < ctx.zero_plans.size(); ++blk) {
    dec.ideal_generators.push_back(ctx.zero_polynomial(static_cast<int>(blk)));
    dec.multipliers.push_back(gram_polynomial(N, ctx.zero_plans[blk].row_basis, -ray.zero[blk]));
  }

  const CertificateCheck chk = verify_certificate(cert, ctx.a_hat, b, ctx.m1);
  cert.pairing_value = chk.pairing;
  cert.residual = chk.residual;
  cert.min_gram_eigenvalue = chk.min_gram_eigenvalue;
  if (!chk.valid) {
    std::ostringstream os;
    os << "certificate re-verification failed (residual " << chk.residual << ", pairing " << chk.pairing
       << ", min Gram eigenvalue " << chk.min_gram_eigenvalue << ")";
    throw CertificateAssemblyFailure(os.str());
  }
  return cert;
}

RowCheck check_measure_rows(const MomentProblemSpec& spec, const AtomicMeasure& mu, double tol) {
  RowCheck rc;
  double worst = -1.0;
  for (int i = 0; i < spec.num_rows(); ++i) {
    double v = 0.0;
    for (const auto& a : mu.atoms) v += a.weight * spec.a_polys[static_cast<std::size_t>(i)].evaluate(a.point);
    const double b = spec.b_vals[i];
    const double scale = std::max(1.0, std::abs(b));
    double viol;
    if (i < spec.m1) {
      viol = std::abs(v - b) / scale;
      rc.eq_violation = std::max(rc.eq_violation, viol);
    } else {
      viol = std::max(0.0, b - v) / scale;
      rc.ineq_violation = std::max(rc.ineq_violation, viol);
    }
    if (viol > worst) {
      worst = viol;
      rc.worst_row = i;
    }
  }
  for (const auto& a : mu.atoms) {
    for (const auto& c : spec.K.equalities) rc.set_violation = std::max(rc.set_violation, std::abs(scaled_value(c, a.point)));
    for (const auto& c : spec.K.inequalities) rc.set_violation = std::max(rc.set_violation, -scaled_value(c, a.point));
  }
  bool positive = true;
  for (const auto& a : mu.atoms) positive = positive && a.weight > 0.0;
  rc.ok = positive && rc.eq_violation <= tol && rc.ineq_violation <= tol && rc.set_violation <= tol;
  return rc;
}

GtmpOutcome solve_gtmp(const MomentProblemSpec& spec, const GtmpOptions& opts) {
  spec.validate();
  const int d = spec.deg();
  const int d1 = opts.d1 > 0 ? opts.d1 : default_d1(d);
  if (d1 % 2 != 0 || d1 <= d) throw PreconditionError("d1 must be even and exceed deg(A)");
  const int n1 = spec.num_vars() + 1;
  const int d_K = lift_set(spec.K).d_K();
  const int t_start = std::max(d_K, half_up(d));

  GtmpOutcome out;
  struct Closure {
    AtomicMeasure nu;
    int t = 0;
    int k = 0;
  };
  std::optional<Closure> closure;

  // One solve at order k with objective seed `seed`. Returns a final outcome,
  // or nullopt when this seed is inconclusive at this order.
  auto attempt_order = [&](int attempt, std::uint64_t seed, int k, double floor) -> std::optional<GtmpOutcome> {
    const Polynomial f = random_interior_objective(d1, n1, seed);
    RelaxationInstance inst = build_relaxation(spec, k, f, floor);
    const ConicSolution sol = solve(inst.program, opts.solver);
    out.trace.push_back(trace_entry(attempt, seed, k, sol));
    OrderTrace& tr = out.trace.back();

    if (has_ray(sol)) {
      if (floor > 0.0) {
        tr.notes.push_back("infeasible only under the x0 floor; no certificate for the original system");
        return std::nullopt;
      }
      GtmpOutcome res;
      res.tag = OutcomeTag::Infeasible;
      res.order = k;
      try {
        res.certificate = certify_nonexistence(sol, inst);
      } catch (const CertificateAssemblyFailure& e) {
        tr.notes.push_back(e.what());
        return std::nullopt;
      }
      return res;
    }
    if (!usable(sol)) {
      tr.notes.push_back("solver did not reach a usable solution");
      return std::nullopt;
    }

    const FullTms w(inst.basis, sol.primal);
    auto found = scan_flat(w, t_start, d_K, opts, seed, tr);
    if (!found) return std::nullopt;
    auto& [nu, t] = *found;
    DehomogenizedMeasure dm = dehomogenize_measure(nu, d, opts.tau_tol);
    if (dm.all_positive) {
      const RowCheck rc = check_measure_rows(spec, dm.measure, opts.row_tol);
      if (!rc.ok) {
        std::ostringstream os;
        os << "extracted measure misses the rows (eq " << rc.eq_violation << ", ineq " << rc.ineq_violation
           << ", set " << rc.set_violation << ")";
        tr.notes.push_back(os.str());
        return std::nullopt;
      }
      GtmpOutcome res;
      res.tag = OutcomeTag::KMeasureFound;
      res.order = k;
      res.flat_t = t;
      res.tau = dm.tau;
      res.measure = std::move(dm.measure);
      res.lifted_measure = nu;
      return res;
    }
    std::ostringstream os;
    os << dm.zero_tau_atoms.size() << " atom(s) with tau <= " << opts.tau_tol;
    tr.notes.push_back(os.str());
    // Atoms at infinity may pair to zero with every homogenized row; the
    // finite part alone is then a K-measure.
    AtomicMeasure finite{MeasureSpace::Lifted, {}};
    for (const auto& a : nu.atoms)
      if (a.point[0] > opts.tau_tol) finite.atoms.push_back(a);
    if (!finite.atoms.empty()) {
      DehomogenizedMeasure fm = dehomogenize_measure(finite, d, opts.tau_tol);
      if (fm.all_positive && check_measure_rows(spec, fm.measure, opts.row_tol).ok) {
        tr.notes.push_back("the atoms at infinity pair to zero with every row; kept the finite atoms");
        GtmpOutcome res;
        res.tag = OutcomeTag::KMeasureFound;
        res.order = k;
        res.flat_t = t;
        res.tau = dm.tau;
        res.measure = std::move(fm.measure);
        res.lifted_measure = nu;
        return res;
      }
    }
    closure = Closure{nu, t, k};
    return std::nullopt;
  };

  std::optional<GtmpOutcome> res;
  for (int k = d1 / 2; k <= opts.k_max && !res && !closure; ++k) {
    for (int attempt = 0; attempt <= opts.retries && !res; ++attempt) {
      res = attempt_order(attempt, opts.seed + static_cast<std::uint64_t>(attempt), k, 0.0);
    }
  }
  if (!res && closure && opts.x0_floor > 0.0) {
    const Closure saved = *closure;
    const int attempt = opts.retries + 1;
    for (int k = saved.k; k <= opts.k_max && !res; ++k) {
      res = attempt_order(attempt, opts.seed + static_cast<std::uint64_t>(attempt), k, opts.x0_floor);
    }
    closure = saved;
  }

  if (res) {
    auto trace = std::move(out.trace);
    out = std::move(*res);
    out.trace = std::move(trace);
  } else if (closure) {
    out.tag = OutcomeTag::ClosureMeasureOnly;
    out.order = closure->k;
    out.flat_t = closure->t;
    out.measure = closure->nu;
    out.lifted_measure = closure->nu;
    for (const auto& a : closure->nu.atoms) out.tau.push_back(a.point[0]);
    if (spec.K.closed_at_infinity) {
      try {
        out.approximants = approximate_sequence(closure->nu, d, opts.eps_schedule, lift_set(spec.K), opts.tau_tol);
        out.approximant_eps = opts.eps_schedule;
      } catch (const ProjectionFailure& e) {
        out.warnings.push_back(std::string("approximating sequence unavailable: ") + e.what());
      }
    }
  } else {
    out.tag = OutcomeTag::Undetermined;
    out.order = opts.k_max;
    out.unchecked_hypotheses = undetermined_reasons();
  }

  if (out.measure && static_cast<int>(out.measure->atoms.size()) > spec.num_rows()) {
    out.warnings.push_back("atom count " + std::to_string(out.measure->atoms.size()) + " exceeds the row count " +
                           std::to_string(spec.num_rows()));
  }
  return out;
}

MomentMembership membership_moment_cone(const Tms& y, const SemialgebraicSet& K, int k_max, const GtmpOptions& opts) {
  MomentMembership out;
  const int d = y.support.deg();
  const int n1 = K.num_vars + 1;
  const int d_K = lift_set(K).d_K();
  for (int k = std::max(1, half_up(d)); k <= k_max; ++k) {
    RelaxationInstance inst = build_cone_membership(y, K, k);
    const ConicSolution sol = solve(inst.program, opts.solver);
    out.trace.push_back(trace_entry(0, opts.seed, k, sol));
    if (has_ray(sol)) {
      try {
        out.certificate = certify_nonexistence(sol, inst);
        out.tag = MembershipTag::NotInClosure;
        out.order = k;
      } catch (const CertificateAssemblyFailure& e) {
        out.trace.back().notes.push_back(e.what());
        out.tag = MembershipTag::Undetermined;
      }
      return out;
    }
    if (!usable(sol)) continue;
    out.tag = MembershipTag::InRelaxation;
    out.order = k;

    // A random objective over the same feasible set pushes the solver to a
    // low-rank point where a flat witness can be read off.
    const int d1 = std::max(2, 2 * half_up(d));
    if (2 * k >= d1) {
      const Polynomial f = random_interior_objective(d1, n1, opts.seed);
      RelaxationInstance opt = inst;
      opt.program.objective.setZero();
      for (const auto& [beta, c] : f.terms()) opt.program.objective[opt.basis->index_of(beta)] += c;
      const ConicSolution s2 = solve(opt.program, opts.solver);
      OrderTrace tr = trace_entry(0, opts.seed, k, s2);
      tr.notes.push_back("flat-witness solve");
      if (usable(s2)) {
        auto found = scan_flat(FullTms(opt.basis, s2.primal), std::max(d_K, half_up(d)), d_K, opts, opts.seed, tr);
        if (found) out.lifted_measure = std::move(found->first);
      }
      out.trace.push_back(std::move(tr));
    }
    return out;
  }
  return out;
}

SosMembership membership_sos_cone(const Polynomial& p, const SemialgebraicSet& K, int k_max, const GtmpOptions& opts) {
  SosMembership out;
  for (int k = std::max(1, half_up(p.degree())); k <= k_max; ++k) {
    SosProgram sp = build_sos_membership(p, K, k);
    const ConicSolution sol = solve(sp.program, opts.solver);
    out.trace.push_back(trace_entry(0, opts.seed, k, sol));
    if (!usable(sol)) continue;
    SosDecomposition dec = sp.decode(sol.primal);
    const double res = dec.expand().max_coefficient_difference(sp.target);
    const double eig = dec.min_gram_eigenvalue();
    if (res <= 1e-6 && eig >= -1e-8) {
      out.member = true;
      out.order = k;
      out.residual = res;
      out.decomposition = std::move(dec);
      return out;
    }
    std::ostringstream os;
    os << "decomposition rejected (residual " << res << ", min Gram eigenvalue " << eig << ")";
    out.trace.back().notes.push_back(os.str());
  }
  return out;
}

RationalResult solve_rational_opt(const Polynomial& f, const Polynomial& g, const SemialgebraicSet& K,
                                  const GtmpOptions& opts) {
  if (f.num_vars() != K.num_vars || g.num_vars() != K.num_vars) {
    throw DimensionMismatchError("rational objective arity does not match K");
  }
  const int n = K.num_vars;
  const int d = std::max(f.degree(), g.degree());
  if (d < 1) throw PreconditionError("rational objective needs positive degree");
  MomentProblemSpec spec;
  spec.K = K;
  spec.support = PowerSupport::full(n, d);
  spec.a_polys = {g};
  spec.b_vals = Eigen::VectorXd::Ones(1);
  spec.m1 = 1;
  const Polynomial f_hat = homogenize(f, d);
  const int d_K = lift_set(K).d_K();
  const int t_start = std::max(d_K, half_up(d));

  RationalResult out;
  for (int k = std::max(d_K, half_up(d)); k <= opts.k_max; ++k) {
    RelaxationInstance inst = build_moment_optimization(spec, k, f_hat, 0.0);
    const ConicSolution sol = solve(inst.program, opts.solver);
    out.trace.push_back(trace_entry(0, opts.seed, k, sol));
    OrderTrace& tr = out.trace.back();
    if (has_ray(sol)) {
      out.tag = RationalTag::NormalizationInfeasible;
      out.order = k;
      return out;
    }
    if (!usable(sol)) continue;
    out.tag = RationalTag::Solved;
    out.order = k;
    out.value = inst.program.objective.dot(sol.primal);
    auto found = scan_flat(FullTms(inst.basis, sol.primal), t_start, d_K, opts, opts.seed, tr);
    if (!found) continue;
    out.flat = true;
    DehomogenizedMeasure dm = dehomogenize_measure(found->first, d, opts.tau_tol);
    out.lifted_measure = std::move(found->first);
    if (dm.all_positive) out.minimizers = std::move(dm.measure);
    return out;
  }
  return out;
}

}  // namespace gtmp
