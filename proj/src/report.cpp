#include "gtmp/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "gtmp/errors.hpp"

namespace gtmp {
namespace {

using nlohmann::json;

json vec(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(round12(v[i]));
  return a;
}

json vec(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(round12(x));
  return a;
}

json mat(const Eigen::MatrixXd& M) {
  json a = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) a.push_back(vec(Eigen::VectorXd(M.row(i).transpose())));
  return a;
}

json measure_json(const AtomicMeasure& mu) {
  json atoms = json::array();
  for (const auto& a : mu.atoms) atoms.push_back({{"weight", round12(a.weight)}, {"point", vec(a.point)}});
  return {{"space", mu.space == MeasureSpace::Lifted ? "lifted" : "original"}, {"atoms", atoms}};
}

json certificate_json(const NonexistenceCertificate& c) {
  json grams = json::array();
  const auto& dec = c.decomposition;
  for (std::size_t j = 0; j < dec.grams.size(); ++j) {
    json basis = json::array();
    for (const auto& m : dec.bases[j]) basis.push_back(m.exponents());
    grams.push_back({{"generator", dec.generators[j].to_string(true)}, {"basis", basis}, {"matrix", mat(dec.grams[j])}});
  }
  json ideal = json::array();
  for (std::size_t h = 0; h < dec.multipliers.size(); ++h) {
    ideal.push_back({{"generator", dec.ideal_generators[h].to_string(true)},
                     {"multiplier", dec.multipliers[h].to_string(true)}});
  }
  return {{"order", c.order},
          {"theta", vec(c.theta)},
          {"pairing", round12(c.pairing_value)},
          {"residual", round12(c.residual)},
          {"min_gram_eigenvalue", round12(c.min_gram_eigenvalue)},
          {"q", c.q.to_string(true)},
          {"gram_blocks", grams},
          {"ideal_blocks", ideal}};
}

json trace_json(const std::vector<OrderTrace>& trace) {
  json a = json::array();
  for (const auto& t : trace) {
    json flats = json::array();
    for (const auto& f : t.flats) {
      flats.push_back({{"t", f.t}, {"rank_low", f.rank_low}, {"rank_high", f.rank_high}, {"flat", f.flat}});
    }
    a.push_back({{"attempt", t.attempt},
                 {"seed", t.seed},
                 {"k", t.k},
                 {"status", to_string(t.status)},
                 {"near_optimal", t.near_optimal},
                 {"iterations", t.iterations},
                 {"primal_residual", round12(t.primal_residual)},
                 {"dual_residual", round12(t.dual_residual)},
                 {"gap", round12(t.gap)},
                 {"flats", flats},
                 {"notes", t.notes}});
  }
  return a;
}

json gtmp_json(const GtmpOutcome& o) {
  json r{{"outcome", to_string(o.tag)}, {"order", o.order}, {"flat_t", o.flat_t}};
  if (o.measure) r["measure"] = measure_json(*o.measure);
  if (o.lifted_measure) r["lifted_measure"] = measure_json(*o.lifted_measure);
  if (!o.tau.empty()) r["tau"] = vec(o.tau);
  if (o.certificate) r["certificate"] = certificate_json(*o.certificate);
  if (!o.approximants.empty()) {
    json ap = json::array();
    for (std::size_t i = 0; i < o.approximants.size(); ++i) {
      ap.push_back({{"eps", round12(o.approximant_eps[i])}, {"measure", measure_json(o.approximants[i])}});
    }
    r["approximants"] = ap;
  }
  r["warnings"] = o.warnings;
  r["unchecked_hypotheses"] = o.unchecked_hypotheses;
  r["trace"] = trace_json(o.trace);
  return r;
}

AtomicMeasure measure_from_json(const json& j) {
  AtomicMeasure mu;
  mu.space = j.at("space").get<std::string>() == "lifted" ? MeasureSpace::Lifted : MeasureSpace::Original;
  for (const auto& a : j.at("atoms")) {
    Atom at;
    at.weight = a.at("weight").get<double>();
    const auto p = a.at("point").get<std::vector<double>>();
    at.point = Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
    mu.atoms.push_back(std::move(at));
  }
  return mu;
}

Eigen::VectorXd vector_from_json(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

NonexistenceCertificate certificate_from_json(const json& j, int lifted_vars) {
  NonexistenceCertificate c;
  c.order = j.at("order").get<int>();
  c.theta = vector_from_json(j.at("theta"));
  c.q = parse_polynomial(j.at("q").get<std::string>(), lifted_vars, true);
  auto& dec = c.decomposition;
  dec.num_vars = lifted_vars;
  for (const auto& g : j.at("gram_blocks")) {
    dec.generators.push_back(parse_polynomial(g.at("generator").get<std::string>(), lifted_vars, true));
    std::vector<MultiIndex> basis;
    for (const auto& e : g.at("basis")) basis.emplace_back(e.get<std::vector<int>>());
    const json& M = g.at("matrix");
    Eigen::MatrixXd G(static_cast<Eigen::Index>(M.size()), static_cast<Eigen::Index>(M.size()));
    for (std::size_t r = 0; r < M.size(); ++r) {
      if (M[r].size() != M.size()) throw SchemaError("gram matrix is not square");
      for (std::size_t s = 0; s < M.size(); ++s) G(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) = M[r][s].get<double>();
    }
    if (basis.size() != M.size()) throw SchemaError("gram basis and matrix sizes differ");
    dec.bases.push_back(std::move(basis));
    dec.grams.push_back(std::move(G));
  }
  for (const auto& h : j.at("ideal_blocks")) {
    dec.ideal_generators.push_back(parse_polynomial(h.at("generator").get<std::string>(), lifted_vars, true));
    dec.multipliers.push_back(parse_polynomial(h.at("multiplier").get<std::string>(), lifted_vars, true));
  }
  return c;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

// Collects diffs for one verification pass.
struct Checker {
  VerifyResult& out;
  void fail(const std::string& msg) { out.diffs.push_back(msg); }
};

bool same_polynomial(const Polynomial& a, const Polynomial& b) {
  return a.num_vars() == b.num_vars() && a.max_coefficient_difference(b) <= 1e-12;
}

void check_certificate(Checker& ck, const json& cj, const std::vector<Polynomial>& a_hat, const Eigen::VectorXd& b,
                       int m1, const HomogenizedSet& lifted) {
  NonexistenceCertificate cert;
  try {
    cert = certificate_from_json(cj, lifted.num_vars);
  } catch (const std::exception& e) {
    ck.fail(std::string("certificate is malformed: ") + e.what());
    return;
  }
  const Polynomial one = Polynomial::constant(lifted.num_vars, 1.0);
  for (const auto& g : cert.decomposition.generators) {
    bool known = same_polynomial(g, one);
    for (const auto& c : lifted.ineq_tuple) known = known || same_polynomial(g, c);
    if (!known) ck.fail("certificate uses an SOS generator outside the lifted inequalities: " + g.to_string(true));
  }
  for (const auto& h : cert.decomposition.ideal_generators) {
    bool known = false;
    for (const auto& c : lifted.eq_tuple) known = known || same_polynomial(h, c);
    if (!known) ck.fail("certificate uses an ideal generator outside the lifted equalities: " + h.to_string(true));
  }
  const CertificateCheck chk = verify_certificate(cert, a_hat, b, m1);
  if (chk.combination > 1e-6) ck.fail("certificate: q differs from sum theta_i a_i by " + fmt(chk.combination));
  if (chk.residual > 1e-6) ck.fail("certificate: decomposition differs from q by " + fmt(chk.residual));
  if (chk.pairing >= -1e-8) ck.fail("certificate: pairing " + fmt(chk.pairing) + " is not negative");
  if (chk.min_gram_eigenvalue < -1e-6) ck.fail("certificate: Gram eigenvalue " + fmt(chk.min_gram_eigenvalue));
  if (chk.sign_violation > 1e-6) ck.fail("certificate: positive multiplier on an inequality row");
}

// Lifted atoms must lie on the sphere and satisfy the lifted constraints.
void check_lifted_atoms(Checker& ck, const AtomicMeasure& nu, const HomogenizedSet& lifted, double tol) {
  for (std::size_t i = 0; i < nu.atoms.size(); ++i) {
    const auto& a = nu.atoms[i];
    if (a.point.size() != lifted.num_vars) {
      ck.fail("lifted atom " + std::to_string(i) + " has the wrong length");
      continue;
    }
    if (!(a.weight > 0.0)) ck.fail("lifted atom " + std::to_string(i) + " has weight " + fmt(a.weight));
    const double eq = lifted.max_equality_violation(a.point);
    const double in = lifted.min_inequality_value(a.point);
    if (eq > tol) ck.fail("lifted atom " + std::to_string(i) + " violates a lifted equality by " + fmt(eq));
    if (in < -tol) ck.fail("lifted atom " + std::to_string(i) + " violates a lifted inequality by " + fmt(-in));
  }
}

// Row i compares sum_j weight_j rows[i](point_j) with b_i.
void check_rows(Checker& ck, const AtomicMeasure& mu, const std::vector<Polynomial>& rows, const Eigen::VectorXd& b,
                int m1, double tol, const char* label) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double v = 0.0;
    for (const auto& a : mu.atoms) v += a.weight * rows[i].evaluate(a.point);
    const double bi = b[static_cast<Eigen::Index>(i)];
    const double scale = std::max(1.0, std::abs(bi));
    const bool eq = static_cast<int>(i) < m1;
    const double viol = eq ? std::abs(v - bi) / scale : std::max(0.0, bi - v) / scale;
    if (viol > tol) {
      ck.fail(std::string(label) + " row " + std::to_string(i) + " (" + (eq ? "eq" : "ge") + "): value " + fmt(v) +
              ", rhs " + fmt(bi));
    }
  }
}

std::vector<Polynomial> homogenized_rows(const MomentProblemSpec& spec) {
  std::vector<Polynomial> out;
  for (const auto& a : spec.a_polys) out.push_back(homogenize(a, spec.deg()));
  return out;
}

void verify_gtmp(Checker& ck, const json& r, const MomentProblemSpec& spec, double tol) {
  const std::string tag = r.at("outcome").get<std::string>();
  const HomogenizedSet lifted = lift_set(spec.K);
  if (tag == "KMeasureFound") {
    const AtomicMeasure mu = measure_from_json(r.at("measure"));
    if (mu.atoms.empty()) ck.fail("measure has no atoms");
    for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
      if (mu.atoms[i].point.size() != spec.num_vars()) {
        ck.fail("atom " + std::to_string(i) + " has the wrong length");
        return;
      }
      if (!(mu.atoms[i].weight > 0.0)) ck.fail("atom " + std::to_string(i) + " has weight " + fmt(mu.atoms[i].weight));
    }
    check_rows(ck, mu, spec.a_polys, spec.b_vals, spec.m1, tol, "measure");
    const RowCheck rc = check_measure_rows(spec, mu, tol);
    if (rc.set_violation > tol) ck.fail("measure: an atom leaves K by " + fmt(rc.set_violation));
  } else if (tag == "ClosureMeasureOnly") {
    const AtomicMeasure nu = measure_from_json(r.at("measure"));
    check_lifted_atoms(ck, nu, lifted, tol);
    check_rows(ck, nu, homogenized_rows(spec), spec.b_vals, spec.m1, tol, "lifted measure");
  } else if (tag == "Infeasible") {
    if (!r.contains("certificate")) {
      ck.fail("Infeasible report carries no certificate");
      return;
    }
    check_certificate(ck, r.at("certificate"), homogenized_rows(spec), spec.b_vals, spec.m1, lifted);
  } else if (tag != "Undetermined") {
    ck.fail("unknown outcome " + tag);
  }
}

void verify_tensor(Checker& ck, const json& r, const ProblemFile& p, double tol) {
  verify_gtmp(ck, r, p.spec, tol);
  if (!r.contains("terms")) return;
  const SymmetricTensor& B = *p.tensor;
  SymmetricTensor rebuilt(B.order(), B.dim());
  for (const auto& t : r.at("terms")) {
    const Eigen::VectorXd v = vector_from_json(t.at("vector"));
    if (v.size() != B.dim()) {
      ck.fail("tensor term has the wrong length");
      return;
    }
    rebuilt.add_power(t.at("weight").get<double>(), v);
  }
  const double err = rebuilt.max_difference(B);
  if (!r.at("terms").empty() && err > tol * std::max(1.0, B.max_abs())) {
    ck.fail("tensor terms rebuild B with max entry error " + fmt(err));
  }
}

void verify_membership(Checker& ck, const json& r, const ProblemFile& p, double tol) {
  const std::string tag = r.at("outcome").get<std::string>();
  const HomTms yh = homogenize_tms(*p.moments);
  std::vector<Polynomial> rows;
  for (const auto& beta : yh.support) rows.push_back(Polynomial::monomial(beta));
  const HomogenizedSet lifted = lift_set(p.spec.K);
  if (tag == "NotInClosure") {
    if (!r.contains("certificate")) {
      ck.fail("NotInClosure report carries no certificate");
      return;
    }
    check_certificate(ck, r.at("certificate"), rows, yh.values, static_cast<int>(rows.size()), lifted);
  } else if (tag == "InRelaxation") {
    if (!r.contains("witness")) return;
    const AtomicMeasure nu = measure_from_json(r.at("witness"));
    check_lifted_atoms(ck, nu, lifted, tol);
    check_rows(ck, nu, rows, yh.values, static_cast<int>(rows.size()), tol, "witness");
  } else if (tag != "Undetermined") {
    ck.fail("unknown outcome " + tag);
  }
}

void verify_rational(Checker& ck, const json& r, const ProblemFile& p, double tol) {
  const std::string tag = r.at("outcome").get<std::string>();
  if (tag != "Solved") {
    if (tag != "NormalizationInfeasible" && tag != "Undetermined") ck.fail("unknown outcome " + tag);
    return;
  }
  const double value = r.at("value").get<double>();
  const int d = std::max(p.f->degree(), p.g->degree());
  const HomogenizedSet lifted = lift_set(p.spec.K);
  if (r.contains("lifted_measure")) {
    const AtomicMeasure nu = measure_from_json(r.at("lifted_measure"));
    check_lifted_atoms(ck, nu, lifted, tol);
    const Polynomial fh = homogenize(*p.f, d);
    const Polynomial gh = homogenize(*p.g, d);
    double fv = 0.0, gv = 0.0;
    for (const auto& a : nu.atoms) {
      fv += a.weight * fh.evaluate(a.point);
      gv += a.weight * gh.evaluate(a.point);
    }
    if (std::abs(gv - 1.0) > tol) ck.fail("lifted measure: <g, nu> = " + fmt(gv) + ", expected 1");
    if (std::abs(fv - value) > tol * std::max(1.0, std::abs(value))) {
      ck.fail("lifted measure: <f, nu> = " + fmt(fv) + " differs from the reported value " + fmt(value));
    }
  }
  if (r.contains("minimizers")) {
    const AtomicMeasure mu = measure_from_json(r.at("minimizers"));
    for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
      const auto& u = mu.atoms[i].point;
      if (!p.spec.K.contains(u, tol)) ck.fail("minimizer " + std::to_string(i) + " is outside K");
      const double gu = p.g->evaluate(u);
      if (gu <= 0.0) {
        ck.fail("minimizer " + std::to_string(i) + " has g <= 0");
        continue;
      }
      const double ratio = p.f->evaluate(u) / gu;
      if (std::abs(ratio - value) > tol * std::max(1.0, std::abs(value))) {
        ck.fail("minimizer " + std::to_string(i) + ": f/g = " + fmt(ratio) + ", reported value " + fmt(value));
      }
    }
  }
}

void text_measure(std::ostringstream& os, const json& m, const std::string& label) {
  os << label << " (" << m.at("space").get<std::string>() << ", " << m.at("atoms").size() << " atoms)\n";
  for (const auto& a : m.at("atoms")) {
    os << "  weight " << fmt(a.at("weight").get<double>()) << "  point [";
    bool first = true;
    for (const auto& x : a.at("point")) {
      os << (first ? "" : ", ") << fmt(x.get<double>());
      first = false;
    }
    os << "]\n";
  }
}

}  // namespace

double round12(double x) {
  if (!std::isfinite(x) || x == 0.0) return x == 0.0 ? 0.0 : x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

int RunResult::exit_code() const {
  auto from_tag = [](OutcomeTag t) {
    switch (t) {
      case OutcomeTag::KMeasureFound: return 0;
      case OutcomeTag::Infeasible: return 2;
      case OutcomeTag::ClosureMeasureOnly: return 3;
      case OutcomeTag::Undetermined: return 4;
    }
    return 4;
  };
  if (gtmp) return from_tag(gtmp->tag);
  if (tensor) return from_tag(tensor->outcome.tag);
  if (membership) {
    switch (membership->tag) {
      case MembershipTag::InRelaxation: return 0;
      case MembershipTag::NotInClosure: return 2;
      case MembershipTag::Undetermined: return 4;
    }
  }
  if (rational) {
    switch (rational->tag) {
      case RationalTag::Solved: return 0;
      case RationalTag::NormalizationInfeasible: return 2;
      case RationalTag::Undetermined: return 4;
    }
  }
  return 4;
}

RunResult run_problem(const ProblemFile& p, const GtmpOptions& opts) {
  RunResult r;
  r.mode = p.mode;
  switch (p.mode) {
    case ProblemMode::Gtmp: r.gtmp = solve_gtmp(p.spec, opts); break;
    case ProblemMode::TensorPsop: r.tensor = detect_psop(*p.tensor, opts); break;
    case ProblemMode::TensorScp: r.tensor = detect_scp(*p.tensor, opts); break;
    case ProblemMode::ConeMember: r.membership = membership_moment_cone(*p.moments, p.spec.K, opts.k_max, opts); break;
    case ProblemMode::RatOpt: r.rational = solve_rational_opt(*p.f, *p.g, p.spec.K, opts); break;
  }
  return r;
}

json make_report(const ProblemFile& p, const RunResult& res, const GtmpOptions& opts) {
  json rep;
  rep["report_version"] = 1;
  rep["mode"] = to_string(p.mode);
  if (!p.name.empty()) rep["name"] = p.name;
  if (!p.warnings.empty()) rep["input_warnings"] = p.warnings;
  rep["options"] = {{"seed", opts.seed},
                    {"k_max", opts.k_max},
                    {"d1", opts.d1},
                    {"retries", opts.retries},
                    {"x0_floor", round12(opts.x0_floor)},
                    {"tolerances",
                     {{"rank", round12(opts.rank_tol)},
                      {"tau", round12(opts.tau_tol)},
                      {"feas", round12(opts.row_tol)},
                      {"solver_feas", round12(opts.solver.feas_tol)},
                      {"solver_gap", round12(opts.solver.gap_tol)},
                      {"solver_reduced", round12(opts.solver.reduced_tol)}}}};
  json r;
  if (res.gtmp) {
    r = gtmp_json(*res.gtmp);
  } else if (res.tensor) {
    r = gtmp_json(res.tensor->outcome);
    json terms = json::array();
    for (const auto& t : res.tensor->terms) terms.push_back({{"weight", round12(t.weight)}, {"vector", vec(t.vector)}});
    r["terms"] = terms;
    r["residual"] = round12(res.tensor->residual);
  } else if (res.membership) {
    const auto& m = *res.membership;
    r = {{"outcome", to_string(m.tag)}, {"order", m.order}};
    if (m.certificate) r["certificate"] = certificate_json(*m.certificate);
    if (m.lifted_measure) r["witness"] = measure_json(*m.lifted_measure);
    r["trace"] = trace_json(m.trace);
  } else if (res.rational) {
    const auto& q = *res.rational;
    r = {{"outcome", to_string(q.tag)}, {"value", round12(q.value)}, {"order", q.order}, {"flat", q.flat}};
    if (q.lifted_measure) r["lifted_measure"] = measure_json(*q.lifted_measure);
    if (q.minimizers) r["minimizers"] = measure_json(*q.minimizers);
    r["trace"] = trace_json(q.trace);
  }
  rep["result"] = r;
  rep["exit_code"] = res.exit_code();
  return rep;
}

std::string render_text(const json& rep) {
  std::ostringstream os;
  const json& r = rep.at("result");
  os << "mode: " << rep.at("mode").get<std::string>() << "\n";
  if (rep.contains("name")) os << "name: " << rep.at("name").get<std::string>() << "\n";
  os << "outcome: " << r.at("outcome").get<std::string>() << " (order " << r.at("order").get<int>();
  if (r.contains("flat_t") && r.at("flat_t").get<int>() > 0) os << ", flat at t=" << r.at("flat_t").get<int>();
  os << ")\n";
  if (r.contains("value")) os << "value: " << fmt(r.at("value").get<double>()) << "\n";
  if (r.contains("measure")) text_measure(os, r.at("measure"), "measure");
  if (r.contains("lifted_measure")) text_measure(os, r.at("lifted_measure"), "lifted measure");
  if (r.contains("minimizers")) text_measure(os, r.at("minimizers"), "minimizers");
  if (r.contains("witness")) text_measure(os, r.at("witness"), "witness");
  if (r.contains("terms")) {
    os << "terms: " << r.at("terms").size() << ", rebuild error " << fmt(r.at("residual").get<double>()) << "\n";
  }
  if (r.contains("approximants")) {
    for (const auto& a : r.at("approximants")) {
      text_measure(os, a.at("measure"), "approximant eps=" + fmt(a.at("eps").get<double>()));
    }
  }
  if (r.contains("certificate")) {
    const json& c = r.at("certificate");
    os << "certificate: order " << c.at("order").get<int>() << ", pairing " << fmt(c.at("pairing").get<double>())
       << ", residual " << fmt(c.at("residual").get<double>()) << ", min Gram eigenvalue "
       << fmt(c.at("min_gram_eigenvalue").get<double>()) << "\n";
  }
  if (r.contains("warnings")) {
    for (const auto& w : r.at("warnings")) os << "warning: " << w.get<std::string>() << "\n";
  }
  if (r.contains("unchecked_hypotheses")) {
    for (const auto& h : r.at("unchecked_hypotheses")) os << "unchecked: " << h.get<std::string>() << "\n";
  }
  os << "trace:\n";
  for (const auto& t : r.at("trace")) {
    os << "  k=" << t.at("k").get<int>() << " attempt=" << t.at("attempt").get<int>()
       << " seed=" << t.at("seed").get<std::uint64_t>() << " " << t.at("status").get<std::string>()
       << " iters=" << t.at("iterations").get<int>() << " pres=" << fmt(t.at("primal_residual").get<double>())
       << " dres=" << fmt(t.at("dual_residual").get<double>()) << " gap=" << fmt(t.at("gap").get<double>());
    for (const auto& f : t.at("flats")) {
      os << " [t=" << f.at("t").get<int>() << " " << f.at("rank_low").get<int>() << "/"
         << f.at("rank_high").get<int>() << "]";
    }
    os << "\n";
    for (const auto& n : t.at("notes")) os << "    " << n.get<std::string>() << "\n";
  }
  return os.str();
}

VerifyResult verify_report(const json& rep, const ProblemFile& p, double tol) {
  VerifyResult out;
  Checker ck{out};
  try {
    const std::string mode = rep.at("mode").get<std::string>();
    if (mode != to_string(p.mode)) {
      ck.fail("report mode " + mode + " does not match problem mode " + to_string(p.mode));
    } else {
      const json& r = rep.at("result");
      switch (p.mode) {
        case ProblemMode::Gtmp: verify_gtmp(ck, r, p.spec, tol); break;
        case ProblemMode::TensorPsop:
        case ProblemMode::TensorScp: verify_tensor(ck, r, p, tol); break;
        case ProblemMode::ConeMember: verify_membership(ck, r, p, tol); break;
        case ProblemMode::RatOpt: verify_rational(ck, r, p, tol); break;
      }
    }
  } catch (const json::exception& e) {
    ck.fail(std::string("malformed report: ") + e.what());
  }
  out.ok = out.diffs.empty();
  return out;
}

}  // namespace gtmp
