#include "gtmp/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gtmp/errors.hpp"
#include "gtmp/report.hpp"

namespace gtmp {
namespace {

struct Flags {
  std::string problem;
  std::string report;
  std::uint64_t seed = 0;
  int k_max = 6;
  int d1 = 0;
  double tol_rank = 1e-6;
  double tol_tau = 1e-6;
  double tol_feas = 1e-5;
  int retries = 3;
  double x0_floor = 0.0;
  std::string dump_sdp;
  bool json = false;
  bool text = false;
  bool timing = false;
};

GtmpOptions options_from(const Flags& f) {
  GtmpOptions o;
  o.seed = f.seed;
  o.k_max = f.k_max;
  o.d1 = f.d1;
  o.rank_tol = f.tol_rank;
  o.tau_tol = f.tol_tau;
  o.row_tol = f.tol_feas;
  o.retries = f.retries;
  o.x0_floor = f.x0_floor;
  return o;
}

void add_solve_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("problem", f.problem, "problem file (JSON)")->required();
  cmd->add_option("--seed", f.seed, "seed of the random objective")->capture_default_str();
  cmd->add_option("--k-max", f.k_max, "largest relaxation order")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--d1", f.d1, "objective degree (even, > deg A); 0 picks the smallest")->capture_default_str();
  cmd->add_option("--tol-rank", f.tol_rank, "relative singular value threshold")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--tol-tau", f.tol_tau, "x0 threshold for zero-tau atoms")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--tol-feas", f.tol_feas, "row and set re-check tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--retries", f.retries, "extra objective seeds per order")->capture_default_str()->check(CLI::NonNegativeNumber);
  cmd->add_option("--x0-floor", f.x0_floor, "enable the x0 >= eps fallback")->check(CLI::NonNegativeNumber);
  cmd->add_option("--dump-sdp", f.dump_sdp, "write the first relaxation in sparse form");
  auto* j = cmd->add_flag("--json", f.json, "JSON report (default)");
  auto* t = cmd->add_flag("--text", f.text, "text report");
  j->excludes(t);
  cmd->add_flag("--timing", f.timing, "print wall time to stderr");
}

void dump_first_program(const ProblemFile& p, const GtmpOptions& o, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw SchemaError("cannot write " + path);
  const int d = p.mode == ProblemMode::RatOpt ? std::max(p.f->degree(), p.g->degree()) : p.spec.deg();
  const int n1 = p.spec.K.num_vars + 1;
  if (p.mode == ProblemMode::ConeMember) {
    dump_program(build_cone_membership(*p.moments, p.spec.K, std::max(1, (d + 1) / 2)).program, os);
  } else if (p.mode == ProblemMode::RatOpt) {
    MomentProblemSpec spec;
    spec.K = p.spec.K;
    spec.support = PowerSupport::full(spec.K.num_vars, d);
    spec.a_polys = {*p.g};
    spec.b_vals = Eigen::VectorXd::Ones(1);
    spec.m1 = 1;
    const int k = std::max(lift_set(spec.K).d_K(), (d + 1) / 2);
    dump_program(build_moment_optimization(spec, k, homogenize(*p.f, d)).program, os);
  } else {
    const int d1 = o.d1 > 0 ? o.d1 : default_d1(d);
    dump_program(build_relaxation(p.spec, d1 / 2, random_interior_objective(d1, n1, o.seed)).program, os);
  }
}

int run_solve(const Flags& f, std::optional<ProblemMode> required, std::ostream& out, std::ostream& err) {
  const ProblemFile p = load_problem(f.problem);
  if (required) {
    const bool tensor_ok = *required == ProblemMode::TensorPsop &&
                           (p.mode == ProblemMode::TensorPsop || p.mode == ProblemMode::TensorScp);
    if (p.mode != *required && !tensor_ok) {
      err << "error: " << f.problem << " has mode " << to_string(p.mode) << ", which this subcommand does not run\n";
      return 1;
    }
  }
  const GtmpOptions o = options_from(f);
  if (!f.dump_sdp.empty()) dump_first_program(p, o, f.dump_sdp);
  const auto t0 = std::chrono::steady_clock::now();
  const RunResult r = run_problem(p, o);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const nlohmann::json rep = make_report(p, r, o);
  if (f.text) {
    out << render_text(rep);
  } else {
    out << rep.dump(2) << "\n";
  }
  if (f.timing) err << "wall time: " << secs << " s\n";
  return r.exit_code();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized truncated moment problems on unbounded sets", "gtmp"};
  app.require_subcommand(1);
  Flags f;

  auto* solve = app.add_subcommand("solve", "solve the problem in any mode");
  add_solve_flags(solve, f);
  auto* tensor = app.add_subcommand("tensor", "PSOP / SCP tensor detection");
  add_solve_flags(tensor, f);
  auto* cone = app.add_subcommand("cone", "moment cone membership");
  add_solve_flags(cone, f);
  auto* ratopt = app.add_subcommand("ratopt", "rational optimization");
  add_solve_flags(ratopt, f);
  auto* check = app.add_subcommand("check", "validate a problem file without solving");
  check->add_option("problem", f.problem, "problem file (JSON)")->required();
  auto* verify = app.add_subcommand("verify", "re-check a report against its problem");
  verify->add_option("report", f.report, "report file (JSON)")->required();
  verify->add_option("problem", f.problem, "problem file (JSON)")->required();
  verify->add_option("--tol-feas", f.tol_feas, "row and set tolerance")->capture_default_str();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? 0 : 1;
  }

  try {
    if (check->parsed()) {
      const ProblemFile p = load_problem(f.problem);
      out << "ok: mode " << to_string(p.mode) << ", " << p.spec.K.num_vars << " variables";
      if (p.mode == ProblemMode::Gtmp) out << ", " << p.spec.num_rows() << " rows";
      out << "\n";
      return 0;
    }
    if (verify->parsed()) {
      const ProblemFile p = load_problem(f.problem);
      std::ifstream in(f.report);
      if (!in) throw SchemaError(f.report + ": cannot open");
      nlohmann::json rep;
      try {
        rep = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(f.report + ": " + e.what());
      }
      const VerifyResult v = verify_report(rep, p, f.tol_feas);
      if (v.ok) {
        out << "verified\n";
        return 0;
      }
      for (const auto& d : v.diffs) out << "violation: " << d << "\n";
      return 2;
    }
    if (solve->parsed()) return run_solve(f, std::nullopt, out, err);
    if (tensor->parsed()) return run_solve(f, ProblemMode::TensorPsop, out, err);
    if (cone->parsed()) return run_solve(f, ProblemMode::ConeMember, out, err);
    if (ratopt->parsed()) return run_solve(f, ProblemMode::RatOpt, out, err);
  } catch (const SchemaError& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace gtmp
