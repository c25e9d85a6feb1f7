#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gtmp/moments.hpp"

namespace gtmp {

struct SparseRow {
  std::vector<std::pair<int, double>> terms;  // (variable, coefficient)
  double rhs = 0.0;

  double dot(const Eigen::VectorXd& w) const;
};

// minimize <c, w> over a free vector w subject to
//   <a_i, w>  = b_i             (eq_rows)
//   <a_i, w> >= b_i             (ineq_rows)
//   F_b(w) = F_b0 + sum_j w_j F_bj  PSD   (psd_blocks)
//   E_b(w) = E_b0 + sum_j w_j E_bj  = 0   (zero_blocks)
struct ConicProgram {
  int dim = 0;
  Eigen::VectorXd objective;
  std::vector<SparseRow> eq_rows;
  std::vector<SparseRow> ineq_rows;
  std::vector<MatrixMap> psd_blocks;
  std::vector<MatrixMap> zero_blocks;

  void validate() const;  // throws PreconditionError
};

enum class SolveStatus { Optimal, PrimalInfeasible, DualInfeasible, NumericalTrouble, IterationLimit };

std::string to_string(SolveStatus status);

struct SolverOptions {
  double feas_tol = 1e-8;
  double gap_tol = 1e-8;
  double ray_tol = 1e-6;
  int max_iters = 200;
  double step_fraction = 0.99;
  // Threshold on max(primal, dual, relative gap) residual for near_optimal.
  double reduced_tol = 1e-6;
  bool verbose = false;
};

struct KktReport {
  double eq = 0.0;         // ||<a_i,w> - b_i||_2 over eq rows
  double zero = 0.0;       // ||E_b(w)||_F summed over zero blocks
  double ineq = 0.0;       // max violation of inequality rows
  double psd = 0.0;        // max(0, -lambda_min(F_b(w)))
  double dual = 0.0;       // ||c - A^* (duals)||_2
  double dual_cone = 0.0;  // max(0, -min z_i, -lambda_min(Z_b))
  double gap = 0.0;        // |primal objective - dual objective|
  double primal_objective = 0.0;
  double dual_objective = 0.0;

  double primal() const;
};

// Farkas witness for infeasibility of the program:
//   sum_i y_i a_i(eq) - sum_i z_i a_i(ineq) - sum_b F_b*(Z_b) + sum_b E_b*(Y_b) = 0
//   z >= 0, Z_b PSD, and
//   pairing = sum y_i b_i - sum z_i b_i + sum <F_b0, Z_b> - sum <E_b0, Y_b> < 0.
// Stored normalized to pairing = -1.
struct DualRay {
  Eigen::VectorXd eq;
  Eigen::VectorXd ineq;
  std::vector<Eigen::MatrixXd> psd;
  std::vector<Eigen::MatrixXd> zero;
  double pairing = 0.0;
};

struct RayReport {
  double residual = 0.0;        // ||combination||_inf
  double cone_violation = 0.0;  // max(0, -min z, -lambda_min(Z))
  double pairing = 0.0;
  bool valid = false;
};

struct ConicSolution {
  SolveStatus status = SolveStatus::NumericalTrouble;
  Eigen::VectorXd primal;
  // Lagrange multipliers with c = sum y a + sum z a + sum F*(Z) + sum E*(Y).
  Eigen::VectorXd dual_eq;
  Eigen::VectorXd dual_ineq;
  std::vector<Eigen::MatrixXd> dual_psd;
  std::vector<Eigen::MatrixXd> dual_zero;
  double objective_value = 0.0;
  KktReport residuals;
  std::optional<DualRay> certificate_ray;
  int iterations = 0;
  // Optimal, or stopped early at an iterate whose scaled residuals are all
  // below SolverOptions::reduced_tol. The returned point is that iterate.
  bool near_optimal = false;
};

ConicSolution solve(const ConicProgram& prog, const SolverOptions& opts = {});

// Recomputes every residual from the program data and the returned point.
KktReport check_kkt(const ConicProgram& prog, const ConicSolution& sol);
RayReport check_ray(const ConicProgram& prog, const DualRay& ray, double tol);

// One line per nonzero; format documented in docs/format.md.
void dump_program(const ConicProgram& prog, std::ostream& os);

}  // namespace gtmp
