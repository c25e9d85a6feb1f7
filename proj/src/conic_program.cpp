#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "gtmp/conic.hpp"
#include "gtmp/errors.hpp"

namespace gtmp {
namespace {

double min_eigenvalue(const Eigen::MatrixXd& M) {
  if (M.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

void check_map(const MatrixMap& map, int dim, const char* what) {
  for (const auto& cell : map.cells) {
    if (cell.row < 0 || cell.col < cell.row || cell.col >= map.size) {
      throw PreconditionError(std::string(what) + " cell outside its block");
    }
    for (const auto& [j, c] : cell.terms) {
      (void)c;
      if (j < 0 || j >= dim) throw PreconditionError(std::string(what) + " references variable out of range");
    }
  }
}

}  // namespace

double SparseRow::dot(const Eigen::VectorXd& w) const {
  double s = 0.0;
  for (const auto& [j, c] : terms) s += c * w[j];
  return s;
}

void ConicProgram::validate() const {
  if (dim < 1) throw PreconditionError("conic program needs at least one variable");
  if (objective.size() != dim) throw DimensionMismatchError("objective length does not match dim");
  auto check_rows = [&](const std::vector<SparseRow>& rows) {
    for (const auto& r : rows) {
      for (const auto& [j, c] : r.terms) {
        (void)c;
        if (j < 0 || j >= dim) throw PreconditionError("row references variable out of range");
      }
    }
  };
  check_rows(eq_rows);
  check_rows(ineq_rows);
  for (const auto& b : psd_blocks) check_map(b, dim, "psd block");
  for (const auto& b : zero_blocks) check_map(b, dim, "zero block");
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::PrimalInfeasible: return "PrimalInfeasible";
    case SolveStatus::DualInfeasible: return "DualInfeasible";
    case SolveStatus::NumericalTrouble: return "NumericalTrouble";
    case SolveStatus::IterationLimit: return "IterationLimit";
  }
  return "Unknown";
}

double KktReport::primal() const { return std::max({eq, zero, ineq, psd}); }

KktReport check_kkt(const ConicProgram& prog, const ConicSolution& sol) {
  KktReport r;
  const Eigen::VectorXd& w = sol.primal;
  if (w.size() != prog.dim) throw DimensionMismatchError("primal vector length does not match program");

  double eq2 = 0.0;
  for (const auto& row : prog.eq_rows) eq2 += std::pow(row.dot(w) - row.rhs, 2);
  r.eq = std::sqrt(eq2);
  for (const auto& row : prog.ineq_rows) r.ineq = std::max(r.ineq, row.rhs - row.dot(w));
  for (const auto& b : prog.psd_blocks) r.psd = std::max(r.psd, -min_eigenvalue(b.assemble(w)));
  for (const auto& b : prog.zero_blocks) r.zero += b.assemble(w).norm();
  r.primal_objective = prog.objective.dot(w);

  const bool have_dual = sol.dual_eq.size() == static_cast<Eigen::Index>(prog.eq_rows.size()) &&
                         sol.dual_ineq.size() == static_cast<Eigen::Index>(prog.ineq_rows.size()) &&
                         sol.dual_psd.size() == prog.psd_blocks.size() &&
                         sol.dual_zero.size() == prog.zero_blocks.size();
  if (!have_dual) {
    r.dual = std::numeric_limits<double>::infinity();
    r.gap = std::numeric_limits<double>::infinity();
    return r;
  }

  Eigen::VectorXd g = prog.objective;
  double dobj = 0.0;
  for (std::size_t i = 0; i < prog.eq_rows.size(); ++i) {
    const double y = sol.dual_eq[static_cast<Eigen::Index>(i)];
    for (const auto& [j, c] : prog.eq_rows[i].terms) g[j] -= y * c;
    dobj += y * prog.eq_rows[i].rhs;
  }
  for (std::size_t i = 0; i < prog.ineq_rows.size(); ++i) {
    const double z = sol.dual_ineq[static_cast<Eigen::Index>(i)];
    for (const auto& [j, c] : prog.ineq_rows[i].terms) g[j] -= z * c;
    dobj += z * prog.ineq_rows[i].rhs;
    r.dual_cone = std::max(r.dual_cone, -z);
  }
  for (std::size_t b = 0; b < prog.psd_blocks.size(); ++b) {
    prog.psd_blocks[b].add_adjoint(sol.dual_psd[b], g, -1.0);
    dobj -= prog.psd_blocks[b].constant_pairing(sol.dual_psd[b]);
    r.dual_cone = std::max(r.dual_cone, -min_eigenvalue(sol.dual_psd[b]));
  }
  for (std::size_t b = 0; b < prog.zero_blocks.size(); ++b) {
    prog.zero_blocks[b].add_adjoint(sol.dual_zero[b], g, -1.0);
    dobj -= prog.zero_blocks[b].constant_pairing(sol.dual_zero[b]);
  }
  r.dual = g.norm();
  r.dual_objective = dobj;
  r.gap = std::abs(r.primal_objective - dobj);
  return r;
}

RayReport check_ray(const ConicProgram& prog, const DualRay& ray, double tol) {
  RayReport r;
  if (ray.eq.size() != static_cast<Eigen::Index>(prog.eq_rows.size()) ||
      ray.ineq.size() != static_cast<Eigen::Index>(prog.ineq_rows.size()) ||
      ray.psd.size() != prog.psd_blocks.size() || ray.zero.size() != prog.zero_blocks.size()) {
    r.residual = std::numeric_limits<double>::infinity();
    return r;
  }
  Eigen::VectorXd g = Eigen::VectorXd::Zero(prog.dim);
  double pairing = 0.0;
  for (std::size_t i = 0; i < prog.eq_rows.size(); ++i) {
    const double y = ray.eq[static_cast<Eigen::Index>(i)];
    for (const auto& [j, c] : prog.eq_rows[i].terms) g[j] += y * c;
    pairing += y * prog.eq_rows[i].rhs;
  }
  for (std::size_t i = 0; i < prog.ineq_rows.size(); ++i) {
    const double z = ray.ineq[static_cast<Eigen::Index>(i)];
    for (const auto& [j, c] : prog.ineq_rows[i].terms) g[j] -= z * c;
    pairing -= z * prog.ineq_rows[i].rhs;
    r.cone_violation = std::max(r.cone_violation, -z);
  }
  for (std::size_t b = 0; b < prog.psd_blocks.size(); ++b) {
    prog.psd_blocks[b].add_adjoint(ray.psd[b], g, -1.0);
    pairing += prog.psd_blocks[b].constant_pairing(ray.psd[b]);
    r.cone_violation = std::max(r.cone_violation, -min_eigenvalue(ray.psd[b]));
  }
  for (std::size_t b = 0; b < prog.zero_blocks.size(); ++b) {
    prog.zero_blocks[b].add_adjoint(ray.zero[b], g, 1.0);
    pairing -= prog.zero_blocks[b].constant_pairing(ray.zero[b]);
  }
  r.residual = g.size() ? g.lpNorm<Eigen::Infinity>() : 0.0;
  r.pairing = pairing;
  r.valid = r.residual <= tol && r.cone_violation <= tol && pairing < -1e-8;
  return r;
}

void dump_program(const ConicProgram& prog, std::ostream& os) {
  os << std::setprecision(17);
  os << "# dim " << prog.dim << " eq " << prog.eq_rows.size() << " ge " << prog.ineq_rows.size() << " psd "
     << prog.psd_blocks.size() << " zero " << prog.zero_blocks.size() << "\n";
  for (int j = 0; j < prog.dim; ++j) {
    if (prog.objective[j] != 0.0) os << "obj " << j << " " << prog.objective[j] << "\n";
  }
  auto rows = [&](const char* tag, const std::vector<SparseRow>& rs) {
    for (std::size_t i = 0; i < rs.size(); ++i) {
      for (const auto& [j, c] : rs[i].terms) os << tag << " " << i << " " << j << " " << c << "\n";
      os << tag << "rhs " << i << " " << rs[i].rhs << "\n";
    }
  };
  rows("eq", prog.eq_rows);
  rows("ge", prog.ineq_rows);
  auto blocks = [&](const char* tag, const std::vector<MatrixMap>& bs) {
    for (std::size_t b = 0; b < bs.size(); ++b) {
      os << tag << "size " << b << " " << bs[b].size << "\n";
      for (const auto& cell : bs[b].cells) {
        if (cell.constant != 0.0) {
          os << tag << " " << b << " " << cell.row << " " << cell.col << " -1 " << cell.constant << "\n";
        }
        for (const auto& [j, c] : cell.terms) {
          os << tag << " " << b << " " << cell.row << " " << cell.col << " " << j << " " << c << "\n";
        }
      }
    }
  };
  blocks("psd", prog.psd_blocks);
  blocks("zero", prog.zero_blocks);
}

}  // namespace gtmp
