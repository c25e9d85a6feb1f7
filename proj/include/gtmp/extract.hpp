#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gtmp/moments.hpp"
#include "gtmp/semialgebraic.hpp"

namespace gtmp {

struct FlatReport {
  int t = 0;
  int d_K = 0;
  int rank_low = 0;   // rank M_{t - d_K}
  int rank_high = 0;  // rank M_t
  bool flat = false;
  double tol = 0.0;
  Eigen::VectorXd sing_low;
  Eigen::VectorXd sing_high;
};

// rank = #{sigma_i > tol * max(sigma_1, 1)}.
int numerical_rank(const Eigen::VectorXd& singular_values, double tol);

// M_t[w] assembled directly from the grid values.
Eigen::MatrixXd moment_matrix(const FullTms& w, int t);

FlatReport check_flat(const FullTms& w, int t, int d_K, double tol = 1e-6);

enum class MeasureSpace { Lifted, Original };

struct AtomicMeasure {
  MeasureSpace space = MeasureSpace::Lifted;
  std::vector<Atom> atoms;

  int num_vars() const { return atoms.empty() ? 0 : static_cast<int>(atoms.front().point.size()); }
  double total_weight() const;
};

struct ExtractOptions {
  double rank_tol = 1e-6;
  // Largest allowed below-diagonal mass of Q' N_i Q, relative to ||N_i||.
  double commute_tol = 1e-4;
  double weight_drop = 1e-8;
  std::uint64_t seed = 0;
};

// Multiplication operators on the column space of M_t, joint eigenvalues
// from a Schur decomposition of a random combination, NNLS weights.
// Atoms are normalized to the unit sphere. Notes go to log when given.
AtomicMeasure extract_atoms(const FullTms& w, int t, const ExtractOptions& opts = {},
                            std::vector<std::string>* log = nullptr);

struct DehomogenizedMeasure {
  bool all_positive = false;
  AtomicMeasure measure;                // Original; set when all_positive
  std::vector<Atom> zero_tau_atoms;     // lifted atoms with tau <= tau_tol
  std::vector<double> tau;              // x0 coordinate of every input atom
};

DehomogenizedMeasure dehomogenize_measure(const AtomicMeasure& nu, int d, double tau_tol = 1e-6);

// For each eps, every zero-tau atom (0, v) is moved to (eps, v)/||(eps, v)||,
// corrected onto the lifted constraints with x0 held fixed, and the measure
// is dehomogenized. Throws ProjectionFailure after 100 correction steps.
std::vector<AtomicMeasure> approximate_sequence(const AtomicMeasure& nu, int d, const std::vector<double>& eps_schedule,
                                                const HomogenizedSet& lifted, double tau_tol = 1e-6);

// min ||A x - b|| subject to x >= 0 (Lawson and Hanson).
Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

}  // namespace gtmp
