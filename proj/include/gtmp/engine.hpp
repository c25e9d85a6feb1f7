#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gtmp/conic.hpp"
#include "gtmp/extract.hpp"
#include "gtmp/relaxation.hpp"

namespace gtmp {

struct GtmpOptions {
  std::uint64_t seed = 0;
  int k_max = 6;
  int d1 = 0;  // 0 selects default_d1(deg A)
  int retries = 3;
  double x0_floor = 0.0;  // > 0 enables the x0 >= eps fallback after reseeding
  double rank_tol = 1e-6;
  double tau_tol = 1e-6;
  double row_tol = 1e-5;
  std::vector<double> eps_schedule{1e-1, 1e-2, 1e-3};
  SolverOptions solver;
};

enum class OutcomeTag { KMeasureFound, ClosureMeasureOnly, Infeasible, Undetermined };
std::string to_string(OutcomeTag tag);

// q = sum_i theta_i a^_i with theta_i <= 0 on inequality rows, q in
// Ideal(c~_eq)_{2k} + Qmod(c~_in)_{2k}, and sum_i theta_i b_i < 0.
struct NonexistenceCertificate {
  int order = 0;
  Eigen::VectorXd theta;
  Polynomial q;
  SosDecomposition decomposition;
  double pairing_value = 0.0;
  double residual = 0.0;  // max coefficient of q - decomposition
  double min_gram_eigenvalue = 0.0;
};

struct CertificateCheck {
  double residual = 0.0;        // q vs. the re-expanded decomposition
  double combination = 0.0;     // q vs. sum theta_i a^_i
  double pairing = 0.0;         // recomputed sum theta_i b_i
  double min_gram_eigenvalue = 0.0;
  double sign_violation = 0.0;  // largest positive theta on an inequality row
  bool valid = false;
};

// Re-derives every quantity from the certificate and the homogenized rows.
CertificateCheck verify_certificate(const NonexistenceCertificate& cert, const std::vector<Polynomial>& a_hat,
                                    const Eigen::VectorXd& b, int m1, double tol = 1e-6);

NonexistenceCertificate certify_nonexistence(const ConicSolution& sol, const RelaxationInstance& context);

struct OrderTrace {
  int attempt = 0;
  std::uint64_t seed = 0;
  int k = 0;
  SolveStatus status = SolveStatus::NumericalTrouble;
  bool near_optimal = false;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  std::vector<FlatReport> flats;
  std::vector<std::string> notes;
};

struct GtmpOutcome {
  OutcomeTag tag = OutcomeTag::Undetermined;
  int order = 0;   // relaxation order of the deciding solve
  int flat_t = 0;  // truncation order of the extracted measure
  std::optional<AtomicMeasure> measure;  // Original for KMeasureFound, Lifted for ClosureMeasureOnly
  std::optional<AtomicMeasure> lifted_measure;  // the extracted measure on the sphere
  std::optional<NonexistenceCertificate> certificate;
  std::vector<double> approximant_eps;
  std::vector<AtomicMeasure> approximants;  // ClosureMeasureOnly only
  std::vector<double> tau;                  // x0 coordinates of the lifted atoms
  std::vector<std::string> warnings;
  std::vector<std::string> unchecked_hypotheses;  // Undetermined only
  std::vector<OrderTrace> trace;
};

struct RowCheck {
  double eq_violation = 0.0;    // max |<a_i, mu> - b_i| / max(1, |b_i|)
  double ineq_violation = 0.0;  // max (b_i - <a_i, mu>)_+ / max(1, |b_i|)
  double set_violation = 0.0;   // constraint values scaled by ||(1, u)||^deg
  int worst_row = -1;
  bool ok = false;
};

RowCheck check_measure_rows(const MomentProblemSpec& spec, const AtomicMeasure& mu, double tol);

GtmpOutcome solve_gtmp(const MomentProblemSpec& spec, const GtmpOptions& opts = {});

enum class MembershipTag { InRelaxation, NotInClosure, Undetermined };
std::string to_string(MembershipTag tag);

struct MomentMembership {
  MembershipTag tag = MembershipTag::Undetermined;
  int order = 0;
  std::optional<NonexistenceCertificate> certificate;
  // Flat witness from a re-solve with a random objective, when one exists.
  std::optional<AtomicMeasure> lifted_measure;
  std::vector<OrderTrace> trace;
};

MomentMembership membership_moment_cone(const Tms& y, const SemialgebraicSet& K, int k_max,
                                        const GtmpOptions& opts = {});

struct SosMembership {
  bool member = false;
  int order = 0;
  std::optional<SosDecomposition> decomposition;
  double residual = 0.0;
  std::vector<OrderTrace> trace;
};

SosMembership membership_sos_cone(const Polynomial& p, const SemialgebraicSet& K, int k_max,
                                  const GtmpOptions& opts = {});

enum class RationalTag { Solved, NormalizationInfeasible, Undetermined };
std::string to_string(RationalTag tag);

struct RationalResult {
  RationalTag tag = RationalTag::Undetermined;
  double value = 0.0;
  int order = 0;
  bool flat = false;
  std::optional<AtomicMeasure> lifted_measure;
  std::optional<AtomicMeasure> minimizers;  // set when every atom has tau > tau_tol
  std::vector<OrderTrace> trace;
};

// min f/g over K through min <f^, w> s.t. <g^, w> = 1.
RationalResult solve_rational_opt(const Polynomial& f, const Polynomial& g, const SemialgebraicSet& K,
                                  const GtmpOptions& opts = {});

}  // namespace gtmp
