#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gtmp/engine.hpp"
#include "gtmp/problem_file.hpp"
#include "gtmp/tensor.hpp"

namespace gtmp {

// The result of one invocation; exactly one member is set, chosen by mode.
struct RunResult {
  ProblemMode mode = ProblemMode::Gtmp;
  std::optional<GtmpOutcome> gtmp;
  std::optional<TensorOutcome> tensor;
  std::optional<MomentMembership> membership;
  std::optional<RationalResult> rational;

  // 0 found/member/solved, 2 infeasible, 3 closure only, 4 undetermined.
  int exit_code() const;
};

RunResult run_problem(const ProblemFile& problem, const GtmpOptions& opts);

// Numbers are rounded to 12 significant digits; nothing time-dependent is
// included, so equal inputs give byte-identical dumps.
nlohmann::json make_report(const ProblemFile& problem, const RunResult& result, const GtmpOptions& opts);
std::string render_text(const nlohmann::json& report);

// Rounds to 12 significant digits.
double round12(double x);

struct VerifyResult {
  bool ok = false;
  std::vector<std::string> diffs;  // one line per violated check
};

// Re-checks a report against its problem using only the polynomial data:
// measures against rows and K, certificates by re-expansion.
VerifyResult verify_report(const nlohmann::json& report, const ProblemFile& problem, double tol = 1e-5);

}  // namespace gtmp
