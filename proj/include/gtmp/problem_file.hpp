#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "gtmp/relaxation.hpp"
#include "gtmp/tensor.hpp"

namespace gtmp {

enum class ProblemMode { Gtmp, TensorPsop, TensorScp, ConeMember, RatOpt };
std::string to_string(ProblemMode mode);

// A parsed and schema-checked problem file. Only the members that belong to
// the mode are populated. The format is described in docs/format.md.
struct ProblemFile {
  int version = 1;
  ProblemMode mode = ProblemMode::Gtmp;
  std::string name;
  MomentProblemSpec spec;                 // gtmp; K and support for cone-member and ratopt
  std::optional<SymmetricTensor> tensor;  // tensor-psop, tensor-scp
  std::optional<Tms> moments;             // cone-member
  std::optional<Polynomial> f, g;         // ratopt
  std::vector<std::string> warnings;
};

// Throws SchemaError whose message starts with "line L, column C:".
ProblemFile parse_problem(std::string_view text);
ProblemFile load_problem(const std::string& path);

// 1-based line and column of a byte offset.
std::pair<int, int> line_column(std::string_view text, std::size_t offset);

}  // namespace gtmp
