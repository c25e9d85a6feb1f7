#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace gtmp {

// Exponent vector of a monomial x^alpha. The total degree is cached.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exponents);

  static MultiIndex zero(int num_vars);
  static MultiIndex unit(int num_vars, int var);

  int num_vars() const { return static_cast<int>(exponents_.size()); }
  int degree() const { return degree_; }
  int operator[](int i) const { return exponents_[i]; }
  const std::vector<int>& exponents() const { return exponents_; }

  MultiIndex operator+(const MultiIndex& other) const;
  // (e0, alpha): used to lift an index into the homogenized variable set.
  MultiIndex prepend(int e0) const;
  // alpha without its first exponent.
  MultiIndex drop_first() const;

  bool operator==(const MultiIndex& other) const = default;
  std::string to_string() const;

 private:
  std::vector<int> exponents_;
  int degree_ = 0;
};

// Graded lexicographic order: lower total degree first; within a degree,
// x1^d comes before x1^(d-1) x2 and so on.
struct GrlexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

struct MultiIndexHash {
  std::size_t operator()(const MultiIndex& a) const;
};

// All monomials of total degree <= max_degree, in graded lexicographic order.
std::vector<MultiIndex> monomials_up_to(int num_vars, int max_degree);
// All monomials of total degree == degree, in graded lexicographic order.
std::vector<MultiIndex> monomials_of_degree(int num_vars, int degree);
// Number of monomials of degree <= d in n variables, C(n + d, d).
std::size_t monomial_count(int num_vars, int max_degree);

class Polynomial {
 public:
  using TermMap = std::map<MultiIndex, double, GrlexLess>;

  Polynomial() = default;
  explicit Polynomial(int num_vars);

  static Polynomial constant(int num_vars, double value);
  static Polynomial variable(int num_vars, int var);
  static Polynomial monomial(const MultiIndex& index, double coefficient = 1.0);

  int num_vars() const { return num_vars_; }
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  bool is_homogeneous() const;
  const TermMap& terms() const { return terms_; }
  double coefficient(const MultiIndex& index) const;

  // Accumulates; a coefficient that becomes exactly zero is removed.
  void add_term(const MultiIndex& index, double coefficient);

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial operator*(double scalar) const;
  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial pow(int exponent) const;

  double evaluate(std::span<const double> point) const;
  double evaluate(const Eigen::VectorXd& point) const;

  // Largest absolute coefficient of this - other.
  double max_coefficient_difference(const Polynomial& other) const;

  // Text form accepted by parse_polynomial (variables x1..xn, or x0..xn
  // when lifted).
  std::string to_string(bool lifted = false) const;

 private:
  int num_vars_ = 0;
  TermMap terms_;
};

inline Polynomial operator*(double scalar, const Polynomial& p) { return p * scalar; }

// x0^target_degree * p(x / x0), a homogeneous polynomial in (x0, x).
Polynomial homogenize(const Polynomial& p, int target_degree);
// Homogenization at the polynomial's own degree.
Polynomial homogenize(const Polynomial& p);
// Sets x0 = 1 in a polynomial over (x0, x).
Polynomial dehomogenize(const Polynomial& p);
// Partial derivative with respect to variable var.
Polynomial derivative(const Polynomial& p, int var);

// Parses terms like "3*x1^2*x2 - x3 + 1". Parentheses and integer powers
// of parenthesized factors are accepted and expanded. With allow_x0, the
// variable set is x0..x{num_vars-1}; otherwise x1..x{num_vars}.
Polynomial parse_polynomial(std::string_view text, int num_vars, bool allow_x0 = false);

// The finite exponent set A, kept sorted in graded lexicographic order.
class PowerSupport {
 public:
  PowerSupport() = default;
  PowerSupport(int num_vars, std::vector<MultiIndex> indices);

  // A = N^n_d.
  static PowerSupport full(int num_vars, int degree);

  int num_vars() const { return num_vars_; }
  int deg() const { return deg_; }
  std::size_t size() const { return indices_.size(); }
  const MultiIndex& operator[](std::size_t i) const { return indices_[i]; }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  std::optional<std::size_t> position(const MultiIndex& index) const;
  bool contains(const MultiIndex& index) const { return position(index).has_value(); }

  // {(d - |alpha|, alpha) : alpha in A} over n + 1 variables.
  PowerSupport homogenized() const;

 private:
  int num_vars_ = 0;
  int deg_ = 0;
  std::vector<MultiIndex> indices_;
};

}  // namespace gtmp
