#include "gtmp/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gtmp/errors.hpp"

namespace gtmp {

MultiIndex::MultiIndex(std::vector<int> exponents) : exponents_(std::move(exponents)) {
  for (int e : exponents_) {
    if (e < 0) throw PreconditionError("negative exponent in multi-index");
    degree_ += e;
  }
}

MultiIndex MultiIndex::zero(int num_vars) { return MultiIndex(std::vector<int>(num_vars, 0)); }

MultiIndex MultiIndex::unit(int num_vars, int var) {
  std::vector<int> e(num_vars, 0);
  e.at(var) = 1;
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (other.num_vars() != num_vars()) {
    throw DimensionMismatchError("multi-index length mismatch");
  }
  std::vector<int> e(exponents_);
  for (int i = 0; i < num_vars(); ++i) e[i] += other.exponents_[i];
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::prepend(int e0) const {
  std::vector<int> e;
  e.reserve(exponents_.size() + 1);
  e.push_back(e0);
  e.insert(e.end(), exponents_.begin(), exponents_.end());
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::drop_first() const {
  return MultiIndex(std::vector<int>(exponents_.begin() + 1, exponents_.end()));
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    if (i) os << ',';
    os << exponents_[i];
  }
  os << ')';
  return os.str();
}

bool GrlexLess::operator()(const MultiIndex& a, const MultiIndex& b) const {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  // Within a degree the lexicographically larger exponent vector comes first.
  return std::lexicographical_compare(b.exponents().begin(), b.exponents().end(),
                                      a.exponents().begin(), a.exponents().end());
}

std::size_t MultiIndexHash::operator()(const MultiIndex& a) const {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (int e : a.exponents()) h = (h ^ static_cast<std::size_t>(e)) * 0x100000001b3ULL;
  return h;
}

namespace {

void enumerate_degree(int num_vars, int var, int remaining, std::vector<int>& current,
                      std::vector<MultiIndex>& out) {
  if (var == num_vars - 1) {
    current[var] = remaining;
    out.emplace_back(current);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[var] = e;
    enumerate_degree(num_vars, var + 1, remaining - e, current, out);
  }
  current[var] = 0;
}

}  // namespace

std::vector<MultiIndex> monomials_of_degree(int num_vars, int degree) {
  std::vector<MultiIndex> out;
  if (num_vars <= 0 || degree < 0) {
    if (num_vars == 0 && degree == 0) out.emplace_back(std::vector<int>{});
    return out;
  }
  std::vector<int> current(num_vars, 0);
  enumerate_degree(num_vars, 0, degree, current, out);
  return out;
}

std::vector<MultiIndex> monomials_up_to(int num_vars, int max_degree) {
  std::vector<MultiIndex> out;
  for (int d = 0; d <= max_degree; ++d) {
    auto layer = monomials_of_degree(num_vars, d);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

std::size_t monomial_count(int num_vars, int max_degree) {
  if (max_degree < 0) return 0;
  // C(n + d, d) computed incrementally; exact for the sizes used here.
  std::size_t c = 1;
  for (int i = 1; i <= max_degree; ++i) {
    c = c * static_cast<std::size_t>(num_vars + i) / static_cast<std::size_t>(i);
  }
  return c;
}

Polynomial::Polynomial(int num_vars) : num_vars_(num_vars) {
  if (num_vars < 0) throw PreconditionError("negative variable count");
}

Polynomial Polynomial::constant(int num_vars, double value) {
  Polynomial p(num_vars);
  p.add_term(MultiIndex::zero(num_vars), value);
  return p;
}

Polynomial Polynomial::variable(int num_vars, int var) {
  Polynomial p(num_vars);
  p.add_term(MultiIndex::unit(num_vars, var), 1.0);
  return p;
}

Polynomial Polynomial::monomial(const MultiIndex& index, double coefficient) {
  Polynomial p(index.num_vars());
  p.add_term(index, coefficient);
  return p;
}

int Polynomial::degree() const {
  // Terms are grlex-sorted, so the last one has maximal degree.
  return terms_.empty() ? 0 : terms_.rbegin()->first.degree();
}

bool Polynomial::is_homogeneous() const {
  if (terms_.empty()) return true;
  const int d = terms_.begin()->first.degree();
  return terms_.rbegin()->first.degree() == d;
}

double Polynomial::coefficient(const MultiIndex& index) const {
  auto it = terms_.find(index);
  return it == terms_.end() ? 0.0 : it->second;
}

void Polynomial::add_term(const MultiIndex& index, double coefficient) {
  if (index.num_vars() != num_vars_) {
    throw DimensionMismatchError("term has " + std::to_string(index.num_vars()) +
                                 " variables, polynomial has " + std::to_string(num_vars_));
  }
  if (coefficient == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(index, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == 0.0) terms_.erase(it);
  }
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  Polynomial out(*this);
  out += other;
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
  Polynomial out(*this);
  out -= other;
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (other.num_vars_ != num_vars_) throw DimensionMismatchError("polynomial variable count mismatch");
  for (const auto& [idx, c] : other.terms_) add_term(idx, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (other.num_vars_ != num_vars_) throw DimensionMismatchError("polynomial variable count mismatch");
  for (const auto& [idx, c] : other.terms_) add_term(idx, -c);
  return *this;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  if (other.num_vars_ != num_vars_) throw DimensionMismatchError("polynomial variable count mismatch");
  Polynomial out(num_vars_);
  for (const auto& [a, ca] : terms_) {
    for (const auto& [b, cb] : other.terms_) out.add_term(a + b, ca * cb);
  }
  return out;
}

Polynomial Polynomial::operator*(double scalar) const {
  Polynomial out(num_vars_);
  if (scalar == 0.0) return out;
  for (const auto& [idx, c] : terms_) out.add_term(idx, c * scalar);
  return out;
}

Polynomial Polynomial::operator-() const { return *this * -1.0; }

Polynomial Polynomial::pow(int exponent) const {
  if (exponent < 0) throw PreconditionError("negative polynomial power");
  Polynomial out = constant(num_vars_, 1.0);
  for (int i = 0; i < exponent; ++i) out = out * *this;
  return out;
}

double Polynomial::evaluate(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != num_vars_) {
    throw DimensionMismatchError("evaluation point has " + std::to_string(point.size()) +
                                 " coordinates, polynomial has " + std::to_string(num_vars_) +
                                 " variables");
  }
  double sum = 0.0;
  for (const auto& [idx, c] : terms_) {
    double term = c;
    for (int i = 0; i < num_vars_; ++i) {
      for (int e = 0; e < idx[i]; ++e) term *= point[i];
    }
    sum += term;
  }
  return sum;
}

double Polynomial::evaluate(const Eigen::VectorXd& point) const {
  return evaluate(std::span<const double>(point.data(), static_cast<std::size_t>(point.size())));
}

double Polynomial::max_coefficient_difference(const Polynomial& other) const {
  double worst = 0.0;
  Polynomial diff = *this - other;
  for (const auto& [idx, c] : diff.terms()) worst = std::max(worst, std::abs(c));
  return worst;
}

std::string Polynomial::to_string(bool lifted) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  // Highest degree first reads more naturally.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [idx, c] = *it;
    double mag = std::abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    bool wrote = false;
    if (mag != 1.0 || idx.degree() == 0) {
      os << mag;
      wrote = true;
    }
    for (int i = 0; i < idx.num_vars(); ++i) {
      if (idx[i] == 0) continue;
      if (wrote) os << "*";
      os << "x" << (lifted ? i : i + 1);
      if (idx[i] > 1) os << "^" << idx[i];
      wrote = true;
    }
  }
  return os.str();
}

Polynomial homogenize(const Polynomial& p, int target_degree) {
  if (target_degree < p.degree()) {
    throw DegreeUnderflowError("cannot homogenize degree " + std::to_string(p.degree()) +
                               " polynomial at degree " + std::to_string(target_degree));
  }
  Polynomial out(p.num_vars() + 1);
  for (const auto& [idx, c] : p.terms()) out.add_term(idx.prepend(target_degree - idx.degree()), c);
  return out;
}

Polynomial homogenize(const Polynomial& p) { return homogenize(p, p.degree()); }

Polynomial dehomogenize(const Polynomial& p) {
  if (p.num_vars() < 1) throw DimensionMismatchError("dehomogenize needs x0");
  Polynomial out(p.num_vars() - 1);
  for (const auto& [idx, c] : p.terms()) out.add_term(idx.drop_first(), c);
  return out;
}

Polynomial derivative(const Polynomial& p, int var) {
  if (var < 0 || var >= p.num_vars()) throw DimensionMismatchError("derivative variable out of range");
  Polynomial out(p.num_vars());
  for (const auto& [idx, c] : p.terms()) {
    const int e = idx[var];
    if (e == 0) continue;
    std::vector<int> ex = idx.exponents();
    ex[var] -= 1;
    out.add_term(MultiIndex(std::move(ex)), c * e);
  }
  return out;
}

PowerSupport::PowerSupport(int num_vars, std::vector<MultiIndex> indices)
    : num_vars_(num_vars), indices_(std::move(indices)) {
  for (const auto& a : indices_) {
    if (a.num_vars() != num_vars_) throw DimensionMismatchError("support index length mismatch");
  }
  std::sort(indices_.begin(), indices_.end(), GrlexLess{});
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
    throw PreconditionError("duplicate index in power support");
  }
  deg_ = indices_.empty() ? 0 : indices_.back().degree();
}

PowerSupport PowerSupport::full(int num_vars, int degree) {
  return PowerSupport(num_vars, monomials_up_to(num_vars, degree));
}

std::optional<std::size_t> PowerSupport::position(const MultiIndex& index) const {
  auto it = std::lower_bound(indices_.begin(), indices_.end(), index, GrlexLess{});
  if (it == indices_.end() || !(*it == index)) return std::nullopt;
  return static_cast<std::size_t>(it - indices_.begin());
}

PowerSupport PowerSupport::homogenized() const {
  std::vector<MultiIndex> lifted;
  lifted.reserve(indices_.size());
  for (const auto& a : indices_) lifted.push_back(a.prepend(deg_ - a.degree()));
  return PowerSupport(num_vars_ + 1, std::move(lifted));
}

}  // namespace gtmp
