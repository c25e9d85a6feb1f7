#include "gtmp/problem_file.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gtmp/errors.hpp"

namespace gtmp {
namespace {

using nlohmann::json;

std::string escape_token(std::string_view key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

// Byte offset of every value in a JSON document, keyed by JSON pointer.
// Runs only on text nlohmann has already accepted, so it skips validation.
class PositionIndex {
 public:
  explicit PositionIndex(std::string_view text) : text_(text) {
    skip_ws();
    value("");
  }

  // Offset of the deepest recorded prefix of ptr.
  std::size_t at(std::string ptr) const {
    while (true) {
      auto it = offsets_.find(ptr);
      if (it != offsets_.end()) return it->second;
      const auto slash = ptr.rfind('/');
      if (slash == std::string::npos) return 0;
      ptr.resize(slash);
    }
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string string_token() {
    std::string out;
    ++pos_;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) {
        ++pos_;
        const char e = text_[pos_];
        if (e == 'n') {
          out += '\n';
        } else if (e == 't') {
          out += '\t';
        } else if (e == 'u') {
          out += "\\u";
        } else {
          out += e;
        }
      } else {
        out += text_[pos_];
      }
      ++pos_;
    }
    ++pos_;
    return out;
  }

  void value(const std::string& path) {
    offsets_[path] = pos_;
    if (pos_ >= text_.size()) return;
    const char c = text_[pos_];
    if (c == '{') {
      ++pos_;
      skip_ws();
      while (pos_ < text_.size() && text_[pos_] != '}') {
        const std::string key = string_token();
        skip_ws();
        ++pos_;  // ':'
        skip_ws();
        value(path + "/" + escape_token(key));
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ',') ++pos_;
        skip_ws();
      }
      ++pos_;
    } else if (c == '[') {
      ++pos_;
      skip_ws();
      int i = 0;
      while (pos_ < text_.size() && text_[pos_] != ']') {
        value(path + "/" + std::to_string(i++));
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ',') ++pos_;
        skip_ws();
      }
      ++pos_;
    } else if (c == '"') {
      string_token();
    } else {
      while (pos_ < text_.size() && !std::strchr(",]} \t\r\n", text_[pos_])) ++pos_;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::map<std::string, std::size_t> offsets_;
};

class Reader {
 public:
  Reader(std::string_view text, const PositionIndex& index) : text_(text), index_(index) {}

  [[noreturn]] void fail_at(std::size_t offset, const std::string& msg) const {
    const auto [line, col] = line_column(text_, offset);
    std::ostringstream os;
    os << "line " << line << ", column " << col << ": " << msg;
    throw SchemaError(os.str());
  }

  [[noreturn]] void fail(const std::string& ptr, const std::string& msg) const {
    fail_at(index_.at(ptr), msg + " (at " + (ptr.empty() ? "/" : ptr) + ")");
  }

  void only_keys(const json& obj, const std::string& ptr, std::initializer_list<std::string_view> allowed) const {
    if (!obj.is_object()) fail(ptr, "expected an object");
    for (const auto& [key, v] : obj.items()) {
      (void)v;
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        fail(ptr + "/" + escape_token(key), "unknown field \"" + key + "\"");
      }
    }
  }

  const json& field(const json& obj, const std::string& ptr, const std::string& key) const {
    auto it = obj.find(key);
    if (it == obj.end()) fail(ptr, "missing field \"" + key + "\"");
    return *it;
  }

  int integer(const json& v, const std::string& ptr) const {
    if (!v.is_number_integer()) fail(ptr, "expected an integer");
    return v.get<int>();
  }

  double number(const json& v, const std::string& ptr) const {
    if (!v.is_number()) fail(ptr, "expected a number");
    return v.get<double>();
  }

  std::string string(const json& v, const std::string& ptr) const {
    if (!v.is_string()) fail(ptr, "expected a string");
    return v.get<std::string>();
  }

  const json& array(const json& v, const std::string& ptr) const {
    if (!v.is_array()) fail(ptr, "expected an array");
    return v;
  }

  Polynomial polynomial(const json& v, const std::string& ptr, int num_vars) const {
    const std::string s = string(v, ptr);
    try {
      return parse_polynomial(s, num_vars);
    } catch (const ParseError& e) {
      fail_at(index_.at(ptr) + 1 + e.position(), std::string(e.what()) + " (at " + ptr + ")");
    }
  }

  MultiIndex exponent(const json& v, const std::string& ptr, int num_vars) const {
    array(v, ptr);
    if (static_cast<int>(v.size()) != num_vars) {
      fail(ptr, "exponent needs " + std::to_string(num_vars) + " entries");
    }
    std::vector<int> e;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const int x = integer(v[i], ptr + "/" + std::to_string(i));
      if (x < 0) fail(ptr + "/" + std::to_string(i), "exponent must be nonnegative");
      e.push_back(x);
    }
    return MultiIndex(std::move(e));
  }

 private:
  std::string_view text_;
  const PositionIndex& index_;
};

SemialgebraicSet read_set(const Reader& r, const json& root, int n) {
  SemialgebraicSet K = SemialgebraicSet::whole_space(n);
  auto it = root.find("set");
  if (it == root.end()) return K;
  const json& s = *it;
  r.only_keys(s, "/set", {"equalities", "inequalities", "closed_at_infinity"});
  for (const char* kind : {"equalities", "inequalities"}) {
    auto jt = s.find(kind);
    if (jt == s.end()) continue;
    const std::string ptr = std::string("/set/") + kind;
    r.array(*jt, ptr);
    for (std::size_t i = 0; i < jt->size(); ++i) {
      Polynomial c = r.polynomial((*jt)[i], ptr + "/" + std::to_string(i), n);
      (std::string(kind) == "equalities" ? K.equalities : K.inequalities).push_back(std::move(c));
    }
  }
  if (auto jt = s.find("closed_at_infinity"); jt != s.end()) {
    if (!jt->is_boolean()) r.fail("/set/closed_at_infinity", "expected true or false");
    K.closed_at_infinity = jt->get<bool>();
  }
  return K;
}

PowerSupport read_support(const Reader& r, const json& root, int n) {
  const json& s = r.field(root, "", "support");
  if (s.is_string()) {
    const std::string text = s.get<std::string>();
    if (text.rfind("full:", 0) != 0) r.fail("/support", "expected \"full:<degree>\" or a list of exponents");
    int d = -1;
    try {
      std::size_t used = 0;
      d = std::stoi(text.substr(5), &used);
      if (used != text.size() - 5) d = -1;
    } catch (const std::exception&) {
      d = -1;
    }
    if (d < 1) r.fail("/support", "support degree must be a positive integer");
    return PowerSupport::full(n, d);
  }
  r.array(s, "/support");
  if (s.empty()) r.fail("/support", "support must not be empty");
  std::vector<MultiIndex> idx;
  std::set<std::vector<int>> seen;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const std::string ptr = "/support/" + std::to_string(i);
    MultiIndex a = r.exponent(s[i], ptr, n);
    if (!seen.insert(a.exponents()).second) r.fail(ptr, "repeated exponent");
    idx.push_back(std::move(a));
  }
  return PowerSupport(n, std::move(idx));
}

void check_in_support(const Reader& r, const Polynomial& p, const PowerSupport& A, const std::string& ptr) {
  for (const auto& [alpha, c] : p.terms()) {
    (void)c;
    if (!A.contains(alpha)) r.fail(ptr, "term with exponent " + alpha.to_string() + " lies outside the support");
  }
}

void read_rows(const Reader& r, const json& root, ProblemFile& pf) {
  const int n = pf.spec.K.num_vars;
  const json& rows = r.array(r.field(root, "", "rows"), "/rows");
  if (rows.empty()) r.fail("/rows", "at least one row is required");
  std::vector<double> rhs;
  bool seen_ge = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string ptr = "/rows/" + std::to_string(i);
    const json& row = rows[i];
    r.only_keys(row, ptr, {"poly", "rel", "rhs"});
    Polynomial a = r.polynomial(r.field(row, ptr, "poly"), ptr + "/poly", n);
    check_in_support(r, a, pf.spec.support, ptr + "/poly");
    const std::string rel = r.string(r.field(row, ptr, "rel"), ptr + "/rel");
    if (rel == "eq") {
      if (seen_ge) r.fail(ptr + "/rel", "equality rows must precede \"ge\" rows");
      ++pf.spec.m1;
    } else if (rel == "ge") {
      seen_ge = true;
    } else {
      r.fail(ptr + "/rel", "rel must be \"eq\" or \"ge\"");
    }
    rhs.push_back(r.number(r.field(row, ptr, "rhs"), ptr + "/rhs"));
    pf.spec.a_polys.push_back(std::move(a));
  }
  pf.spec.b_vals = Eigen::Map<Eigen::VectorXd>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
}

SymmetricTensor read_tensor(const Reader& r, const json& root, int n, std::vector<std::string>& warnings) {
  const json& t = r.field(root, "", "tensor");
  r.only_keys(t, "/tensor", {"order", "entries"});
  const int order = r.integer(r.field(t, "/tensor", "order"), "/tensor/order");
  if (order < 1) r.fail("/tensor/order", "tensor order must be positive");
  SymmetricTensor B(order, n + 1);
  const json& entries = r.array(r.field(t, "/tensor", "entries"), "/tensor/entries");
  std::map<std::vector<int>, double> seen;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string ptr = "/tensor/entries/" + std::to_string(i);
    const json& e = entries[i];
    r.only_keys(e, ptr, {"index", "value"});
    const json& ix = r.array(r.field(e, ptr, "index"), ptr + "/index");
    if (static_cast<int>(ix.size()) != order) r.fail(ptr + "/index", "index needs " + std::to_string(order) + " entries");
    std::vector<int> tup;
    for (std::size_t j = 0; j < ix.size(); ++j) {
      const int v = r.integer(ix[j], ptr + "/index/" + std::to_string(j));
      if (v < 0 || v > n) r.fail(ptr + "/index/" + std::to_string(j), "index outside 0.." + std::to_string(n));
      tup.push_back(v);
    }
    if (!std::is_sorted(tup.begin(), tup.end())) {
      warnings.push_back("tensor entry " + std::to_string(i) + " had unsorted indices; they were sorted");
      std::sort(tup.begin(), tup.end());
    }
    const double value = r.number(r.field(e, ptr, "value"), ptr + "/value");
    auto [it, fresh] = seen.emplace(tup, value);
    if (!fresh && it->second != value) r.fail(ptr, "entry conflicts with an earlier entry for the same sorted index");
    B.set(tup, value);
  }
  return B;
}

Tms read_moments(const Reader& r, const json& root, const PowerSupport& A) {
  const json& m = r.array(r.field(root, "", "moments"), "/moments");
  Tms y;
  y.support = A;
  y.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(A.size()));
  std::vector<bool> filled(A.size(), false);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const std::string ptr = "/moments/" + std::to_string(i);
    r.only_keys(m[i], ptr, {"alpha", "value"});
    const MultiIndex a = r.exponent(r.field(m[i], ptr, "alpha"), ptr + "/alpha", A.num_vars());
    const auto pos = A.position(a);
    if (!pos) r.fail(ptr + "/alpha", "exponent " + a.to_string() + " is not in the support");
    if (filled[*pos]) r.fail(ptr + "/alpha", "exponent " + a.to_string() + " given twice");
    filled[*pos] = true;
    y.values[static_cast<Eigen::Index>(*pos)] = r.number(r.field(m[i], ptr, "value"), ptr + "/value");
  }
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (!filled[i]) r.fail("/moments", "no value for exponent " + A[i].to_string());
  }
  return y;
}

}  // namespace

std::string to_string(ProblemMode mode) {
  switch (mode) {
    case ProblemMode::Gtmp: return "gtmp";
    case ProblemMode::TensorPsop: return "tensor-psop";
    case ProblemMode::TensorScp: return "tensor-scp";
    case ProblemMode::ConeMember: return "cone-member";
    case ProblemMode::RatOpt: return "ratopt";
  }
  return "unknown";
}

std::pair<int, int> line_column(std::string_view text, std::size_t offset) {
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

ProblemFile parse_problem(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string msg = e.what();
    if (auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
    throw SchemaError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
  }
  const PositionIndex index(text);
  const Reader r(text, index);

  r.only_keys(root, "", {"version", "name", "mode", "variables", "set", "support", "rows", "tensor", "moments",
                         "objective"});
  ProblemFile pf;
  pf.version = r.integer(r.field(root, "", "version"), "/version");
  if (pf.version != 1) r.fail("/version", "unsupported version " + std::to_string(pf.version));
  if (auto it = root.find("name"); it != root.end()) pf.name = r.string(*it, "/name");

  const std::string mode = r.string(r.field(root, "", "mode"), "/mode");
  static const std::map<std::string, ProblemMode> modes{{"gtmp", ProblemMode::Gtmp},
                                                        {"tensor-psop", ProblemMode::TensorPsop},
                                                        {"tensor-scp", ProblemMode::TensorScp},
                                                        {"cone-member", ProblemMode::ConeMember},
                                                        {"ratopt", ProblemMode::RatOpt}};
  auto m = modes.find(mode);
  if (m == modes.end()) r.fail("/mode", "unknown mode \"" + mode + "\"");
  pf.mode = m->second;

  const int n = r.integer(r.field(root, "", "variables"), "/variables");
  if (n < 1) r.fail("/variables", "variables must be at least 1");

  // Fields each mode accepts beyond the common header.
  std::set<std::string> allowed;
  switch (pf.mode) {
    case ProblemMode::Gtmp: allowed = {"set", "support", "rows"}; break;
    case ProblemMode::TensorPsop:
    case ProblemMode::TensorScp: allowed = {"tensor"}; break;
    case ProblemMode::ConeMember: allowed = {"set", "support", "moments"}; break;
    case ProblemMode::RatOpt: allowed = {"set", "objective"}; break;
  }
  for (const char* key : {"set", "support", "rows", "tensor", "moments", "objective"}) {
    if (root.contains(key) && !allowed.count(key)) r.fail(std::string("/") + key, std::string("field \"") + key + "\" is not used by mode " + mode);
  }

  switch (pf.mode) {
    case ProblemMode::Gtmp:
      pf.spec.K = read_set(r, root, n);
      pf.spec.support = read_support(r, root, n);
      read_rows(r, root, pf);
      pf.spec.validate();
      break;
    case ProblemMode::TensorPsop:
    case ProblemMode::TensorScp:
      pf.tensor = read_tensor(r, root, n, pf.warnings);
      pf.spec = tensor_problem(*pf.tensor, pf.mode == ProblemMode::TensorScp);
      break;
    case ProblemMode::ConeMember:
      pf.spec.K = read_set(r, root, n);
      pf.spec.support = read_support(r, root, n);
      pf.moments = read_moments(r, root, pf.spec.support);
      break;
    case ProblemMode::RatOpt: {
      pf.spec.K = read_set(r, root, n);
      const json& obj = r.field(root, "", "objective");
      r.only_keys(obj, "/objective", {"f", "g"});
      pf.f = r.polynomial(r.field(obj, "/objective", "f"), "/objective/f", n);
      pf.g = r.polynomial(r.field(obj, "/objective", "g"), "/objective/g", n);
      if (std::max(pf.f->degree(), pf.g->degree()) < 1) r.fail("/objective", "f and g cannot both be constant");
      break;
    }
  }
  return pf;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_problem(ss.str());
  } catch (const SchemaError& e) {
    throw SchemaError(path + ": " + e.what());
  } catch (const Error& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

}  // namespace gtmp
