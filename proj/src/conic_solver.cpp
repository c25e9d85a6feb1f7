// Homogeneous self-dual interior-point method with Nesterov-Todd scaling and
// Mehrotra predictor-corrector steps. Internal standard form:
//   min c'x  s.t.  A x = b,  G x + s = h,  s in R+^l x S+^{n1} x ... x S+^{nq}
// with x free. Inequality rows map to G = -a, h = -b; a PSD block
// F0 + sum x_j F_j maps to G = -F, h = F0. Zero blocks become equality rows.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <tuple>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "gtmp/conic.hpp"
#include "gtmp/errors.hpp"

namespace gtmp {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct ConeVec {
  VectorXd lin;
  std::vector<MatrixXd> mats;

  double dot(const ConeVec& o) const {
    double s = lin.dot(o.lin);
    for (std::size_t b = 0; b < mats.size(); ++b) s += (mats[b].array() * o.mats[b].array()).sum();
    return s;
  }
  double norm() const { return std::sqrt(dot(*this)); }
  ConeVec& axpy(double a, const ConeVec& o) {
    lin += a * o.lin;
    for (std::size_t b = 0; b < mats.size(); ++b) mats[b] += a * o.mats[b];
    return *this;
  }
  ConeVec scaled(double a) const {
    ConeVec r = *this;
    r.lin *= a;
    for (auto& m : r.mats) m *= a;
    return r;
  }
};

struct EqSource {
  int kind = 0;  // 0: eq row, 1: zero-block cell
  int index = 0;
  int row = 0;
  int col = 0;
  double scale = 1.0;  // internal row = original row / scale
};

struct PsdData {
  int size = 0;
  const MatrixMap* map = nullptr;
  MatrixXd h;
  std::vector<int> vars;                                        // variables touching the block
  std::vector<std::vector<std::tuple<int, int, double>>> cells;  // per entry of vars
};

struct StdForm {
  int n = 0;
  MatrixXd A;
  VectorXd b;
  std::vector<EqSource> a_src;
  MatrixXd Gl;
  VectorXd hl;
  std::vector<PsdData> psd;
  VectorXd c;

  int num_lin() const { return static_cast<int>(hl.size()); }
  double degree() const {
    double d = num_lin();
    for (const auto& p : psd) d += p.size;
    return d;
  }

  ConeVec zeros() const {
    ConeVec v;
    v.lin = VectorXd::Zero(num_lin());
    for (const auto& p : psd) v.mats.push_back(MatrixXd::Zero(p.size, p.size));
    return v;
  }
  ConeVec identity() const {
    ConeVec v;
    v.lin = VectorXd::Ones(num_lin());
    for (const auto& p : psd) v.mats.push_back(MatrixXd::Identity(p.size, p.size));
    return v;
  }
  ConeVec h() const {
    ConeVec v;
    v.lin = hl;
    for (const auto& p : psd) v.mats.push_back(p.h);
    return v;
  }
  // G x
  ConeVec G(const VectorXd& x) const {
    ConeVec v;
    v.lin = Gl * x;
    for (const auto& p : psd) {
      MatrixXd M = MatrixXd::Zero(p.size, p.size);
      for (const auto& cell : p.map->cells) {
        double s = 0.0;
        for (const auto& [j, c] : cell.terms) s += c * x[j];
        M(cell.row, cell.col) = -s;
        M(cell.col, cell.row) = -s;
      }
      v.mats.push_back(std::move(M));
    }
    return v;
  }
  // G' z
  VectorXd GT(const ConeVec& z) const {
    VectorXd out = Gl.transpose() * z.lin;
    for (std::size_t b = 0; b < psd.size(); ++b) psd[b].map->add_adjoint(z.mats[b], out, -1.0);
    return out;
  }
};

// Nesterov-Todd scaling W with W z = W^{-T} s = lambda.
struct Scaling {
  VectorXd w;
  VectorXd lam_lin;
  std::vector<MatrixXd> R, Rinv, T, RRt;
  std::vector<VectorXd> lam;

  ConeVec lambda() const {
    ConeVec v;
    v.lin = lam_lin;
    for (const auto& l : lam) v.mats.push_back(l.asDiagonal());
    return v;
  }
  ConeVec W(const ConeVec& z) const {
    ConeVec v;
    v.lin = w.cwiseProduct(z.lin);
    for (std::size_t b = 0; b < R.size(); ++b) v.mats.push_back(R[b].transpose() * z.mats[b] * R[b]);
    return v;
  }
  ConeVec WT(const ConeVec& u) const {
    ConeVec v;
    v.lin = w.cwiseProduct(u.lin);
    for (std::size_t b = 0; b < R.size(); ++b) v.mats.push_back(R[b] * u.mats[b] * R[b].transpose());
    return v;
  }
  ConeVec Winv(const ConeVec& u) const {
    ConeVec v;
    v.lin = u.lin.cwiseQuotient(w);
    for (std::size_t b = 0; b < R.size(); ++b) v.mats.push_back(Rinv[b].transpose() * u.mats[b] * Rinv[b]);
    return v;
  }
  ConeVec WtW(const ConeVec& u) const {
    ConeVec v;
    v.lin = w.cwiseAbs2().cwiseProduct(u.lin);
    for (std::size_t b = 0; b < R.size(); ++b) v.mats.push_back(RRt[b] * u.mats[b] * RRt[b]);
    return v;
  }
  ConeVec WtW_inv(const ConeVec& u) const {
    ConeVec v;
    v.lin = u.lin.cwiseQuotient(w.cwiseAbs2());
    for (std::size_t b = 0; b < R.size(); ++b) v.mats.push_back(T[b] * u.mats[b] * T[b]);
    return v;
  }
  // u with lambda o u = d.
  ConeVec lambda_solve(const ConeVec& d) const {
    ConeVec v;
    v.lin = d.lin.cwiseQuotient(lam_lin);
    for (std::size_t b = 0; b < lam.size(); ++b) {
      const VectorXd& l = lam[b];
      MatrixXd U = d.mats[b];
      for (int i = 0; i < U.rows(); ++i) {
        for (int j = 0; j < U.cols(); ++j) U(i, j) *= 2.0 / (l[i] + l[j]);
      }
      v.mats.push_back(std::move(U));
    }
    return v;
  }
};

Scaling identity_scaling(const StdForm& sf) {
  Scaling W;
  W.w = VectorXd::Ones(sf.num_lin());
  W.lam_lin = VectorXd::Ones(sf.num_lin());
  for (const auto& p : sf.psd) {
    MatrixXd I = MatrixXd::Identity(p.size, p.size);
    W.R.push_back(I);
    W.Rinv.push_back(I);
    W.T.push_back(I);
    W.RRt.push_back(I);
    W.lam.push_back(VectorXd::Ones(p.size));
  }
  return W;
}

bool compute_scaling(const ConeVec& s, const ConeVec& z, Scaling& W) {
  if ((s.lin.array() <= 0).any() || (z.lin.array() <= 0).any()) return false;
  W.w = (s.lin.array() / z.lin.array()).sqrt();
  W.lam_lin = (s.lin.array() * z.lin.array()).sqrt();
  W.R.clear();
  W.Rinv.clear();
  W.T.clear();
  W.RRt.clear();
  W.lam.clear();
  for (std::size_t b = 0; b < s.mats.size(); ++b) {
    Eigen::LLT<MatrixXd> ls(s.mats[b]), lz(z.mats[b]);
    if (ls.info() != Eigen::Success || lz.info() != Eigen::Success) return false;
    MatrixXd Ls = ls.matrixL();
    MatrixXd Lz = lz.matrixL();
    Eigen::JacobiSVD<MatrixXd> svd(Lz.transpose() * Ls, Eigen::ComputeFullU | Eigen::ComputeFullV);
    VectorXd lam = svd.singularValues();
    if (lam.size() && lam.minCoeff() <= 0.0) return false;
    VectorXd isq = lam.cwiseSqrt().cwiseInverse();
    MatrixXd R = Ls * svd.matrixV() * isq.asDiagonal();
    MatrixXd Rinv = isq.asDiagonal() * svd.matrixU().transpose() * Lz.transpose();
    W.T.push_back(Rinv.transpose() * Rinv);
    W.RRt.push_back(R * R.transpose());
    W.R.push_back(std::move(R));
    W.Rinv.push_back(std::move(Rinv));
    W.lam.push_back(std::move(lam));
  }
  return true;
}

// Replaces W by the scaling of (W^T st, W^{-1} zt) where st and zt are the
// stepped iterates in the current scaled coordinates.
bool update_scaling(Scaling& W, const ConeVec& st, const ConeVec& zt) {
  if ((st.lin.array() <= 0).any() || (zt.lin.array() <= 0).any()) return false;
  W.w = W.w.cwiseProduct((st.lin.array() / zt.lin.array()).sqrt().matrix());
  W.lam_lin = (st.lin.array() * zt.lin.array()).sqrt();
  for (std::size_t b = 0; b < st.mats.size(); ++b) {
    Eigen::LLT<MatrixXd> ls(0.5 * (st.mats[b] + st.mats[b].transpose()));
    Eigen::LLT<MatrixXd> lz(0.5 * (zt.mats[b] + zt.mats[b].transpose()));
    if (ls.info() != Eigen::Success || lz.info() != Eigen::Success) return false;
    MatrixXd Ls = ls.matrixL();
    MatrixXd Lz = lz.matrixL();
    Eigen::JacobiSVD<MatrixXd> svd(Lz.transpose() * Ls, Eigen::ComputeFullU | Eigen::ComputeFullV);
    VectorXd lam = svd.singularValues();
    if (lam.size() && lam.minCoeff() <= 0.0) return false;
    VectorXd isq = lam.cwiseSqrt().cwiseInverse();
    MatrixXd R = W.R[b] * Ls * svd.matrixV() * isq.asDiagonal();
    MatrixXd Rinv = isq.asDiagonal() * svd.matrixU().transpose() * Lz.transpose() * W.Rinv[b];
    W.T[b] = Rinv.transpose() * Rinv;
    W.RRt[b] = R * R.transpose();
    W.R[b] = std::move(R);
    W.Rinv[b] = std::move(Rinv);
    W.lam[b] = std::move(lam);
  }
  return true;
}

// Largest alpha with lambda + alpha * d in the cone (infinity when unbounded).
double max_step(const Scaling& W, const ConeVec& d) {
  double amax = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < d.lin.size(); ++i) {
    if (d.lin[i] < 0) amax = std::min(amax, -W.lam_lin[i] / d.lin[i]);
  }
  for (std::size_t b = 0; b < d.mats.size(); ++b) {
    if (d.mats[b].rows() == 0) continue;
    VectorXd isq = W.lam[b].cwiseSqrt().cwiseInverse();
    MatrixXd M = isq.asDiagonal() * d.mats[b] * isq.asDiagonal();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(M, Eigen::EigenvaluesOnly);
    double lmin = es.eigenvalues()[0];
    if (lmin < 0) amax = std::min(amax, -1.0 / lmin);
  }
  return amax;
}

// Most negative eigenvalue across the cone, as a shift amount.
double cone_shift(const ConeVec& v) {
  double t = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < v.lin.size(); ++i) t = std::max(t, -v.lin[i]);
  for (const auto& m : v.mats) {
    if (m.rows() == 0) continue;
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(m, Eigen::EigenvaluesOnly);
    t = std::max(t, -es.eigenvalues()[0]);
  }
  return t;
}

ConeVec jordan(const ConeVec& a, const ConeVec& b) {
  ConeVec v;
  v.lin = a.lin.cwiseProduct(b.lin);
  for (std::size_t k = 0; k < a.mats.size(); ++k) {
    MatrixXd P = a.mats[k] * b.mats[k];
    v.mats.push_back(0.5 * (P + P.transpose()));
  }
  return v;
}

class KktSystem {
 public:
  explicit KktSystem(const StdForm& sf) : sf_(sf) {
    std::vector<bool> covered(static_cast<std::size_t>(sf.n), false);
    for (int j = 0; j < sf.n; ++j) covered[static_cast<std::size_t>(j)] = sf.Gl.col(j).squaredNorm() > 0.0;
    for (const auto& p : sf.psd)
      for (int j : p.vars) covered[static_cast<std::size_t>(j)] = true;
    for (bool c : covered) uncovered_ = uncovered_ || !c;
    if (uncovered_ && sf.A.rows() > 0) AtA_ = sf.A.transpose() * sf.A;
  }

  bool factor(const Scaling& W) {
    W_ = &W;
    const int n = sf_.n;
    MatrixXd H = sf_.Gl.transpose() * W.w.cwiseAbs2().cwiseInverse().asDiagonal() * sf_.Gl;
    for (std::size_t b = 0; b < sf_.psd.size(); ++b) add_block(sf_.psd[b], W.T[b], H);
    // Variables outside every cone leave H singular. Adding rho A'A and
    // rho A' ry on the right-hand side keeps the solution unchanged.
    rho_ = 0.0;
    if (AtA_.size() > 0) {
      const double ha = H.diagonal().cwiseAbs().maxCoeff();
      const double aa = AtA_.diagonal().cwiseAbs().maxCoeff();
      if (aa > 0.0) rho_ = std::max(ha, 1.0) / aa;
      H += rho_ * AtA_;
    }
    // Symmetric diagonal equilibration before the Cholesky factorization.
    dscale_ = VectorXd::Ones(n);
    for (int i = 0; i < n; ++i) {
      if (H(i, i) > 0) dscale_[i] = 1.0 / std::sqrt(H(i, i));
    }
    H = dscale_.asDiagonal() * H * dscale_.asDiagonal();
    At_ = dscale_.asDiagonal() * sf_.A.transpose();
    double reg = 0.0;
    for (int attempt = 0; attempt < 8; ++attempt, reg = reg == 0.0 ? 1e-14 : reg * 100.0) {
      MatrixXd Hr = H;
      Hr.diagonal().array() += reg;
      hllt_.compute(Hr);
      if (hllt_.info() != Eigen::Success) continue;
      if (sf_.A.rows() == 0) return true;
      MatrixXd LinvAt = hllt_.matrixL().solve(At_);
      MatrixXd S = LinvAt.transpose() * LinvAt;
      sllt_.compute(S);
      if (sllt_.info() == Eigen::Success) return true;
      S.diagonal().array() += 1e-14 * std::max(1.0, S.diagonal().cwiseAbs().maxCoeff());
      sllt_.compute(S);
      if (sllt_.info() == Eigen::Success) return true;
    }
    return false;
  }

  double last_refinement_error() const { return last_err_; }

  // [0 A' G'; A 0 0; G 0 -WtW] (dx, dy, dz) = (rx, ry, rz), with refinement.
  void solve(const VectorXd& rx, const VectorXd& ry, const ConeVec& rz, VectorXd& dx, VectorXd& dy,
             ConeVec& dz) const {
    solve_once(rx, ry, rz, dx, dy, dz);
    const double scale = 1.0 + std::max({rx.norm(), ry.norm(), rz.norm()});
    for (int it = 0; it < 3; ++it) {
      VectorXd ex = rx - sf_.A.transpose() * dy - sf_.GT(dz);
      VectorXd ey = ry - sf_.A * dx;
      ConeVec ez = rz;
      ez.axpy(-1.0, sf_.G(dx)).axpy(1.0, W_->WtW(dz));
      double err = std::max({ex.norm(), ey.norm(), ez.norm()});
      last_err_ = err / scale;
      if (err <= 1e-14 * scale) break;
      VectorXd cx, cy;
      ConeVec cz;
      solve_once(ex, ey, ez, cx, cy, cz);
      dx += cx;
      dy += cy;
      dz.axpy(1.0, cz);
    }
  }

 private:
  static void add_block(const PsdData& p, const MatrixXd& T, MatrixXd& H) {
    const int s = p.size;
    const int nv = static_cast<int>(p.vars.size());
    std::vector<MatrixXd> X(nv);
    for (int jj = 0; jj < nv; ++jj) {
      const auto& cells = p.cells[jj];
      const int m = static_cast<int>(cells.size());
      MatrixXd Ta(s, m), Tb(m, s);
      for (int q = 0; q < m; ++q) {
        auto [a, bb, c] = cells[q];
        Ta.col(q) = T.col(a);
        Tb.row(q) = (a == bb ? 0.5 * c : c) * T.row(bb);
      }
      MatrixXd half = Ta * Tb;
      X[jj] = half + half.transpose();
    }
    for (int jj = 0; jj < nv; ++jj) {
      for (int ii = jj; ii < nv; ++ii) {
        double v = 0.0;
        for (const auto& [a, bb, c] : p.cells[ii]) v += c * (a == bb ? X[jj](a, a) : 2.0 * X[jj](a, bb));
        H(p.vars[ii], p.vars[jj]) += v;
        if (ii != jj) H(p.vars[jj], p.vars[ii]) += v;
      }
    }
  }

  void solve_once(const VectorXd& rx, const VectorXd& ry, const ConeVec& rz, VectorXd& dx, VectorXd& dy,
                  ConeVec& dz) const {
    VectorXd r0 = rx + sf_.GT(W_->WtW_inv(rz));
    if (rho_ > 0.0) r0 += rho_ * (sf_.A.transpose() * ry);
    VectorXd r1 = dscale_.cwiseProduct(r0);
    VectorXd Hr1 = hllt_.solve(r1);
    if (sf_.A.rows() > 0) {
      dy = sllt_.solve(At_.transpose() * Hr1 - ry);
      dx = dscale_.cwiseProduct(hllt_.solve(r1 - At_ * dy));
    } else {
      dy.resize(0);
      dx = dscale_.cwiseProduct(Hr1);
    }
    ConeVec g = sf_.G(dx);
    g.axpy(-1.0, rz);
    dz = W_->WtW_inv(g);
  }

  const StdForm& sf_;
  const Scaling* W_ = nullptr;
  Eigen::LLT<MatrixXd> hllt_;
  Eigen::LLT<MatrixXd> sllt_;
  VectorXd dscale_;
  MatrixXd At_;
  MatrixXd AtA_;
  bool uncovered_ = false;
  double rho_ = 0.0;
  mutable double last_err_ = 0.0;
};

struct RowKey {
  std::vector<std::pair<int, double>> terms;
  double rhs;
  bool operator<(const RowKey& o) const {
    if (terms != o.terms) return terms < o.terms;
    return rhs < o.rhs;
  }
};

// Equality rows in internal form before rank reduction.
struct RawEq {
  std::vector<SparseRow> rows;
  std::vector<EqSource> src;
};

RawEq collect_equalities(const ConicProgram& prog) {
  RawEq out;
  for (std::size_t i = 0; i < prog.eq_rows.size(); ++i) {
    out.rows.push_back(prog.eq_rows[i]);
    out.src.push_back({0, static_cast<int>(i), 0, 0, 1.0});
  }
  std::map<RowKey, int> seen;
  for (std::size_t b = 0; b < prog.zero_blocks.size(); ++b) {
    for (const auto& cell : prog.zero_blocks[b].cells) {
      SparseRow r;
      r.terms = cell.terms;
      r.rhs = -cell.constant;
      RowKey key{r.terms, r.rhs};
      if (seen.count(key)) continue;
      seen.emplace(std::move(key), static_cast<int>(out.rows.size()));
      out.rows.push_back(std::move(r));
      out.src.push_back({1, static_cast<int>(b), cell.row, cell.col, 1.0});
    }
  }
  return out;
}

struct Reduction {
  StdForm sf;
  std::optional<DualRay> inconsistency;  // set when the equalities alone are infeasible
};

DualRay empty_ray(const ConicProgram& prog) {
  DualRay ray;
  ray.eq = VectorXd::Zero(static_cast<Eigen::Index>(prog.eq_rows.size()));
  ray.ineq = VectorXd::Zero(static_cast<Eigen::Index>(prog.ineq_rows.size()));
  for (const auto& b : prog.psd_blocks) ray.psd.push_back(MatrixXd::Zero(b.size, b.size));
  for (const auto& b : prog.zero_blocks) ray.zero.push_back(MatrixXd::Zero(b.size, b.size));
  return ray;
}

void assign_eq_multiplier(const EqSource& src, double y, VectorXd& eq, std::vector<MatrixXd>& zero) {
  const double v = y / src.scale;
  if (src.kind == 0) {
    eq[src.index] += v;
  } else if (src.row == src.col) {
    zero[src.index](src.row, src.row) += v;
  } else {
    zero[src.index](src.row, src.col) += 0.5 * v;
    zero[src.index](src.col, src.row) += 0.5 * v;
  }
}

Reduction reduce(const ConicProgram& prog) {
  Reduction red;
  StdForm& sf = red.sf;
  sf.n = prog.dim;
  sf.c = prog.objective;

  RawEq raw = collect_equalities(prog);
  const int p = static_cast<int>(raw.rows.size());
  MatrixXd A = MatrixXd::Zero(p, sf.n);
  VectorXd b(p);
  for (int i = 0; i < p; ++i) {
    for (const auto& [j, c] : raw.rows[i].terms) A(i, j) += c;
    b[i] = raw.rows[i].rhs;
    double nrm = A.row(i).norm();
    if (nrm > 0) {
      A.row(i) /= nrm;
      b[i] /= nrm;
      raw.src[i].scale = nrm;
    }
  }

  std::vector<int> keep;
  if (p > 0) {
    Eigen::ColPivHouseholderQR<MatrixXd> qr(A.transpose());
    qr.setThreshold(1e-10);
    const int r = static_cast<int>(qr.rank());
    const auto& perm = qr.colsPermutation().indices();
    for (int i = 0; i < r; ++i) keep.push_back(perm[i]);
    if (r < p) {
      MatrixXd R11 = qr.matrixR().topLeftCorner(r, r).template triangularView<Eigen::Upper>();
      MatrixXd R12 = qr.matrixR().topRightCorner(r, p - r);
      MatrixXd C = r > 0 ? MatrixXd(R11.triangularView<Eigen::Upper>().solve(R12)) : MatrixXd::Zero(0, p - r);
      for (int q = 0; q < p - r; ++q) {
        const int dep = perm[r + q];
        double delta = b[dep];
        double mag = std::abs(b[dep]);
        for (int i = 0; i < r; ++i) {
          delta -= C(i, q) * b[perm[i]];
          mag += std::abs(C(i, q) * b[perm[i]]);
        }
        if (std::abs(delta) > 1e-9 * std::max(1.0, mag)) {
          // y = e_dep - sum C_i e_i gives A'y = 0 and b'y = delta.
          DualRay ray = empty_ray(prog);
          const double s = -1.0 / delta;
          assign_eq_multiplier(raw.src[dep], s, ray.eq, ray.zero);
          for (int i = 0; i < r; ++i) assign_eq_multiplier(raw.src[perm[i]], -s * C(i, q), ray.eq, ray.zero);
          ray.pairing = -1.0;
          red.inconsistency = std::move(ray);
          break;
        }
      }
    }
    std::sort(keep.begin(), keep.end());
  }
  sf.A.resize(static_cast<Eigen::Index>(keep.size()), sf.n);
  sf.b.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    sf.A.row(static_cast<Eigen::Index>(i)) = A.row(keep[i]);
    sf.b[static_cast<Eigen::Index>(i)] = b[keep[i]];
    sf.a_src.push_back(raw.src[keep[i]]);
  }

  const int l = static_cast<int>(prog.ineq_rows.size());
  sf.Gl = MatrixXd::Zero(l, sf.n);
  sf.hl.resize(l);
  for (int i = 0; i < l; ++i) {
    for (const auto& [j, c] : prog.ineq_rows[i].terms) sf.Gl(i, j) -= c;
    sf.hl[i] = -prog.ineq_rows[i].rhs;
  }

  for (const auto& map : prog.psd_blocks) {
    PsdData d;
    d.size = map.size;
    d.map = &map;
    d.h = map.assemble(VectorXd::Zero(sf.n));
    std::map<int, std::vector<std::tuple<int, int, double>>> by_var;
    for (const auto& cell : map.cells) {
      for (const auto& [j, c] : cell.terms) by_var[j].emplace_back(cell.row, cell.col, c);
    }
    for (auto& [j, cells] : by_var) {
      d.vars.push_back(j);
      d.cells.push_back(std::move(cells));
    }
    sf.psd.push_back(std::move(d));
  }
  return red;
}

double safe_norm(const VectorXd& v) { return v.size() ? v.norm() : 0.0; }

class Solver {
 public:
  Solver(const ConicProgram& prog, const SolverOptions& opts, const StdForm& sf)
      : prog_(prog), opts_(opts), sf_(sf), kkt_(sf) {}

  ConicSolution run();

 private:
  struct Iterate {
    VectorXd x, y;
    ConeVec s, z;
    double tau = 1.0, kappa = 1.0;
  };
  struct Direction {
    VectorXd dx, dy;
    ConeVec dz, ds, dz_scaled, ds_scaled;
    double dtau = 0.0, dkappa = 0.0;
  };

  bool initial_point();
  Direction newton(double eta, const ConeVec& u, double dkappa_rhs, const VectorXd& x1, const VectorXd& y1,
                   const ConeVec& z1);
  ConicSolution finish(SolveStatus status, int iters);
  std::optional<DualRay> ray_from_iterate() const;

  const ConicProgram& prog_;
  const SolverOptions& opts_;
  Iterate best_;
  double best_merit_ = std::numeric_limits<double>::infinity();
  const StdForm& sf_;
  KktSystem kkt_;
  Scaling W_;
  Iterate it_;
  VectorXd rx_, ry_;
  ConeVec rz_;
  double rtau_ = 0.0;
};

bool Solver::initial_point() {
  W_ = identity_scaling(sf_);
  if (!kkt_.factor(W_)) return false;
  const ConeVec h = sf_.h();
  VectorXd x, y, x2, y2;
  ConeVec z, z2;
  kkt_.solve(VectorXd::Zero(sf_.n), sf_.b, h, x, y, z);
  ConeVec s = z.scaled(-1.0);
  kkt_.solve(-sf_.c, VectorXd::Zero(sf_.b.size()), sf_.zeros(), x2, y2, z2);
  const ConeVec e = sf_.identity();
  double ts = cone_shift(s);
  if (ts >= -1e-8 * std::max(s.norm(), 1.0)) s.axpy(1.0 + ts, e);
  double tz = cone_shift(z2);
  if (tz >= -1e-8 * std::max(z2.norm(), 1.0)) z2.axpy(1.0 + tz, e);
  it_.x = x;
  it_.y = y2;
  it_.s = s;
  it_.z = z2;
  it_.tau = 1.0;
  it_.kappa = 1.0;
  return compute_scaling(it_.s, it_.z, W_);
}

Solver::Direction Solver::newton(double eta, const ConeVec& u, double dkappa_rhs, const VectorXd& x1,
                                 const VectorXd& y1, const ConeVec& z1) {
  Direction d;
  VectorXd x2, y2;
  ConeVec z2;
  ConeVec rz = rz_.scaled(-eta);
  rz.axpy(-1.0, W_.WT(u));
  kkt_.solve(-eta * rx_, -eta * ry_, rz, x2, y2, z2);
  const ConeVec h = sf_.h();
  const double tau = it_.tau, kappa = it_.kappa;
  double num = -eta * rtau_ - dkappa_rhs / tau - (sf_.c.dot(x2) + sf_.b.dot(y2) + h.dot(z2));
  double den = sf_.c.dot(x1) + sf_.b.dot(y1) + h.dot(z1) - kappa / tau;
  d.dtau = num / den;
  d.dx = x2 + d.dtau * x1;
  d.dy = y2 + d.dtau * y1;
  d.dz = z2;
  d.dz.axpy(d.dtau, z1);
  d.dz_scaled = W_.W(d.dz);
  d.ds_scaled = u;
  d.ds_scaled.axpy(-1.0, d.dz_scaled);
  d.ds = W_.WT(d.ds_scaled);
  d.dkappa = (dkappa_rhs - kappa * d.dtau) / tau;
  return d;
}

std::optional<DualRay> Solver::ray_from_iterate() const {
  const double bh = sf_.b.dot(it_.y) + sf_.h().dot(it_.z);
  if (!(bh < 0)) return std::nullopt;
  DualRay ray = empty_ray(prog_);
  const double s = -1.0 / bh;
  for (std::size_t i = 0; i < sf_.a_src.size(); ++i) {
    assign_eq_multiplier(sf_.a_src[i], s * it_.y[static_cast<Eigen::Index>(i)], ray.eq, ray.zero);
  }
  ray.ineq = s * it_.z.lin;
  for (std::size_t b = 0; b < it_.z.mats.size(); ++b) ray.psd[b] = s * it_.z.mats[b];
  ray.pairing = -1.0;
  return ray;
}

ConicSolution Solver::finish(SolveStatus status, int iters) {
  if (status == SolveStatus::NumericalTrouble) {
    auto ray = ray_from_iterate();
    if (ray && check_ray(prog_, *ray, opts_.ray_tol).valid) status = SolveStatus::PrimalInfeasible;
  }
  if ((status == SolveStatus::NumericalTrouble || status == SolveStatus::IterationLimit) &&
      std::isfinite(best_merit_)) {
    it_ = best_;
  }
  ConicSolution sol;
  sol.near_optimal = status == SolveStatus::Optimal || best_merit_ <= opts_.reduced_tol;
  sol.status = status;
  sol.iterations = iters;
  const double tau = it_.tau;
  sol.primal = it_.x / tau;
  sol.dual_eq = VectorXd::Zero(static_cast<Eigen::Index>(prog_.eq_rows.size()));
  for (const auto& b : prog_.zero_blocks) sol.dual_zero.push_back(MatrixXd::Zero(b.size, b.size));
  for (std::size_t i = 0; i < sf_.a_src.size(); ++i) {
    assign_eq_multiplier(sf_.a_src[i], -it_.y[static_cast<Eigen::Index>(i)] / tau, sol.dual_eq, sol.dual_zero);
  }
  sol.dual_ineq = it_.z.lin / tau;
  for (const auto& Z : it_.z.mats) sol.dual_psd.push_back(Z / tau);
  sol.objective_value = prog_.objective.dot(sol.primal);
  sol.residuals = check_kkt(prog_, sol);
  if (status == SolveStatus::PrimalInfeasible) sol.certificate_ray = ray_from_iterate();
  return sol;
}

ConicSolution Solver::run() {
  if (!initial_point()) return finish(SolveStatus::NumericalTrouble, 0);
  const double nu = sf_.degree();
  const double nb = std::max(1.0, safe_norm(sf_.b));
  const double nh = std::max(1.0, sf_.h().norm());
  const double nc = std::max(1.0, safe_norm(sf_.c));
  const ConeVec e = sf_.identity();
  const ConeVec h = sf_.h();
  int stall = 0;

  for (int iter = 0; iter <= opts_.max_iters; ++iter) {
    const double tau = it_.tau, kappa = it_.kappa;
    VectorXd ATy = sf_.A.transpose() * it_.y;
    VectorXd GTz = sf_.GT(it_.z);
    rx_ = ATy + GTz + tau * sf_.c;
    ry_ = sf_.A * it_.x - tau * sf_.b;
    ConeVec Gx = sf_.G(it_.x);
    rz_ = Gx;
    rz_.axpy(1.0, it_.s).axpy(-tau, h);
    const double cx = sf_.c.dot(it_.x);
    const double bh = sf_.b.dot(it_.y) + h.dot(it_.z);
    rtau_ = kappa + cx + bh;
    const double sz = it_.s.dot(it_.z);
    const double mu = (sz + tau * kappa) / (nu + 1.0);

    const double pres = std::max(safe_norm(ry_) / nb, rz_.norm() / nh) / tau;
    const double dres = safe_norm(rx_) / nc / tau;
    const double pobj = cx / tau, dobj = -bh / tau;
    const double gap = sz / (tau * tau);
    const double gscale = std::max(1.0, std::min(std::abs(pobj), std::abs(dobj)));
    if (opts_.verbose) {
      std::fprintf(stderr, "%3d pobj %+.9e dobj %+.9e pres %.2e dres %.2e gap %.2e tau %.2e kap %.2e\n", iter, pobj,
                   dobj, pres, dres, gap, tau, kappa);
    }
    const double merit = std::max({pres, dres, gap / gscale, std::abs(pobj - dobj) / gscale});
    if (merit < best_merit_) {
      best_merit_ = merit;
      best_ = it_;
      stall = 0;
    } else if (best_merit_ <= opts_.reduced_tol && ++stall >= 5) {
      if (opts_.verbose) std::fprintf(stderr, "no progress in 5 iterations\n");
      return finish(SolveStatus::NumericalTrouble, iter);
    }
    if (pres <= opts_.feas_tol && dres <= opts_.feas_tol && gap <= opts_.gap_tol * gscale &&
        std::abs(pobj - dobj) <= opts_.gap_tol * gscale) {
      return finish(SolveStatus::Optimal, iter);
    }
    if (bh < 0) {
      const double pinf = safe_norm(ATy + GTz) / nc / -bh;
      if (opts_.verbose) std::fprintf(stderr, "    infeasibility residual %.2e\n", pinf);
      if (pinf <= opts_.ray_tol) {
        auto ray = ray_from_iterate();
        if (ray && check_ray(prog_, *ray, opts_.ray_tol).valid) return finish(SolveStatus::PrimalInfeasible, iter);
      }
    }
    if (cx < 0) {
      ConeVec gs = Gx;
      gs.axpy(1.0, it_.s);
      const double dinf = std::max(safe_norm(sf_.A * it_.x) / nb, gs.norm() / nh) / -cx;
      if (dinf <= opts_.feas_tol) return finish(SolveStatus::DualInfeasible, iter);
    }
    if (iter == opts_.max_iters) return finish(SolveStatus::IterationLimit, iter);

    if (!kkt_.factor(W_)) {
      if (opts_.verbose) std::fprintf(stderr, "kkt factorization breakdown\n");
      return finish(SolveStatus::NumericalTrouble, iter);
    }
    VectorXd x1, y1;
    ConeVec z1;
    kkt_.solve(-sf_.c, sf_.b, h, x1, y1, z1);
    if (opts_.verbose) std::fprintf(stderr, "    kkt refinement error %.2e\n", kkt_.last_refinement_error());
    if (kkt_.last_refinement_error() > 1e-2) {
      if (opts_.verbose) std::fprintf(stderr, "kkt solve inaccurate\n");
      return finish(SolveStatus::NumericalTrouble, iter);
    }

    const ConeVec lam = W_.lambda();
    const ConeVec lam2 = jordan(lam, lam);

    // Affine-scaling predictor.
    ConeVec ds_aff = lam2.scaled(-1.0);
    Direction aff = newton(1.0, W_.lambda_solve(ds_aff), -tau * kappa, x1, y1, z1);
    double a_aff = std::min({max_step(W_, aff.ds_scaled), max_step(W_, aff.dz_scaled), 1.0});
    if (aff.dtau < 0) a_aff = std::min(a_aff, -tau / aff.dtau);
    if (aff.dkappa < 0) a_aff = std::min(a_aff, -kappa / aff.dkappa);
    const double sigma = std::pow(1.0 - a_aff, 3);

    // Combined corrector.
    ConeVec ds_cc = lam2.scaled(-1.0);
    ds_cc.axpy(sigma * mu, e).axpy(-1.0, jordan(aff.ds_scaled, aff.dz_scaled));
    const double dk_cc = -tau * kappa + sigma * mu - aff.dtau * aff.dkappa;
    Direction dir = newton(1.0 - sigma, W_.lambda_solve(ds_cc), dk_cc, x1, y1, z1);

    double amax = std::min(max_step(W_, dir.ds_scaled), max_step(W_, dir.dz_scaled));
    if (dir.dtau < 0) amax = std::min(amax, -tau / dir.dtau);
    if (dir.dkappa < 0) amax = std::min(amax, -kappa / dir.dkappa);
    const double alpha = std::min(1.0, opts_.step_fraction * amax);
    if (!(alpha > 1e-10)) {
      if (opts_.verbose) std::fprintf(stderr, "step %.3e rejected\n", alpha);
      return finish(SolveStatus::NumericalTrouble, iter);
    }

    ConeVec st = lam, zt = lam;
    st.axpy(alpha, dir.ds_scaled);
    zt.axpy(alpha, dir.dz_scaled);
    Scaling next = W_;
    if (!update_scaling(next, st, zt)) {
      if (opts_.verbose) std::fprintf(stderr, "scaling update breakdown\n");
      return finish(SolveStatus::NumericalTrouble, iter);
    }
    W_ = std::move(next);
    const ConeVec lam_next = W_.lambda();
    it_.x += alpha * dir.dx;
    it_.y += alpha * dir.dy;
    it_.s = W_.WT(lam_next);
    it_.z = W_.Winv(lam_next);
    it_.tau += alpha * dir.dtau;
    it_.kappa += alpha * dir.dkappa;
  }
  return finish(SolveStatus::IterationLimit, opts_.max_iters);
}

}  // namespace

ConicSolution solve(const ConicProgram& prog, const SolverOptions& opts) {
  prog.validate();
  Reduction red = reduce(prog);
  if (red.inconsistency) {
    ConicSolution sol;
    sol.status = SolveStatus::PrimalInfeasible;
    sol.primal = VectorXd::Zero(prog.dim);
    sol.certificate_ray = std::move(red.inconsistency);
    sol.residuals = check_kkt(prog, sol);
    return sol;
  }
  Solver solver(prog, opts, red.sf);
  return solver.run();
}

}  // namespace gtmp
