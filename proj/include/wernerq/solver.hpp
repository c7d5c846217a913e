#pragma once

// Conic programs in standard equality form
//
//   minimize  c^T x   subject to  A x = b,  x in K,
//
// where K is a product of free, nonnegative and Hermitian-PSD blocks. A
// PSD(n) block stores a Hermitian n x n matrix X over the real orthonormal
// basis (diagonal entries, then sqrt(2) Re X_rc and sqrt(2) Im X_rc for r < c),
// so tr(XY) is the Euclidean inner product of the coordinates.
//
// solve() runs operator splitting (ADMM) on the homogeneous self-dual
// embedding, in the form popularized by SCS. The equality rows become a zero
// cone and the conic variables are tied to slacks through -I, so the only
// linear system is (2I + A^T A), applied through a dense Cholesky factor of
// the small m x m matrix 2I + A A^T.

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "wernerq/qmat.hpp"

namespace wernerq {

enum class ConeKind { Free, NonNeg, Psd };

inline const char* to_string(ConeKind k) {
  switch (k) {
    case ConeKind::Free: return "FREE";
    case ConeKind::NonNeg: return "NONNEG";
    case ConeKind::Psd: return "PSD";
  }
  return "?";
}

struct ConeBlock {
  ConeKind kind = ConeKind::Free;
  int n = 0;       // vector length for FREE/NONNEG, matrix order for PSD
  int offset = 0;  // first coordinate in x

  int size() const { return kind == ConeKind::Psd ? n * n : n; }
};

// --- Hermitian <-> real coordinates -------------------------------------------

/// Coordinate of the diagonal entry (r, r) inside a PSD(n) block.
inline int herm_diag_index(int /*n*/, int r) { return r; }

/// Coordinate of sqrt(2) Re X_rc (r < c); the imaginary part follows it.
inline int herm_offdiag_index(int n, int r, int c) {
  // pairs (r, c), r < c, row-major
  const int before = r * n - r * (r + 1) / 2;  // pairs in rows < r
  return n + 2 * (before + (c - r - 1));
}

inline RVector herm_to_vec(const CMatrix& x) {
  const int n = static_cast<int>(x.rows());
  RVector v(n * n);
  const double s2 = std::sqrt(2.0);
  for (int r = 0; r < n; ++r) {
    v(r) = x(r, r).real();
    for (int c = r + 1; c < n; ++c) {
      const int k = herm_offdiag_index(n, r, c);
      const cplx z = 0.5 * (x(r, c) + std::conj(x(c, r)));
      v(k) = s2 * z.real();
      v(k + 1) = s2 * z.imag();
    }
  }
  return v;
}

template <typename Vec>
CMatrix vec_to_herm(const Vec& v, int n) {
  CMatrix x(n, n);
  const double is2 = 1.0 / std::sqrt(2.0);
  for (int r = 0; r < n; ++r) {
    x(r, r) = v(r);
    for (int c = r + 1; c < n; ++c) {
      const int k = herm_offdiag_index(n, r, c);
      const cplx z(v(k) * is2, v(k + 1) * is2);
      x(r, c) = z;
      x(c, r) = std::conj(z);
    }
  }
  return x;
}

// --- program ------------------------------------------------------------------

struct Triplet {
  int row;
  int col;
  double val;
};

class ConicProgram {
 public:
  /// Appends a block and returns its index.
  int add_block(ConeKind kind, int n) {
    if (n < 1) throw DimensionError("ConicProgram: block size must be positive");
    ConeBlock b{kind, n, num_vars_};
    blocks_.push_back(b);
    num_vars_ += b.size();
    c_.conservativeResize(num_vars_);
    c_.tail(b.size()).setZero();
    return static_cast<int>(blocks_.size()) - 1;
  }

  /// Appends an equality row with the given right-hand side; returns its index.
  int add_row(double rhs = 0.0) {
    b_.conservativeResize(b_.size() + 1);
    b_(b_.size() - 1) = rhs;
    return static_cast<int>(b_.size()) - 1;
  }

  void set_rhs(int row, double rhs) { b_(row) = rhs; }

  void add_coef(int row, int col, double val) {
    if (val != 0.0) triplets_.push_back({row, col, val});
  }

  void set_cost(int col, double val) { c_(col) = val; }
  void add_cost(int col, double val) { c_(col) += val; }

  // Helpers for linear functionals of a PSD block entry.

  /// row += coef * Re(X_rc)
  void add_re(int row, int block, int r, int c, double coef) {
    const ConeBlock& b = psd_block(block);
    if (r == c) {
      add_coef(row, b.offset + herm_diag_index(b.n, r), coef);
      return;
    }
    const int lo = std::min(r, c), hi = std::max(r, c);
    add_coef(row, b.offset + herm_offdiag_index(b.n, lo, hi), coef / std::sqrt(2.0));
  }

  /// row += coef * Im(X_rc)
  void add_im(int row, int block, int r, int c, double coef) {
    if (r == c) return;
    const ConeBlock& b = psd_block(block);
    const int lo = std::min(r, c), hi = std::max(r, c);
    const double sign = r < c ? 1.0 : -1.0;
    add_coef(row, b.offset + herm_offdiag_index(b.n, lo, hi) + 1,
             sign * coef / std::sqrt(2.0));
  }

  /// cost += coef * tr(X) for a PSD block
  void add_trace_cost(int block, double coef) {
    const ConeBlock& b = psd_block(block);
    for (int r = 0; r < b.n; ++r) add_cost(b.offset + r, coef);
  }

  /// cost += tr(W X) for Hermitian W on a PSD block
  void add_matrix_cost(int block, const CMatrix& w) {
    const ConeBlock& b = psd_block(block);
    const RVector wv = herm_to_vec(w);
    for (int k = 0; k < b.size(); ++k) add_cost(b.offset + k, wv(k));
  }

  int num_vars() const { return num_vars_; }
  int num_rows() const { return static_cast<int>(b_.size()); }
  const std::vector<ConeBlock>& blocks() const { return blocks_; }
  const ConeBlock& block(int i) const { return blocks_.at(i); }
  const std::vector<Triplet>& triplets() const { return triplets_; }
  const RVector& b() const { return b_; }
  const RVector& c() const { return c_; }

  Eigen::SparseMatrix<double> a_matrix() const {
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(triplets_.size());
    for (const auto& e : triplets_) t.emplace_back(e.row, e.col, e.val);
    Eigen::SparseMatrix<double> a(num_rows(), num_vars_);
    a.setFromTriplets(t.begin(), t.end());
    return a;
  }

  /// Throws on inconsistent dimensions or non-finite data.
  void validate() const {
    if (c_.size() != num_vars_) throw DimensionError("ConicProgram: objective size");
    for (const auto& e : triplets_) {
      if (e.row < 0 || e.row >= num_rows() || e.col < 0 || e.col >= num_vars_)
        throw DimensionError("ConicProgram: triplet index out of range");
      if (!std::isfinite(e.val)) throw DomainError("ConicProgram: NaN in A");
    }
    if (!b_.allFinite()) throw DomainError("ConicProgram: NaN in b");
    if (!c_.allFinite()) throw DomainError("ConicProgram: NaN in c");
  }

  CMatrix psd_value(const RVector& x, int block) const {
    const ConeBlock& b = psd_block(block);
    return vec_to_herm(x.segment(b.offset, b.size()), b.n);
  }

  // Line-oriented text format:
  //   wernerq-conic 1
  //   vars <n> rows <m> blocks <k>
  //   block <FREE|NONNEG|PSD> <n>      (k lines, in order)
  //   c <col> <value>                   (nonzero objective entries)
  //   b <row> <value>                   (nonzero right-hand sides)
  //   a <row> <col> <value>             (one constraint triplet per line)
  //   end
  void dump(std::ostream& os) const {
    os << "wernerq-conic 1\n";
    os << "vars " << num_vars_ << " rows " << num_rows() << " blocks " << blocks_.size()
       << "\n";
    os.precision(17);
    for (const auto& b : blocks_) os << "block " << to_string(b.kind) << " " << b.n << "\n";
    for (int j = 0; j < num_vars_; ++j)
      if (c_(j) != 0.0) os << "c " << j << " " << c_(j) << "\n";
    for (int i = 0; i < num_rows(); ++i)
      if (b_(i) != 0.0) os << "b " << i << " " << b_(i) << "\n";
    for (const auto& e : triplets_) os << "a " << e.row << " " << e.col << " " << e.val << "\n";
    os << "end\n";
  }

  static ConicProgram load(std::istream& is) {
    auto fail = [](const std::string& what) -> ConicProgram {
      throw Error("ConicProgram::load: " + what);
    };
    std::string tag;
    int version = 0;
    if (!(is >> tag >> version) || tag != "wernerq-conic" || version != 1)
      return fail("bad header");
    std::string kv, kr, kb;
    int n = 0, m = 0, k = 0;
    if (!(is >> kv >> n >> kr >> m >> kb >> k) || kv != "vars" || kr != "rows" ||
        kb != "blocks")
      return fail("bad size line");
    ConicProgram p;
    for (int i = 0; i < k; ++i) {
      std::string bt, kind;
      int bn = 0;
      if (!(is >> bt >> kind >> bn) || bt != "block") return fail("bad block line");
      if (kind == "FREE") p.add_block(ConeKind::Free, bn);
      else if (kind == "NONNEG") p.add_block(ConeKind::NonNeg, bn);
      else if (kind == "PSD") p.add_block(ConeKind::Psd, bn);
      else return fail("unknown cone " + kind);
    }
    if (p.num_vars() != n) return fail("block sizes do not sum to vars");
    for (int i = 0; i < m; ++i) p.add_row(0.0);
    std::string key;
    while (is >> key) {
      if (key == "end") {
        p.validate();
        return p;
      }
      if (key == "c") {
        int j; double v;
        if (!(is >> j >> v) || j < 0 || j >= n) return fail("bad c line");
        p.c_(j) = v;
      } else if (key == "b") {
        int i; double v;
        if (!(is >> i >> v) || i < 0 || i >= m) return fail("bad b line");
        p.b_(i) = v;
      } else if (key == "a") {
        int i, j; double v;
        if (!(is >> i >> j >> v)) return fail("bad a line");
        p.triplets_.push_back({i, j, v});
      } else {
        return fail("unknown record " + key);
      }
    }
    return fail("missing end");
  }

 private:
  const ConeBlock& psd_block(int block) const {
    const ConeBlock& b = blocks_.at(block);
    if (b.kind != ConeKind::Psd) throw DomainError("ConicProgram: block is not PSD");
    return b;
  }

  std::vector<ConeBlock> blocks_;
  std::vector<Triplet> triplets_;
  RVector b_ = RVector(0);
  RVector c_ = RVector(0);
  int num_vars_ = 0;
};

// --- solution -------------------------------------------------------------------

enum class SolveStatus { Optimal, Infeasible, Unbounded, MaxIter };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "OPTIMAL";
    case SolveStatus::Infeasible: return "INFEASIBLE";
    case SolveStatus::Unbounded: return "UNBOUNDED";
    case SolveStatus::MaxIter: return "MAX_ITER";
  }
  return "?";
}

struct ConicSolution {
  RVector x;  // primal point, exactly in K
  RVector y;  // equality multipliers
  RVector z;  // dual slack c - A^T y, exactly in the dual cone
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  double gap = 0.0;          // |p - d| / (1 + |p|)
  double primal_res = 0.0;   // ||Ax - b|| / (1 + ||b||)
  double dual_res = 0.0;     // ||c - A^T y - z|| / (1 + ||c||)
  double min_psd_eig = 0.0;  // over all PSD blocks of x
  SolveStatus status = SolveStatus::MaxIter;
  int iterations = 0;
};

struct SolverOptions {
  double tol = 1e-7;
  int max_iter = 200000;
  std::uint64_t seed = 0;  // accepted for interface symmetry; the method is deterministic
  double alpha = 1.5;      // over-relaxation
  double scale = 1.0;      // scale of b and c after equilibration
  int check_every = 10;
  int equilibration_passes = 15;
};

namespace detail {

/// Euclidean projection of a coordinate vector onto a PSD(n) block.
inline void project_psd(Eigen::Ref<RVector> v, int n) {
  if (n == 1) {
    v(0) = std::max(v(0), 0.0);
    return;
  }
  const CMatrix x = vec_to_herm(v, n);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(x);
  const RVector& ev = es.eigenvalues();
  if (ev(0) >= 0.0) return;
  if (ev(n - 1) <= 0.0) {
    v.setZero();
    return;
  }
  int first = 0;
  while (first < n && ev(first) <= 0.0) ++first;
  const CMatrix q = es.eigenvectors().rightCols(n - first);
  const RVector lam = ev.tail(n - first);
  const CMatrix p = q * lam.asDiagonal() * q.adjoint();
  v = herm_to_vec(p);
}

/// Projection onto the dual cone K*: free blocks have dual {0}, the others
/// are self-dual.
inline void project_dual_cone(Eigen::Ref<RVector> v, const std::vector<ConeBlock>& blocks) {
  for (const auto& b : blocks) {
    switch (b.kind) {
      case ConeKind::Free: v.segment(b.offset, b.n).setZero(); break;
      case ConeKind::NonNeg:
        for (int k = 0; k < b.n; ++k) v(b.offset + k) = std::max(v(b.offset + k), 0.0);
        break;
      case ConeKind::Psd: project_psd(v.segment(b.offset, b.size()), b.n); break;
    }
  }
}

inline double min_psd_eigenvalue(const RVector& x, const std::vector<ConeBlock>& blocks) {
  double m = 0.0;
  bool any = false;
  for (const auto& b : blocks) {
    if (b.kind == ConeKind::Psd) {
      const double e = min_eigenvalue(vec_to_herm(x.segment(b.offset, b.size()), b.n));
      m = any ? std::min(m, e) : e;
      any = true;
    } else if (b.kind == ConeKind::NonNeg) {
      const double e = x.segment(b.offset, b.n).minCoeff();
      m = any ? std::min(m, e) : e;
      any = true;
    }
  }
  return m;
}

/// Drops all-zero rows and exact duplicate rows. Returns the kept original
/// row indices, or an empty optional-like flag through `inconsistent`.
inline std::vector<int> presolve_rows(const Eigen::SparseMatrix<double, Eigen::RowMajor>& a,
                                      const RVector& b, bool& inconsistent) {
  inconsistent = false;
  std::vector<int> keep;
  std::map<std::vector<std::pair<int, double>>, int> seen;
  for (int i = 0; i < a.rows(); ++i) {
    std::vector<std::pair<int, double>> sig;
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(a, i); it; ++it)
      if (it.value() != 0.0) sig.emplace_back(static_cast<int>(it.col()), it.value());
    if (sig.empty()) {
      if (std::abs(b(i)) > 1e-12) inconsistent = true;
      continue;
    }
    auto [pos, inserted] = seen.emplace(std::move(sig), i);
    if (!inserted) {
      if (std::abs(b(pos->second) - b(i)) > 1e-12 * (1.0 + std::abs(b(i))))
        inconsistent = true;
      continue;
    }
    keep.push_back(i);
  }
  return keep;
}

}  // namespace detail

/// Solves a conic program. Deterministic for identical inputs.
inline ConicSolution solve(const ConicProgram& prog, const SolverOptions& opts = {}) {
  prog.validate();
  const int n = prog.num_vars();
  const auto& blocks = prog.blocks();

  const Eigen::SparseMatrix<double, Eigen::RowMajor> a_full_rm = prog.a_matrix();
  const RVector& b_full = prog.b();
  const RVector& c = prog.c();

  ConicSolution sol;
  sol.x = RVector::Zero(n);
  sol.z = RVector::Zero(n);
  sol.y = RVector::Zero(prog.num_rows());

  bool inconsistent = false;
  const std::vector<int> rows = detail::presolve_rows(a_full_rm, b_full, inconsistent);
  if (inconsistent) {
    sol.status = SolveStatus::Infeasible;
    return sol;
  }
  const int m = static_cast<int>(rows.size());

  Eigen::SparseMatrix<double> a(m, n);
  RVector b(m);
  {
    std::vector<Eigen::Triplet<double>> t;
    for (int r = 0; r < m; ++r) {
      b(r) = b_full(rows[r]);
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(a_full_rm, rows[r]);
           it; ++it)
        t.emplace_back(r, static_cast<int>(it.col()), it.value());
    }
    a.setFromTriplets(t.begin(), t.end());
  }

  // Ruiz equilibration: A_hat = D A E with E constant across each PSD block.
  RVector dscale = RVector::Ones(m);
  RVector escale = RVector::Ones(n);
  Eigen::SparseMatrix<double> ah = a;
  for (int pass = 0; pass < opts.equilibration_passes && m > 0; ++pass) {
    RVector rmax = RVector::Zero(m), cmax = RVector::Zero(n);
    for (int k = 0; k < ah.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(ah, k); it; ++it) {
        const double v = std::abs(it.value());
        rmax(it.row()) = std::max(rmax(it.row()), v);
        cmax(it.col()) = std::max(cmax(it.col()), v);
      }
    for (const auto& bl : blocks)
      if (bl.kind == ConeKind::Psd) {
        const double mx = cmax.segment(bl.offset, bl.size()).maxCoeff();
        cmax.segment(bl.offset, bl.size()).setConstant(mx);
      }
    RVector dr(m), dc(n);
    for (int i = 0; i < m; ++i)
      dr(i) = rmax(i) > 0 ? std::clamp(1.0 / std::sqrt(rmax(i)), 1e-4, 1e4) : 1.0;
    for (int j = 0; j < n; ++j)
      dc(j) = cmax(j) > 0 ? std::clamp(1.0 / std::sqrt(cmax(j)), 1e-4, 1e4) : 1.0;
    ah = dr.asDiagonal() * ah * dc.asDiagonal();
    dscale = dscale.cwiseProduct(dr);
    escale = escale.cwiseProduct(dc);
  }
  RVector bh = dscale.cwiseProduct(b);
  RVector ch = escale.cwiseProduct(c);
  const double sb = opts.scale / std::max(bh.norm(), 1e-6);
  const double sc = opts.scale / std::max(ch.norm(), 1e-6);
  bh *= sb;
  ch *= sc;
  const Eigen::SparseMatrix<double> aht = ah.transpose();

  // (2I + A^T A)^{-1} r = (r - A^T (2I + A A^T)^{-1} A r) / 2
  RMatrix gram = RMatrix(ah * aht);
  gram.diagonal().array() += 2.0;
  Eigen::LLT<RMatrix> gram_llt(gram);
  if (gram_llt.info() != Eigen::Success) throw Error("solve: factorization failed");

  // Solve (I + M) z = w for z = (x, y_eq, y_cone); M = [[0, A'^T], [-A', 0]],
  // A' = [A; -I].
  auto solve_m = [&](const RVector& wx, const RVector& we, const RVector& wk, RVector& x,
                     RVector& ye, RVector& yk) {
    RVector r = wx - aht * we + wk;
    RVector ar = ah * r;
    RVector g = m > 0 ? RVector(gram_llt.solve(ar)) : RVector(0);
    x = 0.5 * (r - aht * g);
    ye = we + ah * x;
    yk = wk - x;
  };

  // Precompute p = (I+M)^{-1} h, h = (c, b, 0).
  RVector px, pe, pk;
  solve_m(ch, bh, RVector::Zero(n), px, pe, pk);
  const double hp = ch.dot(px) + bh.dot(pe);  // h^T p (cone part of h is zero)

  // Iterates: u = (x, ye, yk, tau), v = (r, se, sk, kappa).
  RVector ux = RVector::Zero(n), ue = RVector::Zero(m), uk = RVector::Zero(n);
  RVector vx = RVector::Zero(n), ve = RVector::Zero(m), vk = RVector::Zero(n);
  double utau = 1.0, vkappa = 1.0;

  RVector tx, te, tk;
  const double alpha = opts.alpha;
  const double bnorm = b.norm(), cnorm = c.norm();

  auto unscaled = [&](double tau, ConicSolution& s) {
    // x = E sk / (sb tau), y = -D ye / (sc tau), z = E^{-1} yk / (sc tau)
    s.x = escale.cwiseProduct(vk) / (sb * tau);
    RVector y_red = -dscale.cwiseProduct(ue) / (sc * tau);
    s.z = uk.cwiseQuotient(escale) / (sc * tau);
    s.y.setZero();
    for (int r = 0; r < m; ++r) s.y(rows[r]) = y_red(r);
    s.primal_obj = c.dot(s.x);
    s.dual_obj = b.dot(y_red);
    s.gap = std::abs(s.primal_obj - s.dual_obj) / (1.0 + std::abs(s.primal_obj));
    s.primal_res = (a * s.x - b).norm() / (1.0 + bnorm);
    s.dual_res = (c - a.transpose() * y_red - s.z).norm() / (1.0 + cnorm);
  };

  for (int it = 1; it <= opts.max_iter; ++it) {
    // u_tilde = (I + Q)^{-1} (u + v)
    const RVector wx = ux + vx, we = ue + ve, wk = uk + vk;
    const double wtau = utau + vkappa;
    solve_m(wx, we, wk, tx, te, tk);
    const double ttau = (wtau + ch.dot(tx) + bh.dot(te)) / (1.0 + hp);
    tx -= ttau * px;
    te -= ttau * pe;
    tk -= ttau * pk;

    // relaxed point, projection onto C = R^n x R^m x K* x R_+, dual update
    const RVector rx = alpha * tx + (1.0 - alpha) * ux;
    const RVector re = alpha * te + (1.0 - alpha) * ue;
    const RVector rk = alpha * tk + (1.0 - alpha) * uk;
    const double rtau = alpha * ttau + (1.0 - alpha) * utau;

    ux = rx - vx;
    ue = re - ve;
    uk = rk - vk;
    detail::project_dual_cone(uk, blocks);
    utau = std::max(rtau - vkappa, 0.0);

    vx += ux - rx;
    ve += ue - re;
    vk += uk - rk;
    vkappa += utau - rtau;

    if (it % opts.check_every != 0 && it != opts.max_iter) continue;

    sol.iterations = it;
    if (utau > 1e-12 * std::max(1.0, vkappa)) {
      unscaled(utau, sol);
      if (sol.primal_res <= opts.tol && sol.dual_res <= opts.tol && sol.gap <= opts.tol) {
        sol.min_psd_eig = detail::min_psd_eigenvalue(sol.x, blocks);
        sol.status = SolveStatus::Optimal;
        return sol;
      }
    }
    // Infeasibility certificates in the scaled problem.
    {
      const double by = -bh.dot(ue);  // b^T y_std with y_std = -ye
      RVector aty = aht * ue;          // A^T ye
      // primal infeasible: y_std with b^T y > 0 and -A^T y in K (z = -A^T y)
      const double dres = (aty - uk).norm();
      if (by > 0 && dres * 1e6 < by && utau < 1e-9 * std::max(1.0, vkappa)) {
        sol.status = SolveStatus::Infeasible;
        return sol;
      }
      const double cx = ch.dot(vk);
      const double pres = (ah * vk).norm();
      if (cx < 0 && pres * 1e6 < -cx && utau < 1e-9 * std::max(1.0, vkappa)) {
        sol.status = SolveStatus::Unbounded;
        return sol;
      }
    }
  }
  sol.status = SolveStatus::MaxIter;
  if (utau > 0) unscaled(utau, sol);
  sol.min_psd_eig = detail::min_psd_eigenvalue(sol.x, blocks);
  return sol;
}

// --- small-LP oracle -----------------------------------------------------------

/// Exact optimum of a small LP (FREE / NONNEG blocks only, at most 12
/// variables) by enumerating basic solutions: every subset of nonnegative
/// variables fixed at zero whose complement determines x uniquely. Throws if
/// no feasible basic solution exists.
inline double lp_vertex_enumeration_check(const ConicProgram& prog) {
  prog.validate();
  const int n = prog.num_vars();
  if (n > 12) throw DomainError("lp_vertex_enumeration_check: more than 12 variables");
  std::vector<int> nonneg;
  std::vector<bool> is_nonneg(n, false);
  for (const auto& b : prog.blocks()) {
    if (b.kind == ConeKind::Psd)
      throw DomainError("lp_vertex_enumeration_check: PSD blocks not supported");
    if (b.kind == ConeKind::NonNeg)
      for (int k = 0; k < b.n; ++k) {
        nonneg.push_back(b.offset + k);
        is_nonneg[b.offset + k] = true;
      }
  }
  const RMatrix a = RMatrix(prog.a_matrix());
  const RVector& bv = prog.b();
  const RVector& c = prog.c();
  const int k = static_cast<int>(nonneg.size());
  bool found = false;
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    std::vector<int> cols;
    std::vector<bool> zero(n, false);
    for (int t = 0; t < k; ++t)
      if (mask & (1u << t)) zero[nonneg[t]] = true;
    for (int j = 0; j < n; ++j)
      if (!zero[j]) cols.push_back(j);
    RVector x = RVector::Zero(n);
    if (!cols.empty()) {
      RMatrix sub(a.rows(), cols.size());
      for (std::size_t q = 0; q < cols.size(); ++q) sub.col(q) = a.col(cols[q]);
      Eigen::ColPivHouseholderQR<RMatrix> qr(sub);
      if (qr.rank() != static_cast<Eigen::Index>(cols.size())) continue;
      const RVector xs = qr.solve(bv);
      for (std::size_t q = 0; q < cols.size(); ++q) x(cols[q]) = xs(q);
    } else if (n > 0) {
      continue;
    }
    if ((a * x - bv).norm() > 1e-9 * (1.0 + bv.norm())) continue;
    bool ok = true;
    for (int j = 0; j < n; ++j)
      if (is_nonneg[j] && x(j) < -1e-12) ok = false;
    if (!ok) continue;
    found = true;
    best = std::min(best, c.dot(x));
  }
  if (!found) throw DomainError("lp_vertex_enumeration_check: no feasible vertex");
  return best;
}

}  // namespace wernerq
