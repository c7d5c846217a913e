#pragma once

// Dense complex linear algebra and the handful of quantum-information
// primitives (partial trace/transpose, entropy, fidelity) that everything
// else in the library is built on.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wernerq {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Base class for every error the library reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

enum class Side { A, B };

inline const char* to_string(Side s) { return s == Side::A ? "A" : "B"; }

inline Side other(Side s) { return s == Side::A ? Side::B : Side::A; }

namespace tol {
inline constexpr double hermitian = 1e-10;
inline constexpr double trace = 1e-10;
inline constexpr double psd = 1e-9;
inline constexpr double entropy_floor = 1e-12;
inline constexpr double entropy_negative = 1e-8;
}  // namespace tol

inline bool all_finite(const CMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const cplx z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

inline CMatrix dagger(const CMatrix& m) { return m.adjoint(); }

inline CMatrix hermitian_part(const CMatrix& m) {
  return (m + m.adjoint()) * 0.5;
}

inline double hermiticity_defect(const CMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_unitary(const CMatrix& u, double eps = 1e-10) {
  if (u.rows() != u.cols()) return false;
  const CMatrix d = u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols());
  return d.cwiseAbs().maxCoeff() <= eps;
}

inline CVector ket(int dim, int index) {
  CVector v = CVector::Zero(dim);
  v(index) = 1.0;
  return v;
}

inline CMatrix projector(const CVector& v) { return v * v.adjoint(); }

/// Kronecker product, row index (i*rB + k), column index (j*cB + l).
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  const Eigen::Index ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
  CMatrix out(ra * rb, ca * cb);
  for (Eigen::Index i = 0; i < ra; ++i)
    for (Eigen::Index j = 0; j < ca; ++j)
      out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
  return out;
}

inline CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

namespace pauli {
inline CMatrix I() { return CMatrix::Identity(2, 2); }
inline CMatrix X() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline CMatrix Y() {
  CMatrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}
inline CMatrix Z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

// ---------------------------------------------------------------------------
// Multi-index helpers for tensor products of several subsystems. Subsystem 0
// is the most significant digit, matching kron().

class TensorShape {
 public:
  explicit TensorShape(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw DimensionError("TensorShape: no subsystems");
    strides_.assign(dims_.size(), 1);
    for (int s = static_cast<int>(dims_.size()) - 2; s >= 0; --s)
      strides_[s] = strides_[s + 1] * dims_[s + 1];
    total_ = strides_[0] * dims_[0];
    for (int d : dims_)
      if (d < 1) throw DimensionError("TensorShape: nonpositive dimension");
  }

  int parties() const { return static_cast<int>(dims_.size()); }
  int dim(int s) const { return dims_[s]; }
  int stride(int s) const { return strides_[s]; }
  int total() const { return total_; }
  const std::vector<int>& dims() const { return dims_; }

  int digit(int index, int s) const { return (index / strides_[s]) % dims_[s]; }

  int with_digit(int index, int s, int value) const {
    return index + (value - digit(index, s)) * strides_[s];
  }

  /// Dimension of the product of the listed subsystems.
  int dim_of(std::span<const int> subs) const {
    int d = 1;
    for (int s : subs) d *= dims_[s];
    return d;
  }

 private:
  std::vector<int> dims_;
  std::vector<int> strides_;
  int total_ = 1;
};

/// Trace out every subsystem not listed in `keep`. The kept subsystems stay
/// in ascending order.
inline CMatrix partial_trace(const CMatrix& m, const TensorShape& shape,
                             std::vector<int> keep) {
  if (m.rows() != shape.total() || m.cols() != shape.total())
    throw DimensionError("partial_trace: matrix does not match shape");
  std::sort(keep.begin(), keep.end());
  std::vector<int> drop;
  for (int s = 0; s < shape.parties(); ++s)
    if (!std::binary_search(keep.begin(), keep.end(), s)) drop.push_back(s);

  const int dk = shape.dim_of(keep);
  const int dd = shape.dim_of(drop);

  // Offsets of each kept / dropped multi-index inside the full index.
  auto offsets = [&](const std::vector<int>& subs, int count) {
    std::vector<int> off(count, 0);
    for (int idx = 0; idx < count; ++idx) {
      int rem = idx, o = 0;
      for (int p = static_cast<int>(subs.size()) - 1; p >= 0; --p) {
        const int s = subs[p];
        o += (rem % shape.dim(s)) * shape.stride(s);
        rem /= shape.dim(s);
      }
      off[idx] = o;
    }
    return off;
  };
  const std::vector<int> koff = offsets(keep, dk);
  const std::vector<int> doff = offsets(drop, dd);

  CMatrix out = CMatrix::Zero(dk, dk);
  for (int r = 0; r < dk; ++r)
    for (int c = 0; c < dk; ++c) {
      cplx acc = 0;
      for (int e = 0; e < dd; ++e) acc += m(koff[r] + doff[e], koff[c] + doff[e]);
      out(r, c) = acc;
    }
  return out;
}

/// Partial transpose on the listed subsystems. Pure index permutation, so
/// applying it twice returns the input bit for bit.
inline CMatrix partial_transpose(const CMatrix& m, const TensorShape& shape,
                                 std::span<const int> subs) {
  if (m.rows() != shape.total() || m.cols() != shape.total())
    throw DimensionError("partial_transpose: matrix does not match shape");
  const int n = shape.total();
  CMatrix out(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      int r2 = r, c2 = c;
      for (int s : subs) {
        const int dr = shape.digit(r, s), dc = shape.digit(c, s);
        r2 = shape.with_digit(r2, s, dc);
        c2 = shape.with_digit(c2, s, dr);
      }
      out(r2, c2) = m(r, c);
    }
  return out;
}

// ---------------------------------------------------------------------------

struct EigDecomposition {
  RVector values;   // ascending
  CMatrix vectors;  // columns, orthonormal
};

/// Hermitian eigendecomposition. The input is symmetrized first, so small
/// asymmetries from upstream arithmetic are harmless.
inline EigDecomposition herm_eig(const CMatrix& h) {
  if (h.rows() != h.cols()) throw DimensionError("herm_eig: non-square input");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(h));
  if (es.info() != Eigen::Success) throw Error("herm_eig: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

inline double min_eigenvalue(const CMatrix& h) { return herm_eig(h).values(0); }

inline double max_eigenvalue(const CMatrix& h) {
  const auto e = herm_eig(h);
  return e.values(e.values.size() - 1);
}

struct SvdResult {
  CMatrix u;     // rows x rows, unitary
  RVector s;     // descending, length min(rows, cols)
  CMatrix vdag;  // cols x cols, unitary

  /// U * diag(s) * Vdag, with diag(s) padded to the original shape.
  CMatrix recompose() const {
    CMatrix sigma = CMatrix::Zero(u.cols(), vdag.rows());
    for (Eigen::Index i = 0; i < s.size(); ++i) sigma(i, i) = s(i);
    return u * sigma * vdag;
  }
};

inline SvdResult svd(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> js(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {js.matrixU(), js.singularValues(), js.matrixV().adjoint()};
}

inline double operator_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return svd(m).s(0);
}

/// Apply f to the spectrum of a Hermitian matrix.
template <typename F>
CMatrix spectral_map(const CMatrix& h, F&& f) {
  const auto e = herm_eig(h);
  RVector fv(e.values.size());
  for (Eigen::Index i = 0; i < fv.size(); ++i) fv(i) = f(e.values(i));
  return e.vectors * fv.asDiagonal() * e.vectors.adjoint();
}

inline CMatrix psd_sqrt(const CMatrix& h) {
  return spectral_map(h, [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

/// Closest PSD matrix in Frobenius norm.
inline CMatrix psd_projection(const CMatrix& h) {
  return spectral_map(h, [](double x) { return std::max(x, 0.0); });
}

inline double trace_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return svd(m).s.sum();
}

// ---------------------------------------------------------------------------

/// Bipartite density matrix on C^dimA (x) C^dimB. The constructor validates
/// hermiticity, unit trace and positivity.
class DensityMatrix {
 public:
  DensityMatrix(CMatrix mat, int dim_a, int dim_b)
      : dim_a_(dim_a), dim_b_(dim_b), mat_(std::move(mat)) {
    if (dim_a < 1 || dim_b < 1)
      throw DimensionError("DensityMatrix: nonpositive local dimension");
    if (mat_.rows() != dim_a * dim_b || mat_.cols() != dim_a * dim_b)
      throw DimensionError("DensityMatrix: matrix size " + std::to_string(mat_.rows()) +
                           "x" + std::to_string(mat_.cols()) + " does not match " +
                           std::to_string(dim_a) + "x" + std::to_string(dim_b));
    if (!all_finite(mat_)) throw DomainError("DensityMatrix: non-finite entry");
    if (hermiticity_defect(mat_) > tol::hermitian)
      throw DomainError("DensityMatrix: not Hermitian");
    mat_ = hermitian_part(mat_);
    const double tr = mat_.trace().real();
    if (std::abs(tr - 1.0) > tol::trace)
      throw DomainError("DensityMatrix: trace " + std::to_string(tr) + " != 1");
    if (min_eigenvalue(mat_) < -tol::psd)
      throw DomainError("DensityMatrix: negative eigenvalue");
  }

  /// Symmetrize, clip eigenvalues at zero and renormalize. For solver and
  /// tomography outputs that are only PSD to tolerance.
  static DensityMatrix normalized(const CMatrix& mat, int dim_a, int dim_b) {
    if (mat.rows() != mat.cols()) throw DimensionError("normalized: non-square input");
    CMatrix p = psd_projection(mat);
    const double tr = p.trace().real();
    if (!(tr > 0)) throw DomainError("normalized: zero trace after PSD projection");
    p /= tr;
    return DensityMatrix(hermitian_part(p), dim_a, dim_b);
  }

  static DensityMatrix pure(const CVector& psi, int dim_a, int dim_b) {
    return DensityMatrix(projector(psi / psi.norm()), dim_a, dim_b);
  }

  int dim_a() const { return dim_a_; }
  int dim_b() const { return dim_b_; }
  int dim(Side s) const { return s == Side::A ? dim_a_ : dim_b_; }
  int size() const { return dim_a_ * dim_b_; }
  const CMatrix& matrix() const { return mat_; }
  TensorShape shape() const { return TensorShape({dim_a_, dim_b_}); }

 private:
  int dim_a_;
  int dim_b_;
  CMatrix mat_;
};

inline DensityMatrix product_state(const CMatrix& rho_a, const CMatrix& rho_b) {
  return DensityMatrix(kron(rho_a, rho_b), static_cast<int>(rho_a.rows()),
                       static_cast<int>(rho_b.rows()));
}

inline DensityMatrix maximally_mixed(int dim_a, int dim_b) {
  const int n = dim_a * dim_b;
  return DensityMatrix(CMatrix::Identity(n, n) / static_cast<double>(n), dim_a, dim_b);
}

/// Reduced state on the side that is kept; `traced` names the side removed.
inline CMatrix partial_trace(const DensityMatrix& rho, Side traced) {
  return partial_trace(rho.matrix(), rho.shape(), {traced == Side::A ? 1 : 0});
}

inline CMatrix partial_transpose(const DensityMatrix& rho, Side side) {
  const int sub = side == Side::A ? 0 : 1;
  return partial_transpose(rho.matrix(), rho.shape(), std::span<const int>(&sub, 1));
}

/// Von Neumann entropy in bits.
inline double von_neumann_entropy(const CMatrix& rho) {
  const auto e = herm_eig(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    const double x = e.values(i);
    if (x < -tol::entropy_negative)
      throw DomainError("von_neumann_entropy: negative eigenvalue " + std::to_string(x));
    if (x > tol::entropy_floor) s -= x * std::log2(x);
  }
  return s;
}

inline double von_neumann_entropy(const DensityMatrix& rho) {
  return von_neumann_entropy(rho.matrix());
}

/// Uhlmann-Jozsa fidelity, computed as the squared trace norm of
/// sqrt(rho) sqrt(sigma), which is symmetric in its arguments.
inline double uhlmann_fidelity(const CMatrix& rho, const CMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw DimensionError("uhlmann_fidelity: dimension mismatch");
  const double f = trace_norm(psd_sqrt(rho) * psd_sqrt(sigma));
  return std::clamp(f * f, 0.0, 1.0);
}

inline double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim_a() != sigma.dim_a() || rho.dim_b() != sigma.dim_b())
    throw DimensionError("uhlmann_fidelity: dimension mismatch");
  return uhlmann_fidelity(rho.matrix(), sigma.matrix());
}

/// Polar factor W of m = W P (closest unitary / isometry in Frobenius norm).
inline CMatrix polar_unitary(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> js(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return js.matrixU() * js.matrixV().adjoint();
}

}  // namespace wernerq
