#pragma once

// Werner states and their building blocks. Product basis |i>|j> is indexed
// i*d + j throughout the library.

#include <cstdint>
#include <random>

#include "wernerq/qmat.hpp"

namespace wernerq {

struct WernerParams {
  int d = 3;
  double v = 0.0;

  double n_plus() const { return d * (d + 1) / 2.0; }
  double n_minus() const { return d * (d - 1) / 2.0; }
  /// Singlet weight of the two-qubit mixture form.
  double q() const { return 1.0 - 2.0 * d / (d + 1.0) * v; }
  double p() const { return 1.0 / d; }
};

inline void check_local_dim(int d, const char* who) {
  if (d < 2) throw DomainError(std::string(who) + ": local dimension must be >= 2");
}

inline void check_weight(double v, const char* who) {
  if (!(v >= 0.0 && v <= 1.0))
    throw DomainError(std::string(who) + ": weight v=" + std::to_string(v) +
                      " outside [0, 1]");
}

inline CMatrix swap_operator(int d) {
  check_local_dim(d, "swap_operator");
  const int n = d * d;
  CMatrix v = CMatrix::Zero(n, n);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) v(j * d + i, i * d + j) = 1.0;
  return v;
}

inline CMatrix symmetric_projector(int d) {
  return (CMatrix::Identity(d * d, d * d) + swap_operator(d)) * 0.5;
}

inline CMatrix antisymmetric_projector(int d) {
  return (CMatrix::Identity(d * d, d * d) - swap_operator(d)) * 0.5;
}

/// (|00> + |11> + ... ) / sqrt(d)
inline CVector phi_plus(int d) {
  CVector v = CVector::Zero(d * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return v;
}

/// v/n+ Pi+ + (1-v)/n- Pi-
inline DensityMatrix werner(int d, double v) {
  check_local_dim(d, "werner");
  check_weight(v, "werner");
  const WernerParams w{d, v};
  CMatrix m = (v / w.n_plus()) * symmetric_projector(d) +
              ((1.0 - v) / w.n_minus()) * antisymmetric_projector(d);
  return DensityMatrix(m, d, d);
}

// --- two-qubit blocks on span{|ii>, |ij>, |ji>, |jj>} ----------------------

enum class QubitBlockKind {
  Singlet,   // |Psi-_ij><Psi-_ij|
  Diagonal,  // (|ii><ii| + |jj><jj|) / 2
  Cross,     // (|ij><ij| + |ji><ji|) / 2
  Triplet,   // |Psi+_ij><Psi+_ij|
};

struct QubitBlock {
  int i = 0;
  int j = 1;
  QubitBlockKind kind = QubitBlockKind::Singlet;
};

inline CMatrix qubit_block(int d, const QubitBlock& b) {
  if (!(0 <= b.i && b.i < b.j && b.j < d))
    throw DomainError("qubit_block: need 0 <= i < j < d");
  const int n = d * d;
  const int ii = b.i * d + b.i, ij = b.i * d + b.j, ji = b.j * d + b.i,
            jj = b.j * d + b.j;
  CMatrix m = CMatrix::Zero(n, n);
  switch (b.kind) {
    case QubitBlockKind::Singlet:
    case QubitBlockKind::Triplet: {
      const double sign = b.kind == QubitBlockKind::Singlet ? -1.0 : 1.0;
      m(ij, ij) = 0.5;
      m(ji, ji) = 0.5;
      m(ij, ji) = 0.5 * sign;
      m(ji, ij) = 0.5 * sign;
      break;
    }
    case QubitBlockKind::Diagonal:
      m(ii, ii) = 0.5;
      m(jj, jj) = 0.5;
      break;
    case QubitBlockKind::Cross:
      m(ij, ij) = 0.5;
      m(ji, ji) = 0.5;
      break;
  }
  return m;
}

/// Uniform mixture over i<j of q*singlet + (1-q)[p*diag + (1-p)*cross] with
/// p = 1/d. Only reaches v <= (d+1)/(2d), where q >= 0.
inline DensityMatrix werner_from_qubit_mixture(int d, double v) {
  check_local_dim(d, "werner_from_qubit_mixture");
  check_weight(v, "werner_from_qubit_mixture");
  const WernerParams w{d, v};
  const double p = w.p();
  double q = w.q();
  if (q < -1e-12)
    throw DomainError("werner_from_qubit_mixture: v=" + std::to_string(v) +
                      " exceeds (d+1)/(2d) (q < 0); use werner_all_v");
  q = std::max(q, 0.0);
  CMatrix m = CMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      m += q * qubit_block(d, {i, j, QubitBlockKind::Singlet});
      m += (1.0 - q) * p * qubit_block(d, {i, j, QubitBlockKind::Diagonal});
      m += (1.0 - q) * (1.0 - p) * qubit_block(d, {i, j, QubitBlockKind::Cross});
    }
  m /= w.n_minus();
  return DensityMatrix(m, d, d);
}

/// Mixture of two-qubit blocks valid on the whole range v in [0, 1]:
/// q*diag + (1-q)[p*singlet + (1-p)*triplet], p = (d+1)(1-v)/(d+1-2v),
/// q = 2v/(d+1).
inline DensityMatrix werner_all_v(int d, double v) {
  check_local_dim(d, "werner_all_v");
  check_weight(v, "werner_all_v");
  const double p = (d + 1.0) * (1.0 - v) / (d + 1.0 - 2.0 * v);
  const double q = 2.0 * v / (d + 1.0);
  CMatrix m = CMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      m += q * qubit_block(d, {i, j, QubitBlockKind::Diagonal});
      m += (1.0 - q) * p * qubit_block(d, {i, j, QubitBlockKind::Singlet});
      m += (1.0 - q) * (1.0 - p) * qubit_block(d, {i, j, QubitBlockKind::Triplet});
    }
  m /= d * (d - 1) / 2.0;
  return DensityMatrix(m, d, d);
}

/// (I (x) U)|Phi+_d>
inline CVector mes(int d, const CMatrix& u) {
  check_local_dim(d, "mes");
  if (u.rows() != d || u.cols() != d || !is_unitary(u))
    throw DomainError("mes: U must be a d x d unitary");
  return kron(CMatrix::Identity(d, d), u) * phi_plus(d);
}

// --- randomness --------------------------------------------------------------

using Rng = std::mt19937_64;

/// Complex Ginibre matrix with unit-variance entries.
inline CMatrix ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  CMatrix m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) {
      const double re = g(rng);
      const double im = g(rng);
      m(r, c) = cplx(re, im);
    }
  return m;
}

/// Haar-random unitary: QR of a Ginibre matrix with the phases of R's
/// diagonal folded back into Q.
inline CMatrix haar_unitary(int d, Rng& rng) {
  const CMatrix g = ginibre(d, d, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < d; ++k) {
    const double a = std::abs(r(k, k));
    const cplx phase = a > 0 ? r(k, k) / a : cplx(1.0);
    q.col(k) *= phase;
  }
  return q;
}

inline CVector haar_vector(int d, Rng& rng) {
  CVector v = ginibre(d, 1, rng).col(0);
  return v / v.norm();
}

/// Random traceless Hermitian matrix with unit Frobenius norm.
inline CMatrix random_traceless_hermitian(int n, Rng& rng) {
  CMatrix h = hermitian_part(ginibre(n, n, rng));
  h -= (h.trace() / static_cast<double>(n)) * CMatrix::Identity(n, n);
  const double nrm = h.norm();
  return nrm > 0 ? CMatrix(h / nrm) : h;
}

/// Random full-rank mixed state from the Hilbert-Schmidt ensemble.
inline DensityMatrix random_state(int dim_a, int dim_b, Rng& rng) {
  const int n = dim_a * dim_b;
  const CMatrix g = ginibre(n, n, rng);
  CMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(hermitian_part(m), dim_a, dim_b);
}

// --- experimental surrogates ------------------------------------------------

struct NoiseSpec {
  double depol = 0.0;         // white-noise weight
  double coherent_eps = 0.0;  // Frobenius size of the Hermitian kick
  std::uint64_t seed = 0;
};

/// Depolarize, add a seeded traceless Hermitian perturbation, project back
/// onto the PSD cone and renormalize.
inline DensityMatrix noisy_surrogate(const DensityMatrix& ideal, const NoiseSpec& spec) {
  if (!(spec.depol >= 0.0 && spec.depol <= 1.0))
    throw DomainError("noisy_surrogate: depol outside [0, 1]");
  if (!(spec.coherent_eps >= 0.0))
    throw DomainError("noisy_surrogate: negative coherent_eps");
  if (spec.depol == 0.0 && spec.coherent_eps == 0.0) return ideal;
  const int n = ideal.size();
  CMatrix m = (1.0 - spec.depol) * ideal.matrix() +
              spec.depol * CMatrix::Identity(n, n) / static_cast<double>(n);
  if (spec.coherent_eps > 0.0) {
    Rng rng(spec.seed);
    m += spec.coherent_eps * random_traceless_hermitian(n, rng);
  }
  return DensityMatrix::normalized(m, ideal.dim_a(), ideal.dim_b());
}

/// Surrogate whose fidelity with `ideal` equals `target` (to `tol`). The
/// noise is a single scale s with depol = s and coherent_eps = ratio * s.
inline DensityMatrix surrogate_for_fidelity(const DensityMatrix& ideal, double target,
                                            double coherent_ratio, std::uint64_t seed,
                                            NoiseSpec* used = nullptr,
                                            double tol = 1e-6) {
  if (!(target > 0.0 && target <= 1.0))
    throw DomainError("surrogate_for_fidelity: target outside (0, 1]");
  auto make = [&](double s) {
    return NoiseSpec{std::min(s, 1.0), coherent_ratio * s, seed};
  };
  double lo = 0.0, hi = 1.0;
  if (uhlmann_fidelity(noisy_surrogate(ideal, make(hi)), ideal) > target) {
    if (used) *used = make(hi);
    return noisy_surrogate(ideal, make(hi));
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (uhlmann_fidelity(noisy_surrogate(ideal, make(mid)), ideal) >= target)
      lo = mid;
    else
      hi = mid;
  }
  if (used) *used = make(lo);
  return noisy_surrogate(ideal, make(lo));
}

}  // namespace wernerq
