#pragma once

// Scalar certificates on a bipartite state.
//
// Verdict PASS means the named property is certified (see property()).
// Heuristic searches that find nothing report INCONCLUSIVE, never FAIL.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <tuple>

#include "wernerq/qmat.hpp"
#include "wernerq/states.hpp"

namespace wernerq {

enum class CertificateKind { Ppt, OneDistillable, GurvitsBall, Fef, Chsh, DenseCoding };
enum class Verdict { Pass, Fail, Inconclusive };

inline const char* to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::Ppt: return "ppt_min_eig";
    case CertificateKind::OneDistillable: return "one_distillable";
    case CertificateKind::GurvitsBall: return "gurvits_ball";
    case CertificateKind::Fef: return "fef";
    case CertificateKind::Chsh: return "chsh_horodecki";
    case CertificateKind::DenseCoding: return "dense_coding_delta";
  }
  return "?";
}

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

/// What a PASS verdict asserts.
inline const char* property(CertificateKind k) {
  switch (k) {
    case CertificateKind::Ppt: return "PPT";
    case CertificateKind::OneDistillable: return "1-DISTILLABLE";
    case CertificateKind::GurvitsBall: return "SEPARABLE";
    case CertificateKind::Fef: return "USEFUL-FOR-TELEPORTATION";
    case CertificateKind::Chsh: return "NONLOCAL";
    case CertificateKind::DenseCoding: return "DENSE-CODABLE";
  }
  return "?";
}

struct Certificate {
  CertificateKind kind = CertificateKind::Ppt;
  double value = 0.0;
  double threshold = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  std::optional<CMatrix> witness;  // psi (column), U, or measurement plane
  std::string witness_kind;
  std::uint64_t seed = 0;
  int restarts = 0;
};

inline constexpr double kVerdictTol = 1e-9;

// --- PPT ------------------------------------------------------------------------

/// Minimum eigenvalue of the partial transpose on A. PASS means PPT; FAIL
/// (value < -1e-9) certifies entanglement.
inline Certificate ppt_min_eig(const DensityMatrix& rho) {
  Certificate c;
  c.kind = CertificateKind::Ppt;
  const auto e = herm_eig(partial_transpose(rho, Side::A));
  c.value = e.values(0);
  c.threshold = 0.0;
  c.verdict = c.value < -kVerdictTol ? Verdict::Fail : Verdict::Pass;
  c.witness = CMatrix(e.vectors.col(0));
  c.witness_kind = "psi";
  return c;
}

// --- 1-distillability -------------------------------------------------------------

namespace detail {

/// Orthonormal basis (columns) of the dominant 2-dim support of a vector's
/// reduced state on one side. `coeff` is the dA x dB coefficient matrix.
inline CMatrix schmidt_frame(const CMatrix& coeff, Side side) {
  const CMatrix m = side == Side::A ? CMatrix(coeff) : CMatrix(coeff.transpose());
  const SvdResult f = svd(m);
  return f.u.leftCols(2);
}

/// Lowest eigenpair of X restricted to (frame_A (x) I) or (I (x) frame_B).
inline std::pair<double, CVector> restricted_min(const CMatrix& x, const CMatrix& frame,
                                                 Side framed, int da, int db) {
  const CMatrix iso = framed == Side::A ? kron(frame, CMatrix(CMatrix::Identity(db, db)))
                                        : kron(CMatrix(CMatrix::Identity(da, da)), frame);
  const auto e = herm_eig(iso.adjoint() * x * iso);
  return {e.values(0), iso * e.vectors.col(0)};
}

inline CMatrix coefficients(const CVector& psi, int da, int db) {
  CMatrix c(da, db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < db; ++j) c(i, j) = psi(i * db + j);
  return c;
}

}  // namespace detail

/// Lowest <psi| rho^{T_A} |psi> over Schmidt-rank-2 vectors. Alternates
/// between fixing a 2-dim subspace on B (optimal psi is then an eigenvector
/// on C^dA (x) C^2) and on A. Each step cannot increase the value.
inline Certificate one_distillable(const DensityMatrix& rho, int restarts = 64,
                                   std::uint64_t seed = 0, int max_sweeps = 200) {
  const int da = rho.dim_a(), db = rho.dim_b();
  if (da < 2 || db < 2) throw DimensionError("one_distillable: local dimensions must be >= 2");
  if (restarts < 1) throw DomainError("one_distillable: restarts must be >= 1");
  const CMatrix x = partial_transpose(rho, Side::A);

  Certificate cert;
  cert.kind = CertificateKind::OneDistillable;
  cert.seed = seed;
  cert.restarts = restarts;
  cert.threshold = 0.0;
  double best = std::numeric_limits<double>::infinity();
  CVector best_psi;
  for (int r = 0; r < restarts; ++r) {
    Rng rng(seed ^ static_cast<std::uint64_t>(r));
    CMatrix frame_b = haar_unitary(db, rng).leftCols(2);
    auto [val, psi] = detail::restricted_min(x, frame_b, Side::B, da, db);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      const double before = val;
      const CMatrix frame_a = detail::schmidt_frame(detail::coefficients(psi, da, db), Side::A);
      std::tie(val, psi) = detail::restricted_min(x, frame_a, Side::A, da, db);
      frame_b = detail::schmidt_frame(detail::coefficients(psi, da, db), Side::B);
      std::tie(val, psi) = detail::restricted_min(x, frame_b, Side::B, da, db);
      if (before - val < 1e-14) break;
    }
    if (val < best) {
      best = val;
      best_psi = psi;
    }
  }
  cert.value = best;
  cert.verdict = best < -1e-6 ? Verdict::Pass : Verdict::Inconclusive;
  cert.witness = CMatrix(best_psi);
  cert.witness_kind = "psi";
  return cert;
}

// --- Gurvits-Barnum ball ------------------------------------------------------------

/// ||rho - I/D||_F^2 against the ball radius^2 1/(D(D-1)), D = dimA dimB.
inline Certificate gurvits_ball(const DensityMatrix& rho) {
  const int n = rho.size();
  Certificate c;
  c.kind = CertificateKind::GurvitsBall;
  c.value = (rho.matrix() - CMatrix::Identity(n, n) / static_cast<double>(n)).squaredNorm();
  c.threshold = 1.0 / (static_cast<double>(n) * (n - 1));
  c.verdict = c.value <= c.threshold + kVerdictTol ? Verdict::Pass : Verdict::Inconclusive;
  return c;
}

// --- fully entangled fraction ------------------------------------------------------

/// <Psi_U| rho |Psi_U> with |Psi_U> = (I (x) U)|Phi+_d>.
inline double mes_overlap(const DensityMatrix& rho, const CMatrix& u) {
  const CVector psi = mes(rho.dim_a(), u);
  return (psi.adjoint() * rho.matrix() * psi)(0, 0).real();
}

/// Fully entangled fraction by multi-start ascent over the unitary group.
/// The objective is a convex quadratic in psi, so replacing U by the polar
/// factor of the linearized objective never decreases it. Restart 0 starts
/// at U = I, so the value is at least <Phi+|rho|Phi+>.
inline Certificate fef(const DensityMatrix& rho, int restarts = 32, std::uint64_t seed = 0,
                       int max_iter = 1000) {
  if (rho.dim_a() != rho.dim_b()) throw DimensionError("fef: needs dimA == dimB");
  if (restarts < 1) throw DomainError("fef: restarts must be >= 1");
  const int d = rho.dim_a();
  Certificate cert;
  cert.kind = CertificateKind::Fef;
  cert.seed = seed;
  cert.restarts = restarts;
  cert.threshold = 1.0 / d;
  double best = -1.0;
  CMatrix best_u;
  for (int r = 0; r < restarts; ++r) {
    Rng rng(seed ^ static_cast<std::uint64_t>(r));
    CMatrix u = r == 0 ? CMatrix(CMatrix::Identity(d, d)) : haar_unitary(d, rng);
    double val = mes_overlap(rho, u);
    for (int it = 0; it < max_iter; ++it) {
      // psi_{i*d+j} = U_{ji}/sqrt(d); gradient direction g = rho psi reshaped
      // the same way gives G_{ji} = g_{i*d+j}.
      const CVector g = rho.matrix() * mes(d, u);
      CMatrix gm(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) gm(j, i) = g(i * d + j);
      const CMatrix next = polar_unitary(gm);
      const double nv = mes_overlap(rho, next);
      if (nv < val + 1e-15) break;
      u = next;
      val = nv;
    }
    if (val > best) {
      best = val;
      best_u = u;
    }
  }
  cert.value = best;
  cert.verdict = best > cert.threshold + kVerdictTol ? Verdict::Pass : Verdict::Inconclusive;
  cert.witness = best_u;
  cert.witness_kind = "U";
  return cert;
}

namespace detail {

/// Columns: the magic basis, in which every maximally entangled two-qubit
/// vector is real up to a global phase.
inline CMatrix magic_basis() {
  const double s = 1.0 / std::sqrt(2.0);
  const cplx i(0, 1);
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = s;      m(3, 0) = s;       // Phi+
  m(0, 1) = i * s;  m(3, 1) = -i * s;  // i Phi-
  m(1, 2) = i * s;  m(2, 2) = i * s;   // i Psi+
  m(1, 3) = s;      m(2, 3) = -s;      // Psi-
  return m;
}

inline void check_two_qubit(const DensityMatrix& rho, const char* who) {
  if (rho.dim_a() != 2 || rho.dim_b() != 2)
    throw DimensionError(std::string(who) + ": needs a two-qubit state");
}

}  // namespace detail

/// Exact two-qubit fully entangled fraction: largest eigenvalue of the real
/// part of rho written in the magic basis.
inline double fef2_exact(const DensityMatrix& rho) {
  detail::check_two_qubit(rho, "fef2_exact");
  const CMatrix m = detail::magic_basis();
  const CMatrix rm = m.adjoint() * rho.matrix() * m;
  return max_eigenvalue(CMatrix(rm.real().cast<cplx>()));
}

/// Unitary U with (I (x) U)|Phi+> attaining fef2_exact.
inline CMatrix fef2_optimal_unitary(const DensityMatrix& rho) {
  detail::check_two_qubit(rho, "fef2_optimal_unitary");
  const CMatrix m = detail::magic_basis();
  const CMatrix rm = m.adjoint() * rho.matrix() * m;
  const auto e = herm_eig(CMatrix(rm.real().cast<cplx>()));
  CVector x = e.vectors.col(3);
  // eigenvectors of a real symmetric matrix can be chosen real
  const Eigen::Index k = [&] {
    Eigen::Index idx = 0;
    x.cwiseAbs().maxCoeff(&idx);
    return idx;
  }();
  x *= std::abs(x(k)) / x(k);
  const CVector psi = m * CVector(x.real().cast<cplx>().normalized());
  CMatrix u(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) u(j, i) = std::sqrt(2.0) * psi(i * 2 + j);
  return polar_unitary(u);  // removes rounding; u is already unitary
}

/// Overlap of rho (x) zero-padded into C^d (x) C^d with (I (x) (U2 + I_{d-2}))|Phi+_d>,
/// where U2 attains the two-qubit fully entangled fraction. Equals (2/d) F2.
inline double embedded_fef_bound(const DensityMatrix& rho, int d) {
  detail::check_two_qubit(rho, "embedded_fef_bound");
  check_local_dim(d, "embedded_fef_bound");
  const CMatrix u2 = fef2_optimal_unitary(rho);
  CMatrix ud = CMatrix::Identity(d, d);
  ud.topLeftCorner(2, 2) = u2;
  CMatrix emb = CMatrix::Zero(d * d, d * d);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) emb((r / 2) * d + r % 2, (c / 2) * d + c % 2) = rho.matrix()(r, c);
  return mes_overlap(DensityMatrix(emb, d, d), ud);
}

/// A two-qubit state with F2 > 1/2 embedded in d x d keeps F_d > 1/d.
inline bool fef_embedding_check(const DensityMatrix& rho, int d) {
  if (!(fef2_exact(rho) > 0.5))
    throw DomainError("fef_embedding_check: requires F2 > 1/2");
  return embedded_fef_bound(rho, d) > 1.0 / d;
}

// --- CHSH ---------------------------------------------------------------------------

/// T_mn = tr[rho sigma_m (x) sigma_n], m, n in {x, y, z}.
inline RMatrix correlation_tensor(const DensityMatrix& rho) {
  detail::check_two_qubit(rho, "correlation_tensor");
  const CMatrix s[3] = {pauli::X(), pauli::Y(), pauli::Z()};
  RMatrix t(3, 3);
  for (int m = 0; m < 3; ++m)
    for (int n = 0; n < 3; ++n) t(m, n) = (rho.matrix() * kron(s[m], s[n])).trace().real();
  return t;
}

/// Maximal CHSH value 2 sqrt(t1^2 + t2^2). Witness: the two dominant right
/// singular vectors of T (Bob's measurement plane), as a 3 x 2 real matrix.
inline Certificate chsh_horodecki(const DensityMatrix& rho) {
  const RMatrix t = correlation_tensor(rho);
  Eigen::JacobiSVD<RMatrix> js(t, Eigen::ComputeFullV);
  const RVector sv = js.singularValues();
  Certificate c;
  c.kind = CertificateKind::Chsh;
  c.value = 2.0 * std::sqrt(sv(0) * sv(0) + sv(1) * sv(1));
  c.threshold = 2.0;
  c.verdict = c.value > 2.0 + kVerdictTol ? Verdict::Pass : Verdict::Fail;
  c.witness = CMatrix(js.matrixV().leftCols(2).cast<cplx>());
  c.witness_kind = "measurement_plane";
  return c;
}

// --- dense coding -----------------------------------------------------------------

/// S(rho_B) - S(rho_AB) in bits.
inline Certificate dense_coding_delta(const DensityMatrix& rho) {
  Certificate c;
  c.kind = CertificateKind::DenseCoding;
  c.value = von_neumann_entropy(partial_trace(rho, Side::A)) - von_neumann_entropy(rho);
  c.threshold = 0.0;
  c.verdict = c.value > kVerdictTol ? Verdict::Pass : Verdict::Fail;
  return c;
}

namespace detail {
inline double xlog2(double x, double y) { return x > 0.0 ? x * std::log2(y) : 0.0; }
}  // namespace detail

/// delta of the Werner state in closed form.
inline double werner_delta(int d, double v) {
  check_local_dim(d, "werner_delta");
  check_weight(v, "werner_delta");
  const double dd = d;
  return std::log2(dd) + detail::xlog2(v, 2.0 * v / (dd * (dd + 1))) +
         detail::xlog2(1.0 - v, 2.0 * (1.0 - v) / (dd * (dd - 1)));
}

/// delta of the qubit-projected Werner state, which is locally equivalent to
/// the two-qubit Werner state with the filtered weight.
inline double filtered_delta(int d, double v) {
  check_local_dim(d, "filtered_delta");
  check_weight(v, "filtered_delta");
  const double dd = d;
  const double n = (dd + 1) * (1 - v) + 3 * v * (dd - 1);
  const double anti = (dd + 1) * (1 - v) / n;  // weight on the singlet
  return 1.0 + detail::xlog2(anti, anti) + detail::xlog2(3 * v * (dd - 1) / n, v * (dd - 1) / n);
}

/// Root of filtered_delta(d, .) on [0, 0.5] by bisection; nullopt when the
/// endpoints do not bracket a sign change.
inline std::optional<double> dc_threshold(int d, double tol = 1e-9) {
  check_local_dim(d, "dc_threshold");
  if (!(tol > 0)) throw DomainError("dc_threshold: tol must be positive");
  double lo = 0.0, hi = 0.5;
  if (!(filtered_delta(d, lo) > 0.0 && filtered_delta(d, hi) < 0.0)) return std::nullopt;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (filtered_delta(d, mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace wernerq
