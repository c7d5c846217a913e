#pragma once

// Single-copy local filtering: a single Kraus operator per side.

#include "wernerq/qmat.hpp"
#include "wernerq/states.hpp"

namespace wernerq {

/// Rectangular d' x d local filter with operator norm 1.
class FilterOperator {
 public:
  FilterOperator(CMatrix mat, Side side) : mat_(std::move(mat)), side_(side) {
    if (mat_.rows() < 2)
      throw DimensionError("FilterOperator: output dimension must be >= 2");
    if (mat_.cols() < 1) throw DimensionError("FilterOperator: empty input space");
    if (!all_finite(mat_)) throw DomainError("FilterOperator: non-finite entry");
    const double n = operator_norm(mat_);
    if (std::abs(n - 1.0) > 1e-10)
      throw DomainError("FilterOperator: operator norm " + std::to_string(n) + " != 1");
  }

  /// Divides by the operator norm; the factor removed is written to `scale`.
  static FilterOperator rescaled(const CMatrix& mat, Side side, double* scale = nullptr) {
    const double n = operator_norm(mat);
    if (!(n > 0)) throw DomainError("FilterOperator: zero matrix");
    if (scale) *scale = n;
    return FilterOperator(mat / n, side);
  }

  const CMatrix& matrix() const { return mat_; }
  Side side() const { return side_; }
  int in_dim() const { return static_cast<int>(mat_.cols()); }
  int out_dim() const { return static_cast<int>(mat_.rows()); }

 private:
  CMatrix mat_;
  Side side_;
};

inline FilterOperator identity_filter(int d, Side side) {
  return FilterOperator(CMatrix::Identity(d, d), side);
}

/// Keep the local levels i and j: the 2 x d row selector |0><i| + |1><j|.
inline FilterOperator qubit_projection(int d, int i, int j, Side side = Side::A) {
  if (!(0 <= i && i < j && j < d))
    throw DomainError("qubit_projection: need 0 <= i < j < d");
  CMatrix m = CMatrix::Zero(2, d);
  m(0, i) = 1.0;
  m(1, j) = 1.0;
  return FilterOperator(m, side);
}

struct FilterResult {
  DensityMatrix state;
  double success_prob;
};

inline FilterResult apply_filter(const DensityMatrix& rho, const FilterOperator& fa,
                                 const FilterOperator& fb) {
  if (fa.side() != Side::A || fb.side() != Side::B)
    throw DomainError("apply_filter: filters must act on sides A and B respectively");
  if (fa.in_dim() != rho.dim_a() || fb.in_dim() != rho.dim_b())
    throw DimensionError("apply_filter: filter input dimension does not match state");
  const CMatrix k = kron(fa.matrix(), fb.matrix());
  CMatrix out = k * rho.matrix() * k.adjoint();
  const double p = out.trace().real();
  if (p < 1e-12) throw DomainError("apply_filter: filter annihilates state");
  out /= p;
  return {DensityMatrix(hermitian_part(out), fa.out_dim(), fb.out_dim()), p};
}

/// Weight of the two-qubit Werner state left after a qubit projection of
/// W^(d)(v) on both sides.
inline double filtered_weight(int d, double v) {
  check_local_dim(d, "filtered_weight");
  check_weight(v, "filtered_weight");
  const double num = 3.0 * (d - 1) * v;
  return num / ((d + 1) * (1.0 - v) + num);
}

/// (sigma_x (x) sigma_z) W^(2)(v') (sigma_x (x) sigma_z)^dagger with v' the
/// filtered weight. For d = 3 this is
/// [4(1-v)|Phi+><Phi+| + 2v(I - |Phi+><Phi+|)] / (4(1-v) + 6v).
inline DensityMatrix rotated_filtered_state(double v, int d = 3) {
  check_weight(v, "rotated_filtered_state");
  const double vf = filtered_weight(d, v);
  const CVector phi = phi_plus(2);
  const CMatrix p = projector(phi);
  // W^(2)(v') = v'/3 Pi+ + (1-v') Pi-; the rotation maps the singlet onto
  // Phi+ and the triplet space onto its complement.
  CMatrix m = (1.0 - vf) * p + (vf / 3.0) * (CMatrix::Identity(4, 4) - p);
  return DensityMatrix(m, 2, 2);
}

/// The local rotation used to align the filtered singlet with Phi+.
inline CMatrix filtered_state_rotation() { return kron(pauli::X(), pauli::Z()); }

// --- three-step realization --------------------------------------------------

/// M = U Sigma V^dagger realized as: unitary V^dagger, path blocking with
/// attenuations s_i on the kept indices, unitary U.
struct FilterProtocol {
  CMatrix pre_unitary;              // V^dagger, d x d
  std::vector<int> kept_indices;    // i with s_i > 1e-12
  std::vector<double> attenuations; // s_i for each kept index
  CMatrix post_unitary;             // U, d' x d'
  double scale = 1.0;               // operator norm divided out of the input
  Side side = Side::A;

  int in_dim() const { return static_cast<int>(pre_unitary.rows()); }
  int out_dim() const { return static_cast<int>(post_unitary.rows()); }

  /// d' x d attenuation / blocking stage.
  CMatrix attenuation_stage() const {
    CMatrix s = CMatrix::Zero(out_dim(), in_dim());
    for (std::size_t k = 0; k < kept_indices.size(); ++k)
      s(kept_indices[k], kept_indices[k]) = attenuations[k];
    return s;
  }

  CMatrix recompose() const { return post_unitary * attenuation_stage() * pre_unitary; }
};

inline FilterProtocol filter_protocol(const CMatrix& m, Side side) {
  if (m.size() == 0 || m.cwiseAbs().maxCoeff() == 0.0)
    throw DomainError("filter_protocol: zero matrix");
  const SvdResult f = svd(m);
  FilterProtocol p;
  p.side = side;
  p.scale = 1.0;
  if (std::abs(f.s(0) - 1.0) > 1e-8) p.scale = f.s(0);
  p.pre_unitary = f.vdag;
  p.post_unitary = f.u;
  for (Eigen::Index i = 0; i < f.s.size(); ++i) {
    const double si = f.s(i) / p.scale;
    if (si > 1e-12) {
      p.kept_indices.push_back(static_cast<int>(i));
      p.attenuations.push_back(si);
    }
  }
  return p;
}

inline FilterProtocol filter_protocol(const FilterOperator& f) {
  return filter_protocol(f.matrix(), f.side());
}

/// Runs the three steps in sequence on both sides and renormalizes.
inline FilterResult replay_protocol(const DensityMatrix& rho, const FilterProtocol& pa,
                                    const FilterProtocol& pb) {
  if (pa.in_dim() != rho.dim_a() || pb.in_dim() != rho.dim_b())
    throw DimensionError("replay_protocol: protocol input dimension does not match state");
  auto conj = [](const CMatrix& k, const CMatrix& x) -> CMatrix {
    return k * x * k.adjoint();
  };
  CMatrix x = conj(kron(pa.pre_unitary, pb.pre_unitary), rho.matrix());
  x = conj(kron(pa.attenuation_stage(), pb.attenuation_stage()), x);
  x = conj(kron(pa.post_unitary, pb.post_unitary), x);
  const double p = x.trace().real();
  if (p < 1e-12) throw DomainError("replay_protocol: filter annihilates state");
  x /= p;
  return {DensityMatrix(hermitian_part(x), pa.out_dim(), pb.out_dim()), p};
}

}  // namespace wernerq
