#include <gtest/gtest.h>

#include "wernerq/filterops.hpp"
#include "wernerq/qmat.hpp"
#include "wernerq/states.hpp"

using namespace wernerq;

namespace {

double max_abs_diff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

const std::vector<double> v_grid_05 = [] {
  std::vector<double> g;
  for (int i = 0; i <= 20; ++i) g.push_back(0.05 * i);
  return g;
}();

}  // namespace

// --- qmat ------------------------------------------------------------------------

TEST(Kron, IdentityAndDiagonal) {
  EXPECT_LT(max_abs_diff(kron(CMatrix(CMatrix::Identity(2, 2)), CMatrix(CMatrix::Identity(3, 3))),
                         CMatrix::Identity(6, 6)),
            1e-15);
  CMatrix a = CMatrix::Zero(2, 2), b = CMatrix::Zero(2, 2);
  a(0, 0) = 1; a(1, 1) = 2; b(0, 0) = 3; b(1, 1) = 4;
  const CMatrix k = kron(a, b);
  EXPECT_EQ(k(0, 0), cplx(3)); EXPECT_EQ(k(1, 1), cplx(4));
  EXPECT_EQ(k(2, 2), cplx(6)); EXPECT_EQ(k(3, 3), cplx(8));
}

TEST(Kron, BitFlipPermutes) {
  const CVector out = kron(pauli::X(), pauli::X()) * ket(4, 0);
  EXPECT_LT((out - ket(4, 3)).norm(), 1e-15);
}

TEST(Kron, IndexConvention) {
  CMatrix a(2, 3), b(3, 2);
  for (int i = 0; i < 2; ++i) for (int j = 0; j < 3; ++j) a(i, j) = cplx(i + 1, j);
  for (int i = 0; i < 3; ++i) for (int j = 0; j < 2; ++j) b(i, j) = cplx(j - i, 1);
  const CMatrix k = kron(a, b);
  ASSERT_EQ(k.rows(), 6); ASSERT_EQ(k.cols(), 6);
  for (int i = 0; i < 2; ++i) for (int j = 0; j < 3; ++j)
    for (int p = 0; p < 3; ++p) for (int q = 0; q < 2; ++q)
      EXPECT_EQ(k(i * 3 + p, j * 2 + q), a(i, j) * b(p, q));
}

TEST(PartialTrace, Marginals) {
  const DensityMatrix phi = DensityMatrix::pure(phi_plus(2), 2, 2);
  EXPECT_LT(max_abs_diff(partial_trace(phi, Side::A), CMatrix::Identity(2, 2) / 2.0), 1e-15);

  Rng rng(7);
  const CMatrix ra = random_state(2, 1, rng).matrix();
  const CMatrix rb = random_state(3, 1, rng).matrix();
  const DensityMatrix prod = product_state(ra, rb);
  EXPECT_LT(max_abs_diff(partial_trace(prod, Side::B), ra), 1e-14);
  EXPECT_LT(max_abs_diff(partial_trace(prod, Side::A), rb), 1e-14);

  for (double v : v_grid_05)
    EXPECT_LT(max_abs_diff(partial_trace(werner(3, v), Side::A), CMatrix::Identity(3, 3) / 3.0),
              1e-14);
}

TEST(PartialTrace, TracePreservedOnRandomStates) {
  Rng rng(11);
  for (int s = 0; s < 20; ++s) {
    const DensityMatrix r = random_state(3, 2, rng);
    EXPECT_NEAR(partial_trace(r, Side::A).trace().real(), 1.0, 1e-10);
    EXPECT_NEAR(partial_trace(r, Side::B).trace().real(), 1.0, 1e-10);
  }
}

TEST(PartialTrace, MultipartyKeepsRequestedSubsystems) {
  Rng rng(3);
  const CMatrix a = random_state(2, 1, rng).matrix();
  const CMatrix b = random_state(3, 1, rng).matrix();
  const CMatrix c = random_state(2, 1, rng).matrix();
  const CMatrix abc = kron(kron(a, b), c);
  const TensorShape shape({2, 3, 2});
  EXPECT_LT(max_abs_diff(partial_trace(abc, shape, {0, 2}), kron(a, c)), 1e-14);
  EXPECT_LT(max_abs_diff(partial_trace(abc, shape, {1}), b), 1e-14);
  EXPECT_LT(max_abs_diff(partial_trace(abc, shape, {2, 0}), kron(a, c)), 1e-14);
}

TEST(PartialTranspose, ProductAndInvolution) {
  Rng rng(5);
  const CMatrix ra = random_state(3, 1, rng).matrix();
  const CMatrix rb = random_state(2, 1, rng).matrix();
  const DensityMatrix prod = product_state(ra, rb);
  EXPECT_LT(max_abs_diff(partial_transpose(prod, Side::A), kron(ra.transpose(), rb)), 1e-15);

  const DensityMatrix r = random_state(3, 3, rng);
  const CMatrix once = partial_transpose(r, Side::A);
  const CMatrix twice = partial_transpose(once, r.shape(), std::vector<int>{0});
  EXPECT_TRUE((twice.array() == r.matrix().array()).all());
}

TEST(PartialTranspose, WernerSpectrum) {
  EXPECT_NEAR(min_eigenvalue(partial_transpose(werner(3, 0.0), Side::A)), -1.0 / 3.0, 1e-12);
  EXPECT_NEAR(min_eigenvalue(partial_transpose(werner(3, 0.5), Side::A)), 0.0, 1e-12);
}

TEST(HermEig, SpectraAndReconstruction) {
  const auto e3 = herm_eig(CMatrix::Identity(3, 3));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(e3.values(i), 1.0, 1e-15);
  const auto ez = herm_eig(pauli::Z());
  EXPECT_NEAR(ez.values(0), -1.0, 1e-15);
  EXPECT_NEAR(ez.values(1), 1.0, 1e-15);

  const auto ew = herm_eig(werner(3, 0.0).matrix());
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(ew.values(i), 0.0, 1e-12);
  for (int i = 6; i < 9; ++i) EXPECT_NEAR(ew.values(i), 1.0 / 3.0, 1e-12);

  Rng rng(9);
  for (int s = 0; s < 10; ++s) {
    const CMatrix h = random_traceless_hermitian(12, rng) + CMatrix::Identity(12, 12) * 0.3;
    const auto e = herm_eig(h);
    const CMatrix rec = e.vectors * e.values.asDiagonal() * e.vectors.adjoint();
    EXPECT_LE((h - rec).norm(), 1e-9 * h.norm());
    EXPECT_LT((e.vectors.adjoint() * e.vectors - CMatrix::Identity(12, 12)).norm(), 1e-10);
    EXPECT_NEAR(e.values.sum(), h.trace().real(), 1e-9 * 12);
  }
  EXPECT_THROW(herm_eig(CMatrix::Zero(2, 3)), DimensionError);
}

TEST(Svd, Examples) {
  EXPECT_NEAR(svd(CMatrix::Identity(2, 2)).s(1), 1.0, 1e-15);
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 3.0;
  const auto f = svd(d);
  EXPECT_NEAR(f.s(0), 3.0, 1e-15);
  EXPECT_NEAR(f.s(1), 0.0, 1e-15);
  const auto p = svd(qubit_projection(3, 1, 2).matrix());
  EXPECT_NEAR(p.s(0), 1.0, 1e-15);
  EXPECT_NEAR(p.s(1), 1.0, 1e-15);
}

TEST(Svd, ReconstructionAndUnitarity) {
  Rng rng(13);
  for (int s = 0; s < 10; ++s) {
    const CMatrix m = ginibre(3, 5, rng);
    const auto f = svd(m);
    EXPECT_LE((m - f.recompose()).norm(), 1e-9 * m.norm());
    EXPECT_TRUE(is_unitary(f.u));
    EXPECT_TRUE(is_unitary(f.vdag));
    EXPECT_NEAR(f.s(0), operator_norm(m), 1e-12);
    for (Eigen::Index i = 1; i < f.s.size(); ++i) EXPECT_GE(f.s(i - 1), f.s(i));
  }
}

TEST(Entropy, Examples) {
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix::pure(phi_plus(2), 2, 2)), 0.0, 1e-12);
  EXPECT_NEAR(von_neumann_entropy(maximally_mixed(2, 2)), 2.0, 1e-12);
  EXPECT_NEAR(von_neumann_entropy(werner(3, 2.0 / 3.0)), std::log2(9.0), 1e-9);
  CMatrix bad = CMatrix::Identity(2, 2);
  bad(0, 0) = 1.1; bad(1, 1) = -0.1;
  EXPECT_THROW(von_neumann_entropy(bad), DomainError);
}

TEST(Entropy, AdditiveOnProducts) {
  Rng rng(17);
  for (int s = 0; s < 10; ++s) {
    const CMatrix a = random_state(3, 1, rng).matrix();
    const CMatrix b = random_state(2, 1, rng).matrix();
    EXPECT_NEAR(von_neumann_entropy(kron(a, b)), von_neumann_entropy(a) + von_neumann_entropy(b),
                1e-9);
  }
}

TEST(Fidelity, Examples) {
  const DensityMatrix r = werner(3, 0.3);
  EXPECT_NEAR(uhlmann_fidelity(r, r), 1.0, 1e-10);
  EXPECT_NEAR(uhlmann_fidelity(projector(ket(2, 0)), projector(ket(2, 1))), 0.0, 1e-12);
  EXPECT_NEAR(uhlmann_fidelity(projector(ket(2, 0)), CMatrix(CMatrix::Identity(2, 2) / 2.0)), 0.5,
              1e-12);
  Rng rng(19);
  for (int s = 0; s < 10; ++s) {
    const DensityMatrix a = random_state(2, 2, rng), b = random_state(2, 2, rng);
    EXPECT_NEAR(uhlmann_fidelity(a, b), uhlmann_fidelity(b, a), 1e-10);
  }
  EXPECT_THROW(uhlmann_fidelity(werner(2, 0.1), werner(3, 0.1)), DimensionError);
}

TEST(DensityMatrixType, RejectsInvalid) {
  EXPECT_THROW(DensityMatrix(CMatrix::Identity(4, 4), 2, 2), DomainError);  // trace 4
  CMatrix nh = CMatrix::Identity(2, 2) / 2.0;
  nh(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix(nh, 2, 1), DomainError);
  CMatrix neg = CMatrix::Zero(2, 2);
  neg(0, 0) = 1.5; neg(1, 1) = -0.5;
  EXPECT_THROW(DensityMatrix(neg, 2, 1), DomainError);
  EXPECT_THROW(DensityMatrix(CMatrix::Identity(4, 4) / 4.0, 3, 2), DimensionError);
}

// --- states ----------------------------------------------------------------------

TEST(Swap, Properties) {
  const CMatrix v2 = swap_operator(2);
  EXPECT_LT((v2 * ket(4, 1) - ket(4, 2)).norm(), 1e-15);
  const CMatrix v3 = swap_operator(3);
  EXPECT_NEAR(v3.trace().real(), 3.0, 1e-15);
  EXPECT_LT(max_abs_diff(v3 * v3, CMatrix::Identity(9, 9)), 1e-15);
  EXPECT_LT(max_abs_diff(partial_transpose(v3, TensorShape({3, 3}), std::vector<int>{0}),
                         3.0 * projector(phi_plus(3))),
            1e-14);
  EXPECT_THROW(swap_operator(1), DomainError);
}

TEST(Werner, MatrixElements) {
  const double v = 0.37;
  EXPECT_NEAR(werner(3, v).matrix()(0, 0).real(), v / 6.0, 1e-15);
  EXPECT_LT(max_abs_diff(werner(3, 2.0 / 3.0).matrix(), CMatrix::Identity(9, 9) / 9.0), 1e-15);
  EXPECT_NEAR(werner(3, 0.0).matrix()(1, 3).real(), -1.0 / 6.0, 1e-15);
  EXPECT_THROW(werner(3, 1.2), DomainError);
  EXPECT_THROW(werner(3, -0.1), DomainError);
}

TEST(Werner, ThreeConstructionsAgree) {
  for (int d = 2; d <= 5; ++d)
    for (double v : v_grid_05) {
      const CMatrix w = werner(d, v).matrix();
      EXPECT_LT(max_abs_diff(w, werner_all_v(d, v).matrix()), 1e-12) << d << " " << v;
      if (v <= (d + 1.0) / (2.0 * d) + 1e-15) {
        EXPECT_LT(max_abs_diff(w, werner_from_qubit_mixture(d, v).matrix()), 1e-12)
            << d << " " << v;
      }
    }
}

TEST(Werner, QubitMixtureRejectsLargeWeight) {
  try {
    werner_from_qubit_mixture(3, 0.9);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("werner_all_v"), std::string::npos);
  }
  EXPECT_NO_THROW(werner_from_qubit_mixture(2, 0.75));
  EXPECT_THROW(werner_from_qubit_mixture(2, 0.8), DomainError);
}

TEST(Werner, AllVExtremes) {
  EXPECT_LT(max_abs_diff(werner_all_v(3, 1.0).matrix(), symmetric_projector(3) / 6.0), 1e-15);
  EXPECT_LT(max_abs_diff(werner_all_v(3, 0.0).matrix(), antisymmetric_projector(3) / 3.0), 1e-15);
  EXPECT_LT(max_abs_diff(werner_all_v(4, 0.9).matrix(), werner(4, 0.9).matrix()), 1e-12);
}

TEST(Werner, TwirlSwapAndWeight) {
  Rng rng(23);
  for (int d = 2; d <= 4; ++d) {
    const DensityMatrix w = werner(d, 0.3);
    for (int s = 0; s < 20; ++s) {
      const CMatrix u = haar_unitary(d, rng);
      const CMatrix uu = kron(u, u);
      EXPECT_LE((uu * w.matrix() * uu.adjoint() - w.matrix()).norm(), 1e-9);
    }
    const CMatrix sw = swap_operator(d);
    EXPECT_LT(max_abs_diff(sw * w.matrix() * sw.adjoint(), w.matrix()), 1e-12);
    EXPECT_NEAR((w.matrix() * symmetric_projector(d)).trace().real(), 0.3, 1e-12);
  }
}

TEST(Mes, Examples) {
  EXPECT_LT((mes(3, CMatrix::Identity(3, 3)) - phi_plus(3)).norm(), 1e-15);
  const CMatrix iy = cplx(0, 1) * pauli::Y();
  const CVector s = mes(2, iy);
  CVector singlet = (ket(4, 1) - ket(4, 2)) / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(s.dot(singlet)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(phi_plus(3).dot(werner(3, 0.0).matrix() * phi_plus(3))), 0.0, 1e-15);
  EXPECT_THROW(mes(2, CMatrix::Identity(2, 2) * 2.0), DomainError);
  Rng rng(29);
  const CVector m = mes(3, haar_unitary(3, rng));
  const DensityMatrix pm = DensityMatrix::pure(m, 3, 3);
  EXPECT_LT(max_abs_diff(partial_trace(pm, Side::A), CMatrix::Identity(3, 3) / 3.0), 1e-12);
  EXPECT_LT(max_abs_diff(partial_trace(pm, Side::B), CMatrix::Identity(3, 3) / 3.0), 1e-12);
}

TEST(Haar, UnitaryAndSeeded) {
  Rng a(31), b(31);
  const CMatrix ua = haar_unitary(4, a), ub = haar_unitary(4, b);
  EXPECT_TRUE(is_unitary(ua));
  EXPECT_TRUE((ua.array() == ub.array()).all());
}

TEST(Surrogate, Examples) {
  const DensityMatrix w = werner(3, 0.0);
  const DensityMatrix same = noisy_surrogate(w, {0.0, 0.0, 1});
  EXPECT_TRUE((same.matrix().array() == w.matrix().array()).all());
  EXPECT_LT(max_abs_diff(noisy_surrogate(w, {1.0, 0.0, 1}).matrix(), CMatrix::Identity(9, 9) / 9.0),
            1e-15);
  const NoiseSpec spec{0.03, 0.02, 42};
  EXPECT_EQ(uhlmann_fidelity(noisy_surrogate(w, spec), w),
            uhlmann_fidelity(noisy_surrogate(w, spec), w));
  NoiseSpec used;
  const DensityMatrix s = surrogate_for_fidelity(w, 0.96, 0.5, 42, &used);
  EXPECT_NEAR(uhlmann_fidelity(s, w), 0.958, 0.01);
  EXPECT_GT(used.depol, 0.0);
}

// --- filterops -------------------------------------------------------------------

TEST(QubitProjection, Examples) {
  const CMatrix p01 = qubit_projection(3, 0, 1).matrix();
  EXPECT_LT(max_abs_diff(p01, CMatrix::Identity(3, 3).topRows(2)), 1e-15);
  const CMatrix p12 = qubit_projection(3, 1, 2).matrix();
  EXPECT_LT(max_abs_diff(p12, CMatrix::Identity(3, 3).bottomRows(2)), 1e-15);
  EXPECT_LT(max_abs_diff(qubit_projection(2, 0, 1).matrix(), CMatrix::Identity(2, 2)), 1e-15);
  EXPECT_THROW(qubit_projection(3, 1, 1), DomainError);
  EXPECT_THROW(qubit_projection(3, 0, 3), DomainError);
}

TEST(FilterOperatorType, Validation) {
  EXPECT_THROW(FilterOperator(CMatrix::Identity(3, 3) * 2.0, Side::A), DomainError);
  EXPECT_THROW(FilterOperator(CMatrix::Identity(1, 3), Side::A), DimensionError);
  double scale = 0;
  const auto f = FilterOperator::rescaled(CMatrix::Identity(3, 3) * 2.0, Side::A, &scale);
  EXPECT_NEAR(scale, 2.0, 1e-15);
  EXPECT_NEAR(operator_norm(f.matrix()), 1.0, 1e-15);
}

TEST(ApplyFilter, IdentityAndSuccess) {
  const DensityMatrix w = werner(3, 0.2);
  const auto r = apply_filter(w, identity_filter(3, Side::A), identity_filter(3, Side::B));
  EXPECT_NEAR(r.success_prob, 1.0, 1e-14);
  EXPECT_LT(max_abs_diff(r.state.matrix(), w.matrix()), 1e-14);

  const auto f = apply_filter(werner(3, 0.0), qubit_projection(3, 1, 2, Side::A),
                              qubit_projection(3, 1, 2, Side::B));
  EXPECT_NEAR(f.success_prob, 1.0 / 3.0, 1e-14);
  EXPECT_THROW(apply_filter(w, qubit_projection(3, 1, 2, Side::B),
                            qubit_projection(3, 1, 2, Side::B)),
               DomainError);
}

TEST(ApplyFilter, Annihilation) {
  CMatrix m = CMatrix::Zero(2, 3);
  m(0, 0) = 1; m(1, 1) = 1;
  const DensityMatrix r = DensityMatrix::pure(kron(ket(3, 2), ket(3, 2)), 3, 3);
  EXPECT_THROW(apply_filter(r, FilterOperator(m, Side::A), FilterOperator(m, Side::B)),
               DomainError);
}

TEST(FilteredWeight, ClosedForm) {
  EXPECT_NEAR(filtered_weight(3, 0.0), 0.0, 1e-15);
  EXPECT_NEAR(filtered_weight(3, 0.2), 1.2 / 4.4, 1e-15);
  EXPECT_NEAR(filtered_weight(3, 0.5), 0.6, 1e-15);
  for (double v : v_grid_05) EXPECT_NEAR(filtered_weight(2, v), v, 1e-15);
  for (int d = 2; d <= 6; ++d)
    for (int i = 1; i < 100; ++i)
      EXPECT_LT(filtered_weight(d, (i - 1) / 100.0), filtered_weight(d, i / 100.0));
}

TEST(FilteredWeight, MatchesApplyFilter) {
  for (int d = 3; d <= 5; ++d)
    for (int i = 0; i <= 10; ++i) {
      const double v = 0.05 * i;
      const auto f = apply_filter(werner(d, v), qubit_projection(d, 0, 1, Side::A),
                                  qubit_projection(d, 0, 1, Side::B));
      EXPECT_NEAR(f.state.matrix().trace().real(), 1.0, 1e-10);
      EXPECT_LT(max_abs_diff(f.state.matrix(), werner(2, filtered_weight(d, v)).matrix()), 1e-10);
    }
}

TEST(RotatedFilteredState, Examples) {
  EXPECT_LT(max_abs_diff(rotated_filtered_state(0.0).matrix(), projector(phi_plus(2))), 1e-15);
  const CMatrix p = projector(phi_plus(2));
  EXPECT_LT(max_abs_diff(rotated_filtered_state(1.0).matrix(), (CMatrix::Identity(4, 4) - p) / 3.0),
            1e-15);
  for (double v : v_grid_05) {
    const double n = 4.0 * (1 - v) + 6.0 * v;
    const CMatrix expect = (4.0 * (1 - v) * p + 2.0 * v * (CMatrix::Identity(4, 4) - p)) / n;
    EXPECT_LT(max_abs_diff(rotated_filtered_state(v).matrix(), expect), 1e-14);

    const auto f = apply_filter(werner(3, v), qubit_projection(3, 1, 2, Side::A),
                                qubit_projection(3, 1, 2, Side::B));
    const CMatrix r = filtered_state_rotation();
    const CMatrix rotated = r * f.state.matrix() * r.adjoint();
    EXPECT_NEAR(uhlmann_fidelity(rotated, rotated_filtered_state(v).matrix()), 1.0, 1e-10);
  }
}

TEST(FilterProtocolTest, RowSelector) {
  const auto p = filter_protocol(qubit_projection(3, 1, 2));
  ASSERT_EQ(p.kept_indices.size(), 2u);
  EXPECT_NEAR(p.attenuations[0], 1.0, 1e-15);
  EXPECT_NEAR(p.attenuations[1], 1.0, 1e-15);
  EXPECT_TRUE(is_unitary(p.pre_unitary));
  EXPECT_TRUE(is_unitary(p.post_unitary));
  EXPECT_LT(max_abs_diff(p.recompose(), qubit_projection(3, 1, 2).matrix()), 1e-12);
}

TEST(FilterProtocolTest, DiagonalIsAttenuationOnly) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0; m(1, 1) = 0.5;
  const auto p = filter_protocol(m, Side::A);
  EXPECT_NEAR(p.attenuations[0], 1.0, 1e-15);
  EXPECT_NEAR(p.attenuations[1], 0.5, 1e-15);
  EXPECT_LT(max_abs_diff(p.recompose(), m), 1e-15);
  EXPECT_THROW(filter_protocol(CMatrix::Zero(2, 2), Side::A), DomainError);
}

TEST(FilterProtocolTest, ReplayMatchesApplyFilter) {
  Rng rng(37);
  for (int s = 0; s < 100; ++s) {
    const auto fa = FilterOperator::rescaled(ginibre(2, 3, rng), Side::A);
    const auto fb = FilterOperator::rescaled(ginibre(2, 3, rng), Side::B);
    const DensityMatrix rho = random_state(3, 3, rng);
    const auto direct = apply_filter(rho, fa, fb);
    const auto pa = filter_protocol(fa), pb = filter_protocol(fb);
    EXPECT_LT(max_abs_diff(pa.recompose(), fa.matrix()), 1e-12);
    const auto replay = replay_protocol(rho, pa, pb);
    EXPECT_LT(max_abs_diff(replay.state.matrix(), direct.state.matrix()), 1e-12);
    EXPECT_NEAR(replay.success_prob, direct.success_prob, 1e-12);
  }
}

TEST(FilterProtocolTest, ReportsScale) {
  const auto p = filter_protocol(CMatrix(CMatrix::Identity(2, 2) * 3.0), Side::B);
  EXPECT_NEAR(p.scale, 3.0, 1e-14);
  EXPECT_NEAR(p.attenuations[0], 1.0, 1e-14);
}
