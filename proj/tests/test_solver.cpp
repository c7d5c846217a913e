#include <gtest/gtest.h>

#include <sstream>

#include "wernerq/solver.hpp"
#include "wernerq/states.hpp"

using namespace wernerq;

namespace {

// min x  s.t.  x - s = 3, s >= 0, x free
ConicProgram shifted_lp(double scale = 1.0) {
  ConicProgram p;
  const int bx = p.add_block(ConeKind::Free, 1);
  const int bs = p.add_block(ConeKind::NonNeg, 1);
  const int r = p.add_row(3.0 * scale);
  p.add_coef(r, p.block(bx).offset, 1.0);
  p.add_coef(r, p.block(bs).offset, -1.0);
  p.set_cost(p.block(bx).offset, 1.0 * scale);
  return p;
}

// min t  s.t.  t I - H = S, S PSD
ConicProgram max_eig_sdp(const CMatrix& h) {
  const int n = static_cast<int>(h.rows());
  ConicProgram p;
  const int bt = p.add_block(ConeKind::Free, 1);
  const int bs = p.add_block(ConeKind::Psd, n);
  const int t = p.block(bt).offset;
  p.set_cost(t, 1.0);
  for (int r = 0; r < n; ++r)
    for (int c = r; c < n; ++c) {
      // Re: t delta_rc - S_rc = Re H_rc
      const int re = p.add_row(h(r, c).real());
      if (r == c) p.add_coef(re, t, 1.0);
      p.add_re(re, bs, r, c, -1.0);
      if (r != c) {
        const int im = p.add_row(h(r, c).imag());
        p.add_im(im, bs, r, c, -1.0);
      }
    }
  return p;
}

// Random feasible, bounded LP: A x = b with x >= 0 and bounded objective.
ConicProgram random_lp(Rng& rng, int nvars, int rows) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.1, 1.0);
  ConicProgram p;
  p.add_block(ConeKind::NonNeg, nvars);
  RVector x0(nvars);
  for (int j = 0; j < nvars; ++j) x0(j) = pos(rng);
  for (int i = 0; i < rows; ++i) {
    double b = 0.0;
    std::vector<double> a(nvars);
    for (int j = 0; j < nvars; ++j) {
      a[j] = u(rng);
      b += a[j] * x0(j);
      p.add_coef(i, j, a[j]);
    }
    p.add_row(b);
  }
  // positive costs keep the problem bounded below on x >= 0
  for (int j = 0; j < nvars; ++j) p.set_cost(j, pos(rng) + u(rng) * 0.05);
  return p;
}

}  // namespace

TEST(HermCoordinates, RoundTripAndInnerProduct) {
  Rng rng(1);
  for (int n = 1; n <= 5; ++n) {
    const CMatrix a = hermitian_part(ginibre(n, n, rng));
    const CMatrix b = hermitian_part(ginibre(n, n, rng));
    const RVector va = herm_to_vec(a), vb = herm_to_vec(b);
    EXPECT_LT((vec_to_herm(va, n) - a).norm(), 1e-14);
    EXPECT_NEAR(va.dot(vb), (a * b).trace().real(), 1e-12);
  }
}

TEST(HermCoordinates, EntryFunctionals) {
  Rng rng(2);
  const int n = 4;
  const CMatrix x = hermitian_part(ginibre(n, n, rng));
  ConicProgram p;
  const int blk = p.add_block(ConeKind::Psd, n);
  std::vector<std::pair<int, int>> entries = {{0, 0}, {1, 2}, {3, 1}, {2, 2}};
  for (auto [r, c] : entries) {
    p.add_re(p.add_row(), blk, r, c, 1.0);
    p.add_im(p.add_row(), blk, r, c, 1.0);
  }
  const RVector ax = RMatrix(p.a_matrix()) * herm_to_vec(x);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    auto [r, c] = entries[k];
    EXPECT_NEAR(ax(2 * k), x(r, c).real(), 1e-14);
    EXPECT_NEAR(ax(2 * k + 1), r == c ? 0.0 : x(r, c).imag(), 1e-14);
  }
}

TEST(Solve, ShiftedLp) {
  const ConicSolution s = solve(shifted_lp());
  ASSERT_EQ(s.status, SolveStatus::Optimal);
  EXPECT_NEAR(s.primal_obj, 3.0, 1e-6);
  EXPECT_NEAR(lp_vertex_enumeration_check(shifted_lp()), 3.0, 1e-12);
}

TEST(Solve, SpectralNormOfPauliX) {
  const ConicSolution s = solve(max_eig_sdp(pauli::X()));
  ASSERT_EQ(s.status, SolveStatus::Optimal);
  EXPECT_NEAR(s.primal_obj, 1.0, 1e-6);
  EXPECT_GE(s.min_psd_eig, -1e-7);
}

TEST(Solve, MaxEigenvalueOfComplexHermitian) {
  Rng rng(4);
  for (int t = 0; t < 5; ++t) {
    const CMatrix h = hermitian_part(ginibre(5, 5, rng));
    const ConicSolution s = solve(max_eig_sdp(h));
    ASSERT_EQ(s.status, SolveStatus::Optimal);
    EXPECT_NEAR(s.primal_obj, max_eigenvalue(h), 1e-5);
  }
}

TEST(Solve, RandomLpsMatchVertexEnumeration) {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const ConicProgram p = random_lp(rng, 5, 2);
    const double exact = lp_vertex_enumeration_check(p);
    const ConicSolution s = solve(p);
    ASSERT_EQ(s.status, SolveStatus::Optimal);
    EXPECT_NEAR(s.primal_obj, exact, 1e-6 * (1.0 + std::abs(exact)));
    EXPECT_GE(s.primal_obj, s.dual_obj - 1e-6);
  }
}

TEST(Solve, InvariantsOnOptimal) {
  Rng rng(6);
  const ConicProgram p = random_lp(rng, 8, 3);
  const ConicSolution s = solve(p);
  ASSERT_EQ(s.status, SolveStatus::Optimal);
  EXPECT_LE(s.gap, 1e-7);
  EXPECT_LE(s.primal_res, 1e-7);
  EXPECT_GE(s.x.minCoeff(), 0.0);
  EXPECT_GE(s.z.minCoeff(), 0.0);
}

TEST(Solve, ScalingInvariance) {
  const ConicSolution a = solve(shifted_lp(1.0));
  const ConicSolution b = solve(shifted_lp(10.0));
  EXPECT_EQ(a.status, b.status);
  // scaling b scales x, scaling c scales the cost: the optimum scales by 10 * 10
  EXPECT_NEAR(b.primal_obj, 100.0 * a.primal_obj, 1e-6 * std::abs(b.primal_obj));
}

TEST(Solve, Deterministic) {
  const ConicProgram p = max_eig_sdp(pauli::Y() + 0.3 * pauli::Z());
  const ConicSolution a = solve(p), b = solve(p);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(a.primal_obj, b.primal_obj);
  EXPECT_EQ(a.dual_obj, b.dual_obj);
}

TEST(Solve, DetectsInfeasible) {
  // x = -1 with x >= 0
  ConicProgram p;
  p.add_block(ConeKind::NonNeg, 1);
  p.add_coef(p.add_row(-1.0), 0, 1.0);
  EXPECT_EQ(solve(p).status, SolveStatus::Infeasible);
  // conflicting duplicate rows are caught in presolve
  ConicProgram q;
  q.add_block(ConeKind::Free, 1);
  q.add_coef(q.add_row(1.0), 0, 1.0);
  q.add_coef(q.add_row(2.0), 0, 1.0);
  EXPECT_EQ(solve(q).status, SolveStatus::Infeasible);
}

TEST(Solve, DetectsUnbounded) {
  // min x, x free, no constraints other than x - y = 0 with y free
  ConicProgram p;
  p.add_block(ConeKind::Free, 2);
  const int r = p.add_row(0.0);
  p.add_coef(r, 0, 1.0);
  p.add_coef(r, 1, -1.0);
  p.set_cost(0, 1.0);
  EXPECT_EQ(solve(p).status, SolveStatus::Unbounded);
}

TEST(Solve, PresolveDropsDuplicateRows) {
  ConicProgram p = shifted_lp();
  const int r = p.add_row(3.0);
  p.add_coef(r, 0, 1.0);
  p.add_coef(r, 1, -1.0);
  p.add_row(0.0);  // zero row
  const ConicSolution s = solve(p);
  ASSERT_EQ(s.status, SolveStatus::Optimal);
  EXPECT_NEAR(s.primal_obj, 3.0, 1e-6);
  ASSERT_EQ(s.y.size(), 3);
}

TEST(Solve, RejectsNaN) {
  ConicProgram p = shifted_lp();
  p.set_cost(0, std::nan(""));
  EXPECT_THROW(solve(p), DomainError);
  ConicProgram q = shifted_lp();
  q.add_coef(5, 0, 1.0);
  EXPECT_THROW(solve(q), DimensionError);
}

TEST(VertexEnumeration, Limits) {
  ConicProgram p;
  p.add_block(ConeKind::NonNeg, 13);
  EXPECT_THROW(lp_vertex_enumeration_check(p), DomainError);
  ConicProgram q;
  q.add_block(ConeKind::Psd, 2);
  EXPECT_THROW(lp_vertex_enumeration_check(q), DomainError);
}

TEST(ProgramText, RoundTrip) {
  const ConicProgram p = max_eig_sdp(pauli::Y() + 0.3 * pauli::Z());
  std::stringstream ss;
  p.dump(ss);
  const ConicProgram q = ConicProgram::load(ss);
  ASSERT_EQ(q.num_vars(), p.num_vars());
  ASSERT_EQ(q.num_rows(), p.num_rows());
  EXPECT_TRUE((q.c().array() == p.c().array()).all());
  EXPECT_TRUE((q.b().array() == p.b().array()).all());
  EXPECT_EQ((RMatrix(q.a_matrix()) - RMatrix(p.a_matrix())).cwiseAbs().maxCoeff(), 0.0);
  std::stringstream bad("wernerq-conic 2\n");
  EXPECT_THROW(ConicProgram::load(bad), Error);
}
