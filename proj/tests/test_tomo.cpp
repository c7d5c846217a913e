#include <gtest/gtest.h>

#include <algorithm>

#include "wernerq/certify.hpp"
#include "wernerq/filterops.hpp"
#include "wernerq/tomo.hpp"

using namespace wernerq;

namespace {

double fidelity(const MleResult& r, const DensityMatrix& target) {
  return uhlmann_fidelity(r.matrix, target.matrix());
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

TEST(Frames, QutritVectors) {
  const LocalFrame f = qutrit_bases();
  ASSERT_EQ(f.size(), 9);
  EXPECT_EQ(f.labels.front(), "M1");
  EXPECT_EQ(f.labels.back(), "M9");
  EXPECT_LT((f.vectors[0] - ket(3, 0)).norm(), 1e-15);
  CVector m5(3);
  m5 << 1, cplx(0, 1), 0;
  EXPECT_LT((f.vectors[4] - m5 / std::sqrt(2.0)).norm(), 1e-15);
  CVector m8(3);
  m8 << 0, 1, 1;
  EXPECT_LT((f.vectors[7] - m8 / std::sqrt(2.0)).norm(), 1e-15);
  for (const CVector& v : f.vectors) EXPECT_NEAR(v.norm(), 1.0, 1e-15);
}

TEST(Frames, Ranks) {
  EXPECT_EQ(frame_rank(qutrit_bases()), 81);
  EXPECT_EQ(frame_rank(qubit_frame()), 16);
  LocalFrame partial = qutrit_bases();
  partial.vectors.resize(8);
  EXPECT_LT(frame_rank(partial), 81);
}

TEST(Simulation, ExpectedCounts) {
  const DensityMatrix zero = DensityMatrix::pure(ket(9, 0), 3, 3);
  const std::vector<double> e = expected_counts(zero, 1000.0);
  EXPECT_NEAR(e[0], 1000.0, 1e-9);      // (M1, M1)
  EXPECT_NEAR(e[1 * 9 + 0], 0.0, 1e-12);  // (M2, M1)
  EXPECT_NEAR(expected_counts(werner(3, 0.0), 1000.0)[0], 0.0, 1e-12);
}

TEST(Simulation, SeededAndPoisson) {
  const DensityMatrix w = werner(3, 0.3);
  const CountsRecord a = simulate_counts(w, 10000, 42), b = simulate_counts(w, 10000, 42);
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_NE(a.counts, simulate_counts(w, 10000, 43).counts);
  EXPECT_EQ(simulate_counts(werner(3, 0.0), 10000, 1).at(0, 0), 0);
  // total counts within 5 sigma of the expectation
  double mean = 0.0;
  for (double e : expected_counts(w, 10000.0)) mean += e;
  double total = 0.0;
  for (auto n : a.counts) total += static_cast<double>(n);
  EXPECT_LT(std::abs(total - mean), 5.0 * std::sqrt(mean));
  EXPECT_THROW(simulate_counts(w, 0, 1), DomainError);
  EXPECT_THROW(simulate_counts(rotated_filtered_state(0.1), 100, 1), DimensionError);
}

TEST(Mle, NoiselessCountsRecoverTheState) {
  const DensityMatrix w = werner(3, 0.3);
  const MleResult r = mle_reconstruct(expected_counts(w, 1e6), qutrit_bases());
  EXPECT_GE(fidelity(r, w), 0.9999);
  EXPECT_TRUE(r.converged);
}

TEST(Mle, LikelihoodMonotoneTracePsd) {
  const MleResult r = mle_reconstruct(simulate_counts(werner(3, 0.2), 5000, 3));
  ASSERT_GE(r.log_likelihood.size(), 2u);
  for (std::size_t i = 1; i < r.log_likelihood.size(); ++i)
    EXPECT_GE(r.log_likelihood[i], r.log_likelihood[i - 1]);
  EXPECT_NEAR(r.matrix.trace().real(), 1.0, 1e-12);
  EXPECT_GE(min_eigenvalue(r.matrix), -1e-14);
  EXPECT_LT(hermiticity_defect(r.matrix), 1e-15);
}

TEST(Mle, ReconstructionIsAFixedPoint) {
  const DensityMatrix first = mle_state(simulate_counts(werner(3, 0.1), 20000, 4));
  // reconstructions sit near the PSD boundary, where R rho R converges slowly
  const MleResult again =
      mle_reconstruct(expected_counts(first, 1e6), qutrit_bases(), MleOptions{50000, 1e-14});
  EXPECT_GE(fidelity(again, first), 0.9999);
}

TEST(Mle, StatisticalErrorShrinksWithShots) {
  // At N = 1e4 the median fidelity over 20 seeds is about 0.984; the
  // acceptance check reports it against the 0.99 target. Here: the error is
  // statistical, shrinking with N, and matches linear inversion.
  const DensityMatrix w = werner(3, 0.3);
  std::vector<double> f4, f5;
  for (int s = 0; s < 20; ++s) {
    f4.push_back(fidelity(mle_reconstruct(simulate_counts(w, 10000, s)), w));
    f5.push_back(fidelity(mle_reconstruct(simulate_counts(w, 100000, s)), w));
  }
  EXPECT_GT(median(f5), median(f4));
  EXPECT_GE(median(f5), 0.998);
  EXPECT_GE(median(f4), 0.97);

  const LocalFrame frame = qutrit_bases();
  RMatrix design(81, 81);
  int k = 0;
  for (const CVector& a : frame.vectors)
    for (const CVector& b : frame.vectors) design.row(k++) = herm_to_vec(projector(kron(a, b)));
  const CountsRecord c = simulate_counts(w, 10000, 0);
  RVector y(81);
  for (int i = 0; i < 81; ++i) y(i) = static_cast<double>(c.counts[i]) / 10000.0;
  CMatrix lin = vec_to_herm(RVector(design.colPivHouseholderQr().solve(y)), 9);
  lin /= lin.trace().real();
  ASSERT_GT(min_eigenvalue(lin), 0.0);
  EXPECT_NEAR(fidelity(mle_reconstruct(c), w), uhlmann_fidelity(lin, w.matrix()), 1e-3);
}

TEST(Mle, QubitFrameEngine) {
  const DensityMatrix f = rotated_filtered_state(0.2);
  const MleResult r = mle_reconstruct(expected_counts(f, 1e6, qubit_frame()), qubit_frame());
  EXPECT_GE(fidelity(r, f), 0.9999);
}

TEST(Mle, Errors) {
  EXPECT_THROW(mle_reconstruct(std::vector<double>(81, 0.0), qutrit_bases()), DomainError);
  EXPECT_THROW(mle_reconstruct(std::vector<double>(80, 1.0), qutrit_bases()), DimensionError);
  std::vector<double> neg(81, 1.0);
  neg[3] = -1.0;
  EXPECT_THROW(mle_reconstruct(neg, qutrit_bases()), DomainError);
}

TEST(Bootstrap, ShrinksWithShots) {
  const DensityMatrix w = werner(3, 0.3);
  auto fid = [&](const DensityMatrix& r) { return uhlmann_fidelity(r, w); };
  const BootstrapStats lo = bootstrap_error(simulate_counts(w, 10000, 5), fid, 10, 6);
  const BootstrapStats hi = bootstrap_error(simulate_counts(w, 1000000, 5), fid, 10, 6);
  EXPECT_LT(hi.stddev, lo.stddev);
  EXPECT_EQ(lo.samples.size(), 10u);
  const BootstrapStats again = bootstrap_error(simulate_counts(w, 10000, 5), fid, 10, 6);
  EXPECT_EQ(lo.samples, again.samples);
  EXPECT_THROW(bootstrap_error(simulate_counts(w, 100, 5), fid, 9), DomainError);
}

TEST(Bootstrap, ExperimentLikeErrorBars) {
  const DensityMatrix filt = noisy_surrogate(rotated_filtered_state(0.0), {0.06, 0.02, 5});
  const BootstrapStats chsh =
      bootstrap_error(simulate_counts(filt, 10000, 7, qubit_frame()),
                      [](const DensityMatrix& r) { return chsh_horodecki(r).value; }, 20, 3);
  EXPECT_GT(chsh.mean, 2.6);
  EXPECT_GT(chsh.stddev, 0.002);
  EXPECT_LT(chsh.stddev, 0.06);

  const DensityMatrix ideal = werner(3, 0.0);
  const DensityMatrix sur = surrogate_for_fidelity(ideal, 0.96, 1.0, 9);
  const BootstrapStats fid =
      bootstrap_error(simulate_counts(sur, 10000, 7),
                      [&](const DensityMatrix& r) { return uhlmann_fidelity(r, ideal); }, 10, 3);
  EXPECT_GT(fid.stddev, 0.0005);
  EXPECT_LT(fid.stddev, 0.02);
}

TEST(Surrogates, FidelityBandAfterTomography) {
  for (double target : {0.958, 0.995}) {
    const DensityMatrix ideal = werner(3, 0.2);
    const DensityMatrix sur = surrogate_for_fidelity(ideal, target, 1.0, 11);
    const DensityMatrix rec = mle_state(simulate_counts(sur, 1000000, 12));
    const double f = uhlmann_fidelity(rec, ideal);
    EXPECT_GE(f, 0.958 - 0.005);
    EXPECT_LE(f, 0.995 + 0.005);
  }
}
