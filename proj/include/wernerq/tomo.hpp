#pragma once

// Simulated product-basis coincidence counts and iterative maximum-likelihood
// reconstruction.
//
// Setting (i, j) projects onto |f_i> (x) |f_j> for a local frame {f_i}. The
// frame projectors do not sum to the identity, so counts are modeled as
// Poisson with an unknown common flux; maximizing over the flux leaves the
// likelihood sum_k n_k ln(p_k / sum_l p_l). With G = sum_k Pi_k, the map
// rho -> G^{1/2} rho G^{1/2} / tr(G rho) turns this into the standard
// likelihood of the normalized POVM G^{-1/2} Pi_k G^{-1/2}, on which the
// R rho R iteration runs.

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "wernerq/qmat.hpp"
#include "wernerq/solver.hpp"
#include "wernerq/states.hpp"

namespace wernerq {

struct LocalFrame {
  std::vector<CVector> vectors;
  std::vector<std::string> labels;

  int dim() const { return static_cast<int>(vectors.at(0).size()); }
  int size() const { return static_cast<int>(vectors.size()); }
};

/// M1..M9: |0>, |1>, |2>, then (|j> + |k>)/sqrt2 and (|j> + i|k>)/sqrt2 for
/// (j, k) = (0, 1), (0, 2), (1, 2).
inline LocalFrame qutrit_bases() {
  const double s = 1.0 / std::sqrt(2.0);
  const cplx i(0, 1);
  LocalFrame f;
  for (int k = 0; k < 3; ++k) f.vectors.push_back(ket(3, k));
  for (auto [j, k] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
    f.vectors.push_back(s * (ket(3, j) + ket(3, k)));
    f.vectors.push_back(s * (ket(3, j) + i * ket(3, k)));
  }
  for (int k = 1; k <= 9; ++k) f.labels.push_back("M" + std::to_string(k));
  return f;
}

/// Six polarization-analysis states on a qubit: H, V, D, A, R, L.
inline LocalFrame qubit_frame() {
  const double s = 1.0 / std::sqrt(2.0);
  const cplx i(0, 1);
  const CVector h = ket(2, 0), v = ket(2, 1);
  return {{h, v, s * (h + v), s * (h - v), s * (h + i * v), s * (h - i * v)},
          {"H", "V", "D", "A", "R", "L"}};
}

/// Rank of the product-frame projectors as linear functionals on Hermitian
/// operators of the two-party space.
inline int frame_rank(const LocalFrame& f) {
  const int d = f.dim(), n = f.size(), dd = d * d;
  RMatrix design(n * n, dd * dd);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      design.row(i * n + j) = herm_to_vec(projector(kron(f.vectors[i], f.vectors[j])));
    }
  Eigen::ColPivHouseholderQR<RMatrix> qr(design);
  qr.setThreshold(1e-10);
  return static_cast<int>(qr.rank());
}

/// counts[i * n + j] for setting (f_i, f_j).
struct CountsRecord {
  LocalFrame frame;
  std::vector<std::int64_t> counts;
  std::int64_t shots = 0;  // mean count of a unit-probability setting
  std::uint64_t seed = 0;
  std::string state_tag;

  int settings() const { return frame.size(); }
  std::int64_t at(int i, int j) const { return counts[i * settings() + j]; }
};

namespace detail {

inline std::vector<CMatrix> product_projectors(const LocalFrame& f) {
  std::vector<CMatrix> out;
  for (const CVector& a : f.vectors)
    for (const CVector& b : f.vectors) out.push_back(projector(kron(a, b)));
  return out;
}

inline void check_frame_state(const LocalFrame& f, const DensityMatrix& rho, const char* who) {
  if (rho.dim_a() != f.dim() || rho.dim_b() != f.dim())
    throw DimensionError(std::string(who) + ": state does not match the frame dimension");
}

}  // namespace detail

/// Noiseless expected counts N <f_i f_j| rho |f_i f_j>.
inline std::vector<double> expected_counts(const DensityMatrix& rho, double shots,
                                           const LocalFrame& frame = qutrit_bases()) {
  detail::check_frame_state(frame, rho, "expected_counts");
  std::vector<double> out;
  for (const CVector& a : frame.vectors)
    for (const CVector& b : frame.vectors) {
      const CVector psi = kron(a, b);
      out.push_back(std::max(0.0, shots * (psi.adjoint() * rho.matrix() * psi)(0, 0).real()));
    }
  return out;
}

/// Poisson counts, drawn row-major from one generator seeded with `seed`.
inline CountsRecord simulate_counts(const DensityMatrix& rho, std::int64_t shots,
                                    std::uint64_t seed, const LocalFrame& frame = qutrit_bases(),
                                    std::string state_tag = "") {
  if (shots <= 0) throw DomainError("simulate_counts: shots must be positive");
  CountsRecord rec{frame, {}, shots, seed, std::move(state_tag)};
  Rng rng(seed);
  for (double mean : expected_counts(rho, static_cast<double>(shots), frame)) {
    if (mean <= 0.0) {
      rec.counts.push_back(0);
      continue;
    }
    std::poisson_distribution<std::int64_t> pois(mean);
    rec.counts.push_back(pois(rng));
  }
  return rec;
}

/// Counts resampled as Poisson around the observed ones.
inline CountsRecord resample_counts(const CountsRecord& c, std::uint64_t seed) {
  CountsRecord out = c;
  out.seed = seed;
  Rng rng(seed);
  for (std::int64_t& n : out.counts) {
    if (n <= 0) continue;
    std::poisson_distribution<std::int64_t> pois(static_cast<double>(n));
    n = pois(rng);
  }
  return out;
}

struct MleOptions {
  int max_iter = 5000;
  double tol = 1e-10;  // relative likelihood gain
};

struct MleResult {
  CMatrix matrix;                      // unit trace, PSD
  std::vector<double> log_likelihood;  // per accepted iterate, nondecreasing
  int iterations = 0;
  bool converged = false;
};

/// Maximum-likelihood state for (possibly non-integer) counts on the product
/// frame. Each step applies R^g rho R^g with g = 1 (plain R rho R), doubling
/// g while the likelihood keeps rising; if the plain step loses likelihood it
/// falls back to (I + e R) rho (I + e R) with halving dilution e. Stops when
/// the relative gain falls below tol.
inline MleResult mle_reconstruct(const std::vector<double>& counts, const LocalFrame& frame,
                                 const MleOptions& opts = {}) {
  const int n = frame.size(), d = frame.dim(), dim = d * d;
  if (static_cast<int>(counts.size()) != n * n)
    throw DimensionError("mle_reconstruct: counts table does not match the frame");
  double total = 0.0;
  for (double c : counts) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("mle_reconstruct: invalid count");
    total += c;
  }
  if (total <= 0.0) throw DomainError("mle_reconstruct: all counts are zero");

  const std::vector<CMatrix> proj = detail::product_projectors(frame);
  CMatrix g = CMatrix::Zero(dim, dim);
  for (const CMatrix& p : proj) g += p;
  const EigDecomposition ge = herm_eig(g);
  if (ge.values(0) < 1e-12) throw DomainError("mle_reconstruct: frame is not informationally complete");
  const CMatrix g_inv_half =
      ge.vectors * ge.values.cwiseSqrt().cwiseInverse().asDiagonal() * ge.vectors.adjoint();
  std::vector<CMatrix> povm;
  for (const CMatrix& p : proj) povm.push_back(g_inv_half * p * g_inv_half);

  std::vector<double> freq(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) freq[k] = counts[k] / total;

  auto probabilities = [&](const CMatrix& s) {
    std::vector<double> p(povm.size());
    for (std::size_t k = 0; k < povm.size(); ++k)
      p[k] = (povm[k].cwiseProduct(s.transpose())).sum().real();
    return p;
  };
  auto likelihood = [&](const std::vector<double>& p) {
    double l = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k)
      if (freq[k] > 0.0) l += freq[k] * (p[k] > 0.0 ? std::log(p[k]) : -1e300);
    return l;
  };
  auto congruence = [](const CMatrix& a, const CMatrix& s) {
    CMatrix out = hermitian_part(a * s * a.adjoint());
    return CMatrix(out / out.trace().real());
  };

  MleResult res;
  CMatrix sigma = CMatrix::Identity(dim, dim) / static_cast<double>(dim);
  std::vector<double> p = probabilities(sigma);
  double lik = likelihood(p);
  res.log_likelihood.push_back(lik);
  const CMatrix id = CMatrix::Identity(dim, dim);
  for (int it = 0; it < opts.max_iter; ++it) {
    CMatrix r = CMatrix::Zero(dim, dim);
    for (std::size_t k = 0; k < povm.size(); ++k)
      if (freq[k] > 0.0) r += (freq[k] / p[k]) * povm[k];
    bool accepted = false;
    CMatrix next;
    std::vector<double> np;
    double nl = lik;
    auto attempt = [&](const CMatrix& a) {
      CMatrix cand = congruence(a, sigma);
      std::vector<double> cp = probabilities(cand);
      const double cl = likelihood(cp);
      if (cl < nl || (!accepted && cl < lik)) return false;
      next = std::move(cand);
      np = std::move(cp);
      nl = cl;
      accepted = true;
      return true;
    };
    // Plain step, then extrapolate with powers of R while it keeps paying off;
    // R is PSD, so every candidate is a congruence of sigma.
    if (attempt(r)) {
      const EigDecomposition re = herm_eig(r);
      for (double gamma = 2.0; gamma <= 64.0; gamma *= 2.0) {
        const RVector pw = re.values.cwiseMax(0.0).array().pow(gamma).matrix();
        if (!attempt(CMatrix(re.vectors * pw.asDiagonal() * re.vectors.adjoint()))) break;
      }
    } else {
      for (double eps = 1.0; eps > 1e-8 && !accepted; eps /= 2) attempt(CMatrix(id + eps * r));
    }
    if (!accepted) {
      res.converged = true;
      break;
    }
    if (nl < lik) throw std::logic_error("mle_reconstruct: likelihood decreased");
    const double gain = nl - lik;
    sigma = next;
    p = std::move(np);
    lik = nl;
    res.log_likelihood.push_back(lik);
    res.iterations = it + 1;
    if (gain <= opts.tol * std::max(1.0, std::abs(lik))) {
      res.converged = true;
      break;
    }
  }
  res.matrix = congruence(g_inv_half, sigma);
  return res;
}

inline MleResult mle_reconstruct(const CountsRecord& c, const MleOptions& opts = {}) {
  std::vector<double> counts(c.counts.begin(), c.counts.end());
  return mle_reconstruct(counts, c.frame, opts);
}

inline DensityMatrix mle_state(const CountsRecord& c, const MleOptions& opts = {}) {
  return DensityMatrix::normalized(mle_reconstruct(c, opts).matrix, c.frame.dim(), c.frame.dim());
}

struct BootstrapStats {
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<double> samples;
};

/// Mean and sample standard deviation of f over B Poisson resamples of the
/// counts, each reconstructed by MLE. Resample b uses seed ^ b.
inline BootstrapStats bootstrap_error(const CountsRecord& c,
                                      const std::function<double(const DensityMatrix&)>& f, int b,
                                      std::uint64_t seed = 0, const MleOptions& opts = {}) {
  if (b < 10) throw DomainError("bootstrap_error: need at least 10 resamples");
  BootstrapStats s;
  for (int i = 0; i < b; ++i)
    s.samples.push_back(f(mle_state(resample_counts(c, seed ^ static_cast<std::uint64_t>(i)), opts)));
  for (double x : s.samples) s.mean += x / b;
  double var = 0.0;
  for (double x : s.samples) var += (x - s.mean) * (x - s.mean);
  s.stddev = std::sqrt(var / (b - 1));
  return s;
}

}  // namespace wernerq
