#pragma once

// Assemblages, steering robustness, Bell correlations, nonlocal content and
// see-saw lower bounds.
//
// Deterministic strategies lambda = (lambda_0, ..., lambda_{n_s - 1}) are
// enumerated lexicographically with lambda_0 most significant; D(a|x, lambda)
// is 1 iff lambda_x = a.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "wernerq/qmat.hpp"
#include "wernerq/solver.hpp"
#include "wernerq/states.hpp"

namespace wernerq {

inline constexpr int kMaxSteeringStrategies = 4096;
inline constexpr long long kMaxBellVertices = 1000000;

// --- measurements and assemblages ---------------------------------------------------

/// effects[x][a] = M_{a|x}.
struct MeasurementSet {
  int n_settings = 0;
  int n_outcomes = 0;
  std::vector<std::vector<CMatrix>> effects;

  int dim() const { return static_cast<int>(effects.at(0).at(0).rows()); }
  const CMatrix& effect(int a, int x) const { return effects[x][a]; }

  void validate() const {
    if (n_settings < 1 || n_outcomes < 1) throw DomainError("MeasurementSet: empty scenario");
    if (static_cast<int>(effects.size()) != n_settings)
      throw DimensionError("MeasurementSet: setting count mismatch");
    const int d = dim();
    for (const auto& setting : effects) {
      if (static_cast<int>(setting.size()) != n_outcomes)
        throw DimensionError("MeasurementSet: outcome count mismatch");
      CMatrix sum = CMatrix::Zero(d, d);
      for (const CMatrix& m : setting) {
        if (m.rows() != d || m.cols() != d) throw DimensionError("MeasurementSet: effect size");
        if (hermiticity_defect(m) > 1e-9 || min_eigenvalue(hermitian_part(m)) < -1e-9)
          throw DomainError("MeasurementSet: effect is not PSD");
        sum += m;
      }
      if ((sum - CMatrix::Identity(d, d)).norm() > 1e-9)
        throw DomainError("MeasurementSet: effects do not sum to identity");
    }
  }
};

/// One projective measurement per basis; outcome a is column a.
inline MeasurementSet projective_measurements(const std::vector<CMatrix>& bases) {
  if (bases.empty()) throw DomainError("projective_measurements: no bases");
  MeasurementSet m;
  m.n_settings = static_cast<int>(bases.size());
  m.n_outcomes = static_cast<int>(bases[0].cols());
  for (const CMatrix& u : bases) {
    if (!is_unitary(u, 1e-9)) throw DomainError("projective_measurements: basis not unitary");
    std::vector<CMatrix> setting;
    for (int a = 0; a < u.cols(); ++a) setting.push_back(projector(u.col(a)));
    m.effects.push_back(std::move(setting));
  }
  m.validate();
  return m;
}

/// Haar-rotated computational bases.
inline MeasurementSet random_projective_measurements(int d, int n_settings, Rng& rng) {
  std::vector<CMatrix> bases;
  for (int x = 0; x < n_settings; ++x) bases.push_back(haar_unitary(d, rng));
  return projective_measurements(bases);
}

/// sigma[x][a] = rho_{a|x}, unnormalized conditional states of the steered side.
struct Assemblage {
  int n_settings = 0;
  int n_outcomes = 0;
  std::vector<std::vector<CMatrix>> sigma;

  int dim() const { return static_cast<int>(sigma.at(0).at(0).rows()); }
  const CMatrix& at(int a, int x) const { return sigma[x][a]; }

  CMatrix reduced(int x = 0) const {
    CMatrix s = CMatrix::Zero(dim(), dim());
    for (const CMatrix& m : sigma[x]) s += m;
    return s;
  }

  void validate() const {
    if (n_settings < 1 || n_outcomes < 1) throw DomainError("Assemblage: empty scenario");
    if (static_cast<int>(sigma.size()) != n_settings)
      throw DimensionError("Assemblage: setting count mismatch");
    for (const auto& setting : sigma) {
      if (static_cast<int>(setting.size()) != n_outcomes)
        throw DimensionError("Assemblage: outcome count mismatch");
      for (const CMatrix& m : setting)
        if (m.rows() != dim() || hermiticity_defect(m) > 1e-9 ||
            min_eigenvalue(hermitian_part(m)) < -1e-9)
          throw DomainError("Assemblage: conditional state is not PSD");
    }
    const CMatrix r0 = reduced(0);
    if (std::abs(r0.trace().real() - 1.0) > 1e-9) throw DomainError("Assemblage: trace != 1");
    for (int x = 1; x < n_settings; ++x)
      if ((reduced(x) - r0).norm() > 1e-8) throw DomainError("Assemblage: signaling");
  }
};

namespace detail {

/// tr_measured[(M (x) I) rho] for side A, or tr_measured[(I (x) M) rho] for B.
inline CMatrix conditional_state(const DensityMatrix& rho, const CMatrix& m, Side measured) {
  const CMatrix op = measured == Side::A ? kron(m, CMatrix::Identity(rho.dim_b(), rho.dim_b()))
                                         : kron(CMatrix::Identity(rho.dim_a(), rho.dim_a()), m);
  return hermitian_part(partial_trace(op * rho.matrix(), rho.shape(),
                                      {measured == Side::A ? 1 : 0}));
}

/// tr_other[(I (x) F) rho] on the measured side, so that
/// tr(F rho_{a|x}) = tr(M_{a|x} Omega).
inline CMatrix pulled_back(const DensityMatrix& rho, const CMatrix& f, Side measured) {
  return conditional_state(rho, f, other(measured));
}

}  // namespace detail

/// Conditional states on the other side when `steering_side` measures.
inline Assemblage assemblage_from(const DensityMatrix& rho, const MeasurementSet& meas,
                                  Side steering_side = Side::A) {
  meas.validate();
  if (meas.dim() != rho.dim(steering_side))
    throw DimensionError("assemblage_from: measurement dimension mismatch");
  Assemblage out;
  out.n_settings = meas.n_settings;
  out.n_outcomes = meas.n_outcomes;
  for (int x = 0; x < meas.n_settings; ++x) {
    std::vector<CMatrix> setting;
    for (int a = 0; a < meas.n_outcomes; ++a)
      setting.push_back(detail::conditional_state(rho, meas.effect(a, x), steering_side));
    out.sigma.push_back(std::move(setting));
  }
  return out;
}

// --- steering robustness ----------------------------------------------------------------

/// Lexicographic deterministic strategies; entry [lambda][x] is the outcome.
inline std::vector<std::vector<int>> deterministic_strategies(int n_settings, int n_outcomes,
                                                              long long limit) {
  long long count = 1;
  for (int x = 0; x < n_settings; ++x) {
    count *= n_outcomes;
    if (count > limit) throw DomainError("deterministic_strategies: strategy space too large");
  }
  std::vector<std::vector<int>> out(count, std::vector<int>(n_settings));
  for (long long l = 0; l < count; ++l)
    for (long long x = n_settings - 1, rem = l; x >= 0; --x, rem /= n_outcomes)
      out[l][x] = static_cast<int>(rem % n_outcomes);
  return out;
}

struct SteeringResult {
  double robustness = 0.0;  // max(0, sum_lambda tr sigma_lambda - 1)
  double raw_objective = 0.0;
  double gap = 0.0;
  SolveStatus status = SolveStatus::MaxIter;
  /// dual[x][a] = F_{a|x}: PSD, I - sum D(a|x, lambda) F_{a|x} PSD for every
  /// lambda, and SR + 1 = sum tr(F_{a|x} rho_{a|x}).
  std::vector<std::vector<CMatrix>> dual;
};

/// min sum_lambda tr sigma_lambda - 1 s.t. sum_lambda D(a|x, lambda) sigma_lambda
/// - S_{a|x} = rho_{a|x}, sigma_lambda, S_{a|x} PSD. Rows are the Hermitian
/// coordinates of each matrix equation, so the multipliers are the F_{a|x}.
inline SteeringResult steering_robustness_sdp(const Assemblage& asm_, SolverOptions opts = {}) {
  asm_.validate();
  const int n = asm_.dim(), ns = asm_.n_settings, no = asm_.n_outcomes;
  const auto lambdas = deterministic_strategies(ns, no, kMaxSteeringStrategies);
  ConicProgram prog;
  std::vector<int> sig_blocks, slack_blocks;
  for (std::size_t l = 0; l < lambdas.size(); ++l) {
    sig_blocks.push_back(prog.add_block(ConeKind::Psd, n));
    prog.add_trace_cost(sig_blocks.back(), 1.0);
  }
  for (int i = 0; i < ns * no; ++i) slack_blocks.push_back(prog.add_block(ConeKind::Psd, n));
  for (int x = 0; x < ns; ++x)
    for (int a = 0; a < no; ++a) {
      const RVector rhs = herm_to_vec(asm_.at(a, x));
      const ConeBlock& s = prog.block(slack_blocks[x * no + a]);
      for (int k = 0; k < n * n; ++k) {
        const int row = prog.add_row(rhs(k));
        for (std::size_t l = 0; l < lambdas.size(); ++l)
          if (lambdas[l][x] == a) prog.add_coef(row, prog.block(sig_blocks[l]).offset + k, 1.0);
        prog.add_coef(row, s.offset + k, -1.0);
      }
    }
  if (opts.tol > 1e-9) opts.tol = 1e-9;
  const ConicSolution sol = solve(prog, opts);
  SteeringResult r;
  r.raw_objective = sol.primal_obj - 1.0;
  r.robustness = std::max(0.0, r.raw_objective);
  r.gap = std::abs(sol.primal_obj - sol.dual_obj);
  r.status = sol.status;
  r.dual.assign(ns, std::vector<CMatrix>(no));
  for (int x = 0; x < ns; ++x)
    for (int a = 0; a < no; ++a) r.dual[x][a] = prog.psd_value(sol.z, slack_blocks[x * no + a]);
  return r;
}

inline double steering_robustness(const Assemblage& a, const SolverOptions& opts = {}) {
  return steering_robustness_sdp(a, opts).robustness;
}

namespace detail {

/// One ascent step set for projective rank-one measurements maximizing
/// sum_a <e_a| Omega_a |e_a> with every Omega_a PSD: the objective is convex,
/// so the polar factor of the gradient never decreases it.
inline CMatrix polar_basis_ascent(const std::vector<CMatrix>& omega, CMatrix u,
                                  int max_steps = 100) {
  auto value = [&](const CMatrix& b) {
    double s = 0.0;
    for (std::size_t a = 0; a < omega.size(); ++a)
      s += (b.col(a).adjoint() * omega[a] * b.col(a))(0, 0).real();
    return s;
  };
  double val = value(u);
  for (int it = 0; it < max_steps; ++it) {
    CMatrix g(u.rows(), u.cols());
    for (std::size_t a = 0; a < omega.size(); ++a) g.col(a) = omega[a] * u.col(a);
    const CMatrix next = polar_unitary(g);
    const double nv = value(next);
    if (nv < val + 1e-13) break;
    u = next;
    val = nv;
  }
  return u;
}

/// Shift every operator by the same multiple of I so all are PSD. Adds a
/// constant to any sum over a complete measurement.
inline std::vector<CMatrix> shifted_psd(std::vector<CMatrix> ops) {
  double lo = 0.0;
  for (const CMatrix& o : ops) lo = std::min(lo, min_eigenvalue(o));
  for (CMatrix& o : ops) o -= lo * CMatrix::Identity(o.rows(), o.cols());
  return ops;
}

}  // namespace detail

struct SeesawBound {
  double value = 0.0;
  double gap = 0.0;  // duality gap of the SDP that produced value
  std::vector<double> per_restart;
  MeasurementSet best_measurements;
};

/// Lower bound on the steering robustness of rho over projective measurements
/// with n_outcomes = dim of the steering side. Each restart alternates the SDP
/// at fixed measurements with a polar ascent of sum tr(F_{a|x} rho_{a|x}) at
/// fixed dual; the dual stays feasible, so the SDP value never decreases up
/// to solver tolerance. Restart r uses seed ^ r.
inline SeesawBound sr_state_lower_bound(const DensityMatrix& rho, int n_settings, int n_outcomes,
                                        int restarts = 200, std::uint64_t seed = 0,
                                        Side steering_side = Side::A, int max_iter = 200,
                                        const SolverOptions& opts = {}) {
  const int d = rho.dim(steering_side);
  if (n_outcomes != d)
    throw DomainError("sr_state_lower_bound: projective measurements need n_outcomes == dim");
  if (restarts < 1) throw DomainError("sr_state_lower_bound: restarts must be >= 1");
  deterministic_strategies(n_settings, n_outcomes, kMaxSteeringStrategies);
  SeesawBound out;
  out.value = -1.0;
  for (int r = 0; r < restarts; ++r) {
    Rng rng(seed ^ static_cast<std::uint64_t>(r));
    std::vector<CMatrix> bases;
    for (int x = 0; x < n_settings; ++x) bases.push_back(haar_unitary(d, rng));
    double best = -1.0, best_gap = 0.0;
    MeasurementSet best_m;
    for (int it = 0; it < max_iter; ++it) {
      const MeasurementSet m = projective_measurements(bases);
      const SteeringResult s = steering_robustness_sdp(assemblage_from(rho, m, steering_side), opts);
      const bool improved = s.robustness > best + 1e-7;
      if (s.robustness > best) {
        best = s.robustness;
        best_gap = s.gap;
        best_m = m;
      }
      if (!improved && it > 0) break;
      for (int x = 0; x < n_settings; ++x) {
        std::vector<CMatrix> omega;
        for (int a = 0; a < n_outcomes; ++a)
          omega.push_back(detail::pulled_back(rho, s.dual[x][a], steering_side));
        bases[x] = detail::polar_basis_ascent(detail::shifted_psd(omega), bases[x]);
      }
    }
    out.per_restart.push_back(best);
    if (best > out.value) {
      out.value = best;
      out.gap = best_gap;
      out.best_measurements = best_m;
    }
  }
  return out;
}

// --- Bell scenarios ----------------------------------------------------------------------

/// P(a, b | x, y) for Alice (n_sa settings, n_oa outcomes) and Bob.
struct Correlation {
  int n_sa = 0, n_oa = 0, n_sb = 0, n_ob = 0;
  std::vector<double> p;

  Correlation() = default;
  Correlation(int sa, int oa, int sb, int ob)
      : n_sa(sa), n_oa(oa), n_sb(sb), n_ob(ob), p(static_cast<std::size_t>(sa) * oa * sb * ob) {}

  int index(int a, int b, int x, int y) const { return ((x * n_sb + y) * n_oa + a) * n_ob + b; }
  double& operator()(int a, int b, int x, int y) { return p[index(a, b, x, y)]; }
  double operator()(int a, int b, int x, int y) const { return p[index(a, b, x, y)]; }

  double marginal_a(int a, int x, int y) const {
    double s = 0.0;
    for (int b = 0; b < n_ob; ++b) s += (*this)(a, b, x, y);
    return s;
  }
  double marginal_b(int b, int x, int y) const {
    double s = 0.0;
    for (int a = 0; a < n_oa; ++a) s += (*this)(a, b, x, y);
    return s;
  }

  /// Correlator sum (-1)^(a+b) P(a, b | x, y) for binary outcomes.
  double correlator(int x, int y) const {
    double s = 0.0;
    for (int a = 0; a < n_oa; ++a)
      for (int b = 0; b < n_ob; ++b) s += ((a + b) % 2 ? -1.0 : 1.0) * (*this)(a, b, x, y);
    return s;
  }

  void validate() const {
    if (std::min({n_sa, n_oa, n_sb, n_ob}) < 1) throw DomainError("Correlation: empty scenario");
    if (p.size() != static_cast<std::size_t>(n_sa) * n_oa * n_sb * n_ob)
      throw DimensionError("Correlation: table size mismatch");
    for (double q : p)
      if (!(q >= -1e-12)) throw DomainError("Correlation: negative probability");
    for (int x = 0; x < n_sa; ++x)
      for (int y = 0; y < n_sb; ++y) {
        double s = 0.0;
        for (int a = 0; a < n_oa; ++a) s += marginal_a(a, x, y);
        if (std::abs(s - 1.0) > 1e-9) throw DomainError("Correlation: not normalized");
        for (int a = 0; a < n_oa; ++a)
          if (std::abs(marginal_a(a, x, y) - marginal_a(a, x, 0)) > 1e-8)
            throw DomainError("Correlation: signals from Bob to Alice");
        for (int b = 0; b < n_ob; ++b)
          if (std::abs(marginal_b(b, x, y) - marginal_b(b, 0, y)) > 1e-8)
            throw DomainError("Correlation: signals from Alice to Bob");
      }
  }
};

inline Correlation correlation_from(const DensityMatrix& rho, const MeasurementSet& ma,
                                    const MeasurementSet& mb) {
  ma.validate();
  mb.validate();
  if (ma.dim() != rho.dim_a() || mb.dim() != rho.dim_b())
    throw DimensionError("correlation_from: measurement dimension mismatch");
  Correlation c(ma.n_settings, ma.n_outcomes, mb.n_settings, mb.n_outcomes);
  for (int x = 0; x < ma.n_settings; ++x)
    for (int a = 0; a < ma.n_outcomes; ++a) {
      const CMatrix cond = detail::conditional_state(rho, ma.effect(a, x), Side::A);
      for (int y = 0; y < mb.n_settings; ++y)
        for (int b = 0; b < mb.n_outcomes; ++b)
          c(a, b, x, y) = std::max(0.0, (cond * mb.effect(b, y)).trace().real());
    }
  return c;
}

/// Local deterministic box: Alice answers la[x], Bob answers lb[y].
inline Correlation deterministic_box(const std::vector<int>& la, int n_oa,
                                     const std::vector<int>& lb, int n_ob) {
  Correlation c(static_cast<int>(la.size()), n_oa, static_cast<int>(lb.size()), n_ob);
  for (int x = 0; x < c.n_sa; ++x)
    for (int y = 0; y < c.n_sb; ++y) c(la[x], lb[y], x, y) = 1.0;
  return c;
}

/// P(a, b | x, y) = 1/2 iff a XOR b = x AND y.
inline Correlation pr_box() {
  Correlation c(2, 2, 2, 2);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) c(a, b, x, y) = ((a ^ b) == (x & y)) ? 0.5 : 0.0;
  return c;
}

struct NonlocalContent {
  double value = 0.0;  // minimal nonsignaling weight v
  double gap = 0.0;
  SolveStatus status = SolveStatus::MaxIter;
};

/// min v s.t. P = sum_lambda q_lambda D_lambda + N with q, N >= 0 and
/// sum q = 1 - v. N = P - L is nonsignaling whenever P is, so the
/// nonsignaling equalities on N are implied by the rows.
inline NonlocalContent nonlocal_content(const Correlation& p, SolverOptions opts = {}) {
  p.validate();
  const auto la = deterministic_strategies(p.n_sa, p.n_oa, kMaxBellVertices);
  const auto lb = deterministic_strategies(p.n_sb, p.n_ob, kMaxBellVertices);
  if (static_cast<long long>(la.size()) * static_cast<long long>(lb.size()) > kMaxBellVertices)
    throw DomainError("nonlocal_content: scenario too large");
  ConicProgram prog;
  const int nq = static_cast<int>(la.size() * lb.size());
  const int q_block = prog.add_block(ConeKind::NonNeg, nq);
  const int n_block = prog.add_block(ConeKind::NonNeg, static_cast<int>(p.p.size()));
  for (int j = 0; j < nq; ++j) prog.set_cost(prog.block(q_block).offset + j, -1.0);
  for (int x = 0; x < p.n_sa; ++x)
    for (int y = 0; y < p.n_sb; ++y)
      for (int a = 0; a < p.n_oa; ++a)
        for (int b = 0; b < p.n_ob; ++b) {
          const int row = prog.add_row(p(a, b, x, y));
          for (std::size_t i = 0; i < la.size(); ++i) {
            if (la[i][x] != a) continue;
            for (std::size_t j = 0; j < lb.size(); ++j)
              if (lb[j][y] == b)
                prog.add_coef(row, prog.block(q_block).offset + static_cast<int>(i * lb.size() + j),
                              1.0);
          }
          prog.add_coef(row, prog.block(n_block).offset + p.index(a, b, x, y), 1.0);
        }
  if (opts.tol > 1e-9) opts.tol = 1e-9;
  const ConicSolution sol = solve(prog, opts);
  NonlocalContent r;
  r.value = std::clamp(1.0 + sol.primal_obj, 0.0, 1.0);
  r.gap = std::abs(sol.primal_obj - sol.dual_obj);
  r.status = sol.status;
  return r;
}

// --- Bell functionals and see-saw ---------------------------------------------------------

/// beta(P) = sum coef(a, b, x, y) P(a, b | x, y), laid out like Correlation.
struct BellFunctional {
  Correlation coef;

  double value(const Correlation& p) const {
    if (p.p.size() != coef.p.size()) throw DimensionError("BellFunctional: scenario mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < p.p.size(); ++i) s += coef.p[i] * p.p[i];
    return s;
  }
};

/// E00 + E01 + E10 - E11.
inline BellFunctional chsh_functional() {
  BellFunctional f{Correlation(2, 2, 2, 2)};
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          f.coef(a, b, x, y) = ((a + b) % 2 ? -1.0 : 1.0) * ((x & y) ? -1.0 : 1.0);
  return f;
}

struct BellSeesaw {
  double value = 0.0;
  std::vector<double> per_restart;
  MeasurementSet alice;
  MeasurementSet bob;
};

namespace detail {

/// K_{a|x} = sum_{b,y} coef * tr_B[(I (x) M_{b|y}) rho] for Alice, and the
/// mirror image for Bob, so that beta = sum tr(M_{a|x} K_{a|x}).
inline std::vector<std::vector<CMatrix>> bell_operators(const DensityMatrix& rho,
                                                        const BellFunctional& f,
                                                        const MeasurementSet& fixed,
                                                        Side optimized) {
  const Correlation& c = f.coef;
  const int ns = optimized == Side::A ? c.n_sa : c.n_sb;
  const int no = optimized == Side::A ? c.n_oa : c.n_ob;
  const int d = rho.dim(optimized);
  std::vector<std::vector<CMatrix>> k(ns, std::vector<CMatrix>(no, CMatrix::Zero(d, d)));
  for (int y = 0; y < fixed.n_settings; ++y)
    for (int b = 0; b < fixed.n_outcomes; ++b) {
      const CMatrix cond = conditional_state(rho, fixed.effect(b, y), other(optimized));
      for (int x = 0; x < ns; ++x)
        for (int a = 0; a < no; ++a) {
          const double w = optimized == Side::A ? c(a, b, x, y) : c(b, a, y, x);
          if (w != 0.0) k[x][a] += w * cond;
        }
    }
  return k;
}

/// Random projective start: a Haar basis, split into two halves when the
/// scenario has two outcomes.
inline MeasurementSet random_start(int d, int n_settings, int n_outcomes, Rng& rng) {
  MeasurementSet m = random_projective_measurements(d, n_settings, rng);
  if (n_outcomes == d) return m;
  for (auto& setting : m.effects) {
    CMatrix p0 = CMatrix::Zero(d, d);
    for (int j = 0; j < (d + 1) / 2; ++j) p0 += setting[j];
    setting = {p0, CMatrix::Identity(d, d) - p0};
  }
  m.n_outcomes = 2;
  return m;
}

/// Best response of one side. Two outcomes: projector onto the positive part
/// of K_0 - K_1, optimal over all POVMs. Otherwise polar ascent from the
/// current basis, which never decreases the value.
inline MeasurementSet best_response(const std::vector<std::vector<CMatrix>>& k,
                                    const MeasurementSet& current) {
  MeasurementSet m = current;
  for (std::size_t x = 0; x < k.size(); ++x) {
    const int d = static_cast<int>(k[x][0].rows());
    if (k[x].size() == 2) {
      const EigDecomposition e = herm_eig(hermitian_part(k[x][0] - k[x][1]));
      CMatrix p0 = CMatrix::Zero(d, d);
      for (int j = 0; j < d; ++j)
        if (e.values(j) > 0.0) p0 += projector(e.vectors.col(j));
      m.effects[x] = {p0, CMatrix::Identity(d, d) - p0};
      continue;
    }
    CMatrix basis(d, d);
    for (int a = 0; a < d; ++a) basis.col(a) = herm_eig(current.effects[x][a]).vectors.col(d - 1);
    basis = polar_basis_ascent(shifted_psd(k[x]), basis);
    for (int a = 0; a < d; ++a) m.effects[x][a] = projector(basis.col(a));
  }
  return m;
}

}  // namespace detail

/// Lower bound on max beta over projective measurements. Each half-step fixes
/// one side and takes a best (two outcomes) or ascending (more outcomes)
/// response on the other, so the value never decreases. n_outcomes must be 2
/// or the local dimension. Restart r uses seed ^ r.
inline BellSeesaw seesaw_bell(const DensityMatrix& rho, const BellFunctional& f, int restarts = 50,
                              std::uint64_t seed = 0, int max_iter = 500) {
  const Correlation& c = f.coef;
  for (auto [no, d] : {std::pair{c.n_oa, rho.dim_a()}, std::pair{c.n_ob, rho.dim_b()}})
    if (no != 2 && no != d) throw DomainError("seesaw_bell: n_outcomes must be 2 or dim");
  if (restarts < 1) throw DomainError("seesaw_bell: restarts must be >= 1");
  deterministic_strategies(c.n_sa, c.n_oa, kMaxBellVertices);
  deterministic_strategies(c.n_sb, c.n_ob, kMaxBellVertices);
  BellSeesaw out;
  out.value = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Rng rng(seed ^ static_cast<std::uint64_t>(r));
    MeasurementSet ma = detail::random_start(rho.dim_a(), c.n_sa, c.n_oa, rng);
    MeasurementSet mb = detail::random_start(rho.dim_b(), c.n_sb, c.n_ob, rng);
    double val = f.value(correlation_from(rho, ma, mb));
    for (int it = 0; it < max_iter; ++it) {
      mb = detail::best_response(detail::bell_operators(rho, f, ma, Side::B), mb);
      ma = detail::best_response(detail::bell_operators(rho, f, mb, Side::A), ma);
      const double nv = f.value(correlation_from(rho, ma, mb));
      const bool more = nv > val + 1e-12;
      val = std::max(val, nv);
      if (!more) break;
    }
    out.per_restart.push_back(val);
    if (val > out.value) {
      out.value = val;
      out.alice = ma;
      out.bob = mb;
    }
  }
  return out;
}

}  // namespace wernerq
