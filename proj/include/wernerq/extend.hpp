#pragma once

// Symmetric extensions, symmetric quasi-extensions and bosonic symmetric
// extensions as conic programs.
//
// Tensor order of the extension space: side A gives A1..Ak B, side B gives
// A B1..Bk. Every program minimizes t subject to
//
//   tr_{all but copy i and the other party} H = rho + (t - 1) I / D,  i = 1..k,
//
// where H is a PSD matrix (SE), a PSD matrix on the symmetric subspace of the
// copies (SE-B), or P + sum_p Q_p^{T_p} with P, Q_p PSD (SQE).

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "wernerq/qmat.hpp"
#include "wernerq/solver.hpp"
#include "wernerq/states.hpp"

namespace wernerq {

enum class ExtensionFlavor { SE, SQE, SEB };

inline const char* to_string(ExtensionFlavor f) {
  switch (f) {
    case ExtensionFlavor::SE: return "SE";
    case ExtensionFlavor::SQE: return "SQE";
    case ExtensionFlavor::SEB: return "SE_B";
  }
  return "?";
}

inline constexpr int kMaxExtensionDim = 243;

struct ExtensionQuery {
  DensityMatrix rho;
  int k = 2;
  Side side = Side::B;
  ExtensionFlavor flavor = ExtensionFlavor::SE;
  /// SQE only: each entry lists the subsystems transposed together. Empty
  /// means the default set for k.
  std::vector<std::vector<int>> partitions;
};

struct ExtensionResult {
  double t_star = 0.0;
  SolveStatus status = SolveStatus::MaxIter;
  bool extension_exists = false;  // t_star <= 1 + 1e-6
  double gap = 0.0;
  int iterations = 0;
};

// --- symmetric subspace -------------------------------------------------------------

/// Isometry (d^k x C(d+k-1, k)) onto the permutation-symmetric subspace.
/// Column j is the normalized sum of all product kets whose sorted digits
/// equal the j-th sorted tuple in lexicographic order.
inline CMatrix symmetric_subspace_isometry(int d, int k) {
  check_local_dim(d, "symmetric_subspace_isometry");
  if (k < 1) throw DomainError("symmetric_subspace_isometry: k must be >= 1");
  long long total = 1;
  for (int i = 0; i < k; ++i) {
    total *= d;
    if (total > kMaxExtensionDim)
      throw DomainError("symmetric_subspace_isometry: d^k exceeds 243");
  }
  std::map<std::vector<int>, std::vector<int>> orbits;
  for (int idx = 0; idx < total; ++idx) {
    std::vector<int> digits(k);
    for (int p = k - 1, rem = idx; p >= 0; --p, rem /= d) digits[p] = rem % d;
    std::sort(digits.begin(), digits.end());
    orbits[digits].push_back(idx);
  }
  CMatrix iso = CMatrix::Zero(total, static_cast<Eigen::Index>(orbits.size()));
  int col = 0;
  for (const auto& [key, members] : orbits) {
    const double w = 1.0 / std::sqrt(static_cast<double>(members.size()));
    for (int idx : members) iso(idx, col) = w;
    ++col;
  }
  return iso;
}

// --- program construction -------------------------------------------------------------

namespace detail {

/// Sparse rows of an embedding W: full index u -> list of (column, weight).
using SparseRows = std::vector<std::vector<std::pair<int, cplx>>>;

inline SparseRows sparse_rows(const CMatrix& w) {
  SparseRows rows(w.rows());
  for (Eigen::Index u = 0; u < w.rows(); ++u)
    for (Eigen::Index p = 0; p < w.cols(); ++p)
      if (std::abs(w(u, p)) > 1e-15) rows[u].emplace_back(static_cast<int>(p), w(u, p));
  return rows;
}

inline SparseRows identity_rows(int n) {
  SparseRows rows(n);
  for (int u = 0; u < n; ++u) rows[u].emplace_back(u, cplx(1.0));
  return rows;
}

/// Adds coef * Y_pq (complex coef) to the Re-row and Im-row of one entry.
inline void add_entry_term(ConicProgram& prog, int block, int re_row, int im_row, int p, int q,
                           cplx coef) {
  // Re(g Y) = Re g Re Y - Im g Im Y ; Im(g Y) = Re g Im Y + Im g Re Y
  prog.add_re(re_row, block, p, q, coef.real());
  prog.add_im(re_row, block, p, q, -coef.imag());
  if (im_row >= 0) {
    prog.add_im(im_row, block, p, q, coef.real());
    prog.add_re(im_row, block, p, q, coef.imag());
  }
}

/// Multi-index layout of the extension space and the (A, B) pair seen by copy i.
struct ExtensionLayout {
  TensorShape shape;
  std::vector<int> copies;  // subsystem index of each copy
  int other;                // subsystem index of the unextended party

  ExtensionLayout(int d_copy, int d_other, int k, Side side)
      : shape(make_dims(d_copy, d_other, k, side)) {
    for (int i = 0; i < k; ++i) copies.push_back(side == Side::A ? i : i + 1);
    other = side == Side::A ? k : 0;
  }

  /// Kept pair for copy i in (A, B) order.
  std::vector<int> kept(int i) const {
    std::vector<int> kp = {copies[i], other};
    std::sort(kp.begin(), kp.end());
    return kp;
  }

 private:
  static TensorShape make_dims(int d_copy, int d_other, int k, Side side) {
    std::vector<int> dims;
    if (side == Side::B) dims.push_back(d_other);
    for (int i = 0; i < k; ++i) dims.push_back(d_copy);
    if (side == Side::A) dims.push_back(d_other);
    return TensorShape(dims);
  }
};

/// For each traced-out multi-index e and kept index r, the full index.
inline std::vector<std::vector<int>> marginal_index_table(const TensorShape& shape,
                                                          const std::vector<int>& kept) {
  std::vector<int> drop;
  for (int s = 0; s < shape.parties(); ++s)
    if (std::find(kept.begin(), kept.end(), s) == kept.end()) drop.push_back(s);
  const int dk = shape.dim_of(kept), dd = shape.dim_of(drop);
  auto offsets = [&](const std::vector<int>& subs, int count) {
    std::vector<int> off(count, 0);
    for (int idx = 0; idx < count; ++idx) {
      int rem = idx, o = 0;
      for (int p = static_cast<int>(subs.size()) - 1; p >= 0; --p) {
        o += (rem % shape.dim(subs[p])) * shape.stride(subs[p]);
        rem /= shape.dim(subs[p]);
      }
      off[idx] = o;
    }
    return off;
  };
  const auto ko = offsets(kept, dk), dof = offsets(drop, dd);
  std::vector<std::vector<int>> table(dk, std::vector<int>(dd));
  for (int r = 0; r < dk; ++r)
    for (int e = 0; e < dd; ++e) table[r][e] = ko[r] + dof[e];
  return table;
}

/// Swaps the digits of the listed subsystems between a row and a column index.
inline std::pair<int, int> transpose_indices(const TensorShape& shape, const std::vector<int>& subs,
                                             int u, int v) {
  int u2 = u, v2 = v;
  for (int s : subs) {
    const int du = shape.digit(u, s), dv = shape.digit(v, s);
    u2 = shape.with_digit(u2, s, dv);
    v2 = shape.with_digit(v2, s, du);
  }
  return {u2, v2};
}

/// Default SQE bipartitions: every proper cut for k <= 3, the fixed
/// four-element subset for k = 4. Listed by the subsystems transposed.
inline std::vector<std::vector<int>> default_partitions(const ExtensionLayout& lay, int k) {
  std::vector<std::vector<int>> parts;
  const int n = k + 1;
  if (k <= 3) {
    // subsets of all parties but the last one, nonempty
    for (int mask = 1; mask < (1 << (n - 1)); ++mask) {
      std::vector<int> s;
      for (int b = 0; b < n - 1; ++b)
        if (mask & (1 << b)) s.push_back(b);
      parts.push_back(s);
    }
    return parts;
  }
  if (k == 4) {
    const int c0 = lay.copies[0], c1 = lay.copies[1], o = lay.other;
    parts.push_back({c0});
    parts.push_back({o});
    parts.push_back({std::min(c0, c1), std::max(c0, c1)});
    parts.push_back({std::min(c0, o), std::max(c0, o)});
    return parts;
  }
  throw DomainError("quasi_extension: default partitions exist only for k <= 4");
}

inline void check_query(const ExtensionQuery& q) {
  if (q.k < 2) throw DomainError("extension: k must be >= 2");
  const int d_copy = q.rho.dim(q.side), d_other = q.rho.dim(other(q.side));
  long long dim = d_other;
  for (int i = 0; i < q.k; ++i) {
    dim *= d_copy;
    if (dim > kMaxExtensionDim) throw DomainError("extension: space dimension exceeds 243");
  }
  if (q.flavor == ExtensionFlavor::SQE) {
    if (q.k > 4) throw DomainError("quasi_extension: k must be <= 4");
    if (q.k == 4 && !q.partitions.empty())
      throw DomainError("quasi_extension: k = 4 uses the fixed partition subset");
  }
}

struct ExtensionProgram {
  ConicProgram prog;
  int t_col = 0;
};

/// Builds the program. `embeddings` lists each PSD variable block with its
/// embedding into the extension space and the subsystems partially
/// transposed (empty for none).
struct VariableBlock {
  int n;
  SparseRows rows;         // full index -> columns of the block
  std::vector<int> transposed;
};

inline ExtensionProgram build_extension_program(const ExtensionQuery& q,
                                                const ExtensionLayout& lay,
                                                const std::vector<VariableBlock>& vars) {
  ExtensionProgram ep;
  ConicProgram& p = ep.prog;
  const int tb = p.add_block(ConeKind::NonNeg, 1);
  ep.t_col = p.block(tb).offset;
  p.set_cost(ep.t_col, 1.0);
  std::vector<int> blocks;
  for (const auto& v : vars) blocks.push_back(p.add_block(ConeKind::Psd, v.n));

  const CMatrix& rho = q.rho.matrix();
  const int dm = static_cast<int>(rho.rows());
  for (int i = 0; i < q.k; ++i) {
    const auto table = marginal_index_table(lay.shape, lay.kept(i));
    for (int r = 0; r < dm; ++r)
      for (int c = r; c < dm; ++c) {
        const int re_row = p.add_row(rho(r, c).real() - (r == c ? 1.0 / dm : 0.0));
        const int im_row = r == c ? -1 : p.add_row(rho(r, c).imag());
        if (r == c) p.add_coef(re_row, ep.t_col, -1.0 / dm);
        for (std::size_t vb = 0; vb < vars.size(); ++vb) {
          const VariableBlock& var = vars[vb];
          std::map<std::pair<int, int>, cplx> acc;
          for (std::size_t e = 0; e < table[r].size(); ++e) {
            auto [u, v] = transpose_indices(lay.shape, var.transposed, table[r][e], table[c][e]);
            for (const auto& [pp, wp] : var.rows[u])
              for (const auto& [qq, wq] : var.rows[v]) acc[{pp, qq}] += wp * std::conj(wq);
          }
          for (const auto& [pq, coef] : acc)
            if (std::abs(coef) > 1e-15)
              add_entry_term(p, blocks[vb], re_row, im_row, pq.first, pq.second, coef);
        }
      }
  }
  return ep;
}

inline ExtensionResult run_extension(const ExtensionProgram& ep, const SolverOptions& opts) {
  const ConicSolution s = solve(ep.prog, opts);
  ExtensionResult r;
  r.t_star = s.x.size() ? s.x(ep.t_col) : 0.0;
  r.status = s.status;
  r.gap = s.gap;
  r.iterations = s.iterations;
  r.extension_exists = s.status == SolveStatus::Optimal && r.t_star <= 1.0 + 1e-6;
  return r;
}

inline SolverOptions extension_options(const ExtensionQuery& q, SolverOptions opts) {
  const int d_copy = q.rho.dim(q.side), d_other = q.rho.dim(other(q.side));
  int dim = d_other;
  for (int i = 0; i < q.k; ++i) dim *= d_copy;
  if (dim > 81) opts.max_iter *= 4;
  return opts;
}

}  // namespace detail

/// Builds the conic program of a query without solving it (for dumps).
inline ConicProgram extension_program(const ExtensionQuery& q) {
  detail::check_query(q);
  const int d_copy = q.rho.dim(q.side), d_other = q.rho.dim(other(q.side));
  const detail::ExtensionLayout lay(d_copy, d_other, q.k, q.side);
  const int total = lay.shape.total();
  std::vector<detail::VariableBlock> vars;
  switch (q.flavor) {
    case ExtensionFlavor::SE:
      vars.push_back({total, detail::identity_rows(total), {}});
      break;
    case ExtensionFlavor::SEB: {
      const CMatrix sym = symmetric_subspace_isometry(d_copy, q.k);
      const CMatrix id = CMatrix::Identity(d_other, d_other);
      const CMatrix w = q.side == Side::A ? kron(sym, id) : kron(id, sym);
      vars.push_back({static_cast<int>(w.cols()), detail::sparse_rows(w), {}});
      break;
    }
    case ExtensionFlavor::SQE: {
      vars.push_back({total, detail::identity_rows(total), {}});
      const auto parts = q.partitions.empty() ? detail::default_partitions(lay, q.k) : q.partitions;
      for (const auto& part : parts) {
        if (part.empty() || static_cast<int>(part.size()) >= lay.shape.parties())
          throw DomainError("quasi_extension: partition must be a proper nonempty subset");
        for (int s : part)
          if (s < 0 || s >= lay.shape.parties())
            throw DomainError("quasi_extension: partition names an unknown subsystem");
        vars.push_back({total, detail::identity_rows(total), part});
      }
      break;
    }
  }
  return detail::build_extension_program(q, lay, vars).prog;
}

inline ExtensionResult solve_extension(const ExtensionQuery& q, const SolverOptions& opts = {}) {
  detail::check_query(q);
  detail::ExtensionProgram ep;
  ep.prog = extension_program(q);
  ep.t_col = 0;  // the t block is always first
  return detail::run_extension(ep, detail::extension_options(q, opts));
}

inline ExtensionResult symmetric_extension(const DensityMatrix& rho, int k, Side side = Side::B,
                                           const SolverOptions& opts = {}) {
  return solve_extension({rho, k, side, ExtensionFlavor::SE, {}}, opts);
}

inline ExtensionResult quasi_extension(const DensityMatrix& rho, int k, Side side = Side::B,
                                       std::vector<std::vector<int>> partitions = {},
                                       const SolverOptions& opts = {}) {
  return solve_extension({rho, k, side, ExtensionFlavor::SQE, std::move(partitions)}, opts);
}

inline ExtensionResult bosonic_extension(const DensityMatrix& rho, int k, Side side = Side::B,
                                         const SolverOptions& opts = {}) {
  return solve_extension({rho, k, side, ExtensionFlavor::SEB, {}}, opts);
}

// --- critical weights ----------------------------------------------------------------

/// v_t = (n+/D)(t0 - 1)/t0 from the optimum t0 at v = 0; zero when t0 <= 1.
inline double critical_weight(double t_star_at_v0, int d) {
  check_local_dim(d, "critical_weight");
  if (!(t_star_at_v0 > 1.0)) return 0.0;
  const double n_plus = d * (d + 1) / 2.0;
  return n_plus / (d * d) * (t_star_at_v0 - 1.0) / t_star_at_v0;
}

/// Smallest v (to v_tol) at which W^(d)(v) admits the extension, by
/// bisection on extension_exists over [0, n+/D] (W is I/D at the top end).
inline double extension_threshold(int d, int k, ExtensionFlavor flavor, Side side = Side::B,
                                  double v_tol = 1e-3, const SolverOptions& opts = {}) {
  auto exists = [&](double v) {
    return solve_extension({werner(d, v), k, side, flavor, {}}, opts).extension_exists;
  };
  if (exists(0.0)) return 0.0;
  double lo = 0.0, hi = (d + 1.0) / (2.0 * d);
  while (hi - lo > v_tol) {
    const double mid = 0.5 * (lo + hi);
    (exists(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace wernerq
