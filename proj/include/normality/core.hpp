#pragma once

// Submatrix calculus, the bordered systems T_i / x_i, the simultaneous
// row/column permutation action and the commutator MM^T - M^T M.
//
// Indices in this interface are 1-based, matching the notation M(i; <=j).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"

namespace normality {

enum class Rel { Eq, Le, Lt, Ge, Gt };

// One side of a slice such as (<= j) or (> i).
struct IndexSpec {
  Rel rel;
  std::size_t index;  // 1-based
};

namespace slice {
inline IndexSpec eq(std::size_t i) { return {Rel::Eq, i}; }
inline IndexSpec le(std::size_t i) { return {Rel::Le, i}; }
inline IndexSpec lt(std::size_t i) { return {Rel::Lt, i}; }
inline IndexSpec ge(std::size_t i) { return {Rel::Ge, i}; }
inline IndexSpec gt(std::size_t i) { return {Rel::Gt, i}; }
}  // namespace slice

namespace detail {

// Half-open 0-based range selected by `spec` inside 1..n.
inline std::pair<std::size_t, std::size_t> resolve(const IndexSpec& spec, std::size_t n) {
  if (spec.index < 1 || spec.index > n) {
    throw InputError("submatrix: index " + std::to_string(spec.index) + " outside 1.." +
                     std::to_string(n));
  }
  const std::size_t i = spec.index;
  switch (spec.rel) {
    case Rel::Eq: return {i - 1, i};
    case Rel::Le: return {0, i};
    case Rel::Lt: return {0, i - 1};
    case Rel::Ge: return {i - 1, n};
    case Rel::Gt: return {i, n};
  }
  return {0, 0};
}

}  // namespace detail

inline IntMatrix submatrix(const SignMatrix& m, IndexSpec rows, IndexSpec cols) {
  const auto [r0, r1] = detail::resolve(rows, m.n());
  const auto [c0, c1] = detail::resolve(cols, m.n());
  IntMatrix out(r1 - r0, c1 - c0);
  for (std::size_t r = r0; r < r1; ++r)
    for (std::size_t c = c0; c < c1; ++c) out(r - r0, c - c0) = m(r, c);
  return out;
}

// T_i = [ M(<i+1; >i+1)^T ; M(>i+1; <i+1) ], shape 2(n-i-1) x i, 0 <= i <= n-1.
// Row r < n-i-1 of the top block belongs to column i+2+r of M, row r of the
// bottom block to row i+2+r of M.
inline IntMatrix build_T(const SignMatrix& m, std::size_t i) {
  const std::size_t n = m.n();
  if (i >= n) throw InputError("build_T: i must satisfy 0 <= i <= n-1");
  const std::size_t h = n - i - 1;
  IntMatrix t(2 * h, i);
  for (std::size_t r = 0; r < h; ++r) {
    const std::size_t idx = i + 1 + r;  // 0-based position of the bordered index
    for (std::size_t c = 0; c < i; ++c) {
      t(r, c) = m(c, idx);
      t(h + r, c) = m(idx, c);
    }
  }
  return t;
}

// x_k = [ -M(k; >k)^T ; M(>k; k) ] when `negate_top`, else x_k' (no sign flip).
inline std::vector<std::int64_t> build_x(const SignMatrix& m, std::size_t k, bool negate_top = true) {
  const std::size_t n = m.n();
  if (k < 1 || k > n) throw InputError("build_x: k must satisfy 1 <= k <= n");
  std::vector<std::int64_t> x;
  x.reserve(2 * (n - k));
  for (std::size_t j = k; j < n; ++j) x.push_back(negate_top ? -m(k - 1, j) : m(k - 1, j));
  for (std::size_t j = k; j < n; ++j) x.push_back(m(j, k - 1));
  return x;
}

// T_i together with the vector x_{i+1} it is paired with in T_i^T x_{i+1} = c.
struct BorderedSystem {
  IntMatrix T;
  std::vector<std::int64_t> x;
  std::size_t index = 0;
};

inline BorderedSystem bordered_system(const SignMatrix& m, std::size_t i) {
  return {build_T(m, i), build_x(m, i + 1, true), i};
}

inline std::vector<std::int64_t> transpose_times(const IntMatrix& t, std::span<const std::int64_t> x) {
  if (t.rows() != x.size()) throw InputError("transpose_times: length mismatch");
  std::vector<std::int64_t> out(t.cols(), 0);
  for (std::size_t r = 0; r < t.rows(); ++r)
    for (std::size_t c = 0; c < t.cols(); ++c) out[c] += t(r, c) * x[r];
  return out;
}

// (M_sigma)(i, j) = M(sigma^-1(i), sigma^-1(j)); (M_sigma)_rho = M_{rho ∘ sigma}.
inline SignMatrix apply_permutation(const SignMatrix& m, const Permutation& sigma) {
  const std::size_t n = m.n();
  if (sigma.n() != n) throw InputError("apply_permutation: dimension mismatch");
  const Permutation inv = sigma.inverse();
  std::vector<std::int8_t> out(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = static_cast<std::int8_t>(m(inv(i), inv(j)));
  return SignMatrix(n, std::move(out));
}

inline IntMatrix apply_permutation(const IntMatrix& c, const Permutation& sigma) {
  const std::size_t n = c.rows();
  if (c.cols() != n || sigma.n() != n) throw InputError("apply_permutation: dimension mismatch");
  const Permutation inv = sigma.inverse();
  IntMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = c(inv(i), inv(j));
  return out;
}

// MM^T - M^T M. Symmetric with zero diagonal; zero iff M is normal.
inline IntMatrix commutator(const SignMatrix& m) {
  const std::size_t n = m.n();
  IntMatrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::int64_t rows = 0;
      std::int64_t cols = 0;
      for (std::size_t l = 0; l < n; ++l) {
        rows += m(i, l) * m(j, l);
        cols += m(l, i) * m(l, j);
      }
      d(i, j) = rows - cols;
    }
  }
  return d;
}

inline bool is_normal(const SignMatrix& m) { return commutator(m).is_zero(); }

inline constexpr std::size_t kDefaultWitnessSearchCap = 8;

namespace detail {

// Backtracking search for pi with target(i, j) == c(pi(i), pi(j)); pi is
// filled in index order trying images in increasing order, so the first
// witness found is the lexicographically smallest pi.
class WitnessSearch {
 public:
  WitnessSearch(const IntMatrix& target, const IntMatrix& c) : target_(target), c_(c) {
    const std::size_t n = c.rows();
    pi_.assign(n, 0);
    used_.assign(n, false);
    t_sig_.resize(n);
    c_sig_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      t_sig_[i] = signature(target_, i);
      c_sig_[i] = signature(c_, i);
    }
  }

  std::optional<Permutation> run() {
    if (!assign(0)) return std::nullopt;
    return Permutation::from_zero_based(pi_).inverse();
  }

 private:
  static std::vector<std::int64_t> signature(const IntMatrix& a, std::size_t i) {
    std::vector<std::int64_t> s;
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (j != i) s.push_back(a(i, j));
    std::sort(s.begin(), s.end());
    s.push_back(a(i, i));
    return s;
  }

  bool assign(std::size_t i) {
    const std::size_t n = pi_.size();
    if (i == n) return true;
    for (std::size_t v = 0; v < n; ++v) {
      if (used_[v] || t_sig_[i] != c_sig_[v]) continue;
      bool ok = true;
      for (std::size_t a = 0; a < i && ok; ++a) {
        ok = target_(i, a) == c_(v, pi_[a]) && target_(a, i) == c_(pi_[a], v);
      }
      if (!ok) continue;
      pi_[i] = v;
      used_[v] = true;
      if (assign(i + 1)) return true;
      used_[v] = false;
    }
    return false;
  }

  const IntMatrix& target_;
  const IntMatrix& c_;
  std::vector<std::size_t> pi_;
  std::vector<bool> used_;
  std::vector<std::vector<std::int64_t>> t_sig_;
  std::vector<std::vector<std::int64_t>> c_sig_;
};

}  // namespace detail

// Some sigma with MM^T - M^T M == C_sigma, or nullopt. Exhaustive over S_n
// (with pruning), so a returned witness is always a certificate.
inline std::optional<Permutation> is_c_normal(const SignMatrix& m, const IntMatrix& c,
                                              std::size_t max_search = kDefaultWitnessSearchCap) {
  const std::size_t n = m.n();
  if (c.rows() != n || c.cols() != n) throw InputError("is_c_normal: C must be n x n");
  const IntMatrix d = commutator(m);
  if (c.is_zero()) {
    if (d.is_zero()) return Permutation::identity(n);
    return std::nullopt;
  }
  if (n > max_search) {
    throw CapabilityError("is_c_normal: witness search over S_n refused for n = " +
                          std::to_string(n) + " > " + std::to_string(max_search));
  }
  return detail::WitnessSearch(d, c).run();
}

// Entry i (1-based, i < k) is (MM^T - M^T M - C)_{i,k}.
inline std::vector<std::int64_t> constraint_residual(const SignMatrix& m, const IntMatrix& c,
                                                     std::size_t k) {
  const std::size_t n = m.n();
  if (k < 2 || k > n) throw InputError("constraint_residual: k must satisfy 2 <= k <= n");
  if (c.rows() != n || c.cols() != n) throw InputError("constraint_residual: C must be n x n");
  std::vector<std::int64_t> out(k - 1);
  const std::size_t kk = k - 1;
  for (std::size_t i = 0; i < kk; ++i) {
    std::int64_t v = 0;
    for (std::size_t l = 0; l < n; ++l) v += m(i, l) * m(kk, l) - m(l, i) * m(l, kk);
    out[i] = v - c(i, kk);
  }
  return out;
}

// The right-hand side c of T_{k-1}^T x_k = c. It reads only C and entries of
// D_{k-1} (diagonal plus the first k-1 rows and columns), and satisfies
//   constraint_residual(M, C, k) == residual_c(M, C, k) - T_{k-1}^T x_k.
inline std::vector<std::int64_t> residual_c(const SignMatrix& m, const IntMatrix& c, std::size_t k) {
  const std::size_t n = m.n();
  if (k < 2 || k > n) throw InputError("residual_c: k must satisfy 2 <= k <= n");
  if (c.rows() != n || c.cols() != n) throw InputError("residual_c: C must be n x n");
  std::vector<std::int64_t> out(k - 1);
  const std::size_t kk = k - 1;
  for (std::size_t i = 0; i < kk; ++i) {
    std::int64_t v = 0;
    for (std::size_t l = 0; l <= kk; ++l) v += m(i, l) * m(kk, l) - m(l, i) * m(l, kk);
    out[i] = v - c(i, kk);
  }
  return out;
}

}  // namespace normality
