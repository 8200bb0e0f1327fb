#pragma once

// Slow, direct reference implementations used only by the tests. Nothing
// here shares code with the library beyond the matrix containers.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "normality/matrix.hpp"

namespace oracle {

using normality::IntMatrix;
using normality::SignMatrix;

using QMatrix = std::vector<std::vector<mpq_class>>;

inline QMatrix to_q(const IntMatrix& a) {
  QMatrix q(a.rows(), std::vector<mpq_class>(a.cols()));
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) q[r][c] = mpq_class(static_cast<long>(a(r, c)));
  return q;
}

// Textbook Gaussian elimination over Q.
inline std::size_t rank_q(QMatrix a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || a[r][c] == 0) continue;
      const mpq_class f = a[r][c] / a[rank][c];
      for (std::size_t j = c; j < cols; ++j) a[r][j] -= f * a[rank][j];
    }
    ++rank;
  }
  return rank;
}

inline std::size_t rank_q(const IntMatrix& a) { return rank_q(to_q(a)); }

// Entry (1-based) helpers so the slicing oracle reads like the definitions.
inline int at(const SignMatrix& m, std::size_t i, std::size_t j) { return m(i - 1, j - 1); }

// T_i straight from the definition: rows j = i+2..n of the transposed upper
// block, then rows j = i+2..n of the lower block, columns l = 1..i.
inline IntMatrix naive_T(const SignMatrix& m, std::size_t i) {
  const std::size_t n = m.n();
  std::vector<std::vector<std::int64_t>> rows;
  for (std::size_t j = i + 2; j <= n; ++j) {
    std::vector<std::int64_t> row;
    for (std::size_t l = 1; l <= i; ++l) row.push_back(at(m, l, j));
    rows.push_back(row);
  }
  for (std::size_t j = i + 2; j <= n; ++j) {
    std::vector<std::int64_t> row;
    for (std::size_t l = 1; l <= i; ++l) row.push_back(at(m, j, l));
    rows.push_back(row);
  }
  IntMatrix t(rows.size(), i);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < i; ++c) t(r, c) = rows[r][c];
  return t;
}

inline IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      std::int64_t s = 0;
      for (std::size_t l = 0; l < a.cols(); ++l) s += a(i, l) * b(l, j);
      out(i, j) = s;
    }
  return out;
}

inline IntMatrix naive_commutator(const SignMatrix& m) {
  const IntMatrix a = m.to_int();
  const IntMatrix at = a.transposed();
  const IntMatrix x = multiply(a, at);
  const IntMatrix y = multiply(at, a);
  IntMatrix d(m.n(), m.n());
  for (std::size_t i = 0; i < m.n(); ++i)
    for (std::size_t j = 0; j < m.n(); ++j) d(i, j) = x(i, j) - y(i, j);
  return d;
}

inline bool naive_is_normal(const SignMatrix& m) { return naive_commutator(m).is_zero(); }

inline std::uint64_t naive_normal_count(std::size_t n) {
  std::uint64_t hits = 0;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << (n * n)); ++b)
    if (naive_is_normal(SignMatrix::from_bits(n, b))) ++hits;
  return hits;
}

// Via the permutation matrix: C_sigma = P C P^T with P(sigma(j), j) = 1.
inline bool naive_is_c_normal(const SignMatrix& m, const IntMatrix& c) {
  const std::size_t n = m.n();
  const IntMatrix d = naive_commutator(m);
  std::vector<std::size_t> img(n);
  std::iota(img.begin(), img.end(), 0);
  do {
    IntMatrix p(n, n);
    for (std::size_t j = 0; j < n; ++j) p(img[j], j) = 1;
    if (multiply(multiply(p, c), p.transposed()) == d) return true;
  } while (std::next_permutation(img.begin(), img.end()));
  return false;
}

// Property P: deleting rows i and m+i lowers the rank, for every i.
inline bool naive_property_P(const IntMatrix& a) {
  const std::size_t m = a.rows() / 2;
  const std::size_t full = rank_q(a);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < 2 * m; ++r)
      if (r != i && r != m + i) keep.push_back(r);
    if (rank_q(a.select_rows(keep)) >= full) return false;
  }
  return true;
}

inline bool naive_property_Fk(const IntMatrix& a, std::size_t k) {
  return naive_property_P(a) && rank_q(a) == k && rank_q(a.first_rows(k)) == k;
}

// Hypercube vertices v in {-1,1}^n lying in the row space of `basis`.
inline std::uint64_t naive_vertex_count(const IntMatrix& basis, std::size_t n) {
  const std::size_t r = rank_q(basis);
  std::uint64_t count = 0;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
    IntMatrix v(1, n);
    for (std::size_t j = 0; j < n; ++j) v(0, j) = ((b >> j) & 1U) ? -1 : 1;
    if (rank_q(basis.stacked(v)) == r) ++count;
  }
  return count;
}

// Vectors v in {-1,1}^q with A v = c.
inline std::uint64_t naive_solution_count(const IntMatrix& a, const std::vector<std::int64_t>& c) {
  const std::size_t q = a.cols();
  std::uint64_t count = 0;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << q); ++b) {
    bool ok = true;
    for (std::size_t r = 0; r < a.rows() && ok; ++r) {
      std::int64_t s = 0;
      for (std::size_t j = 0; j < q; ++j) s += a(r, j) * (((b >> j) & 1U) ? -1 : 1);
      ok = s == c[r];
    }
    if (ok) ++count;
  }
  return count;
}

}  // namespace oracle
