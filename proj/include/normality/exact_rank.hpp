#pragma once

// Exact rank over Q.
//
// Two routes, both exact:
//   * fraction-free (Bareiss) elimination, run in 64-bit words with 128-bit
//     intermediates and restarted in GMP integers on the first overflow;
//   * elimination modulo the prime 2^61 - 1, accepted as the rational rank only
//     when Hadamard's inequality shows every minor is smaller than the prime
//     (then a minor vanishes mod p iff it vanishes over Z).
// Pivoting takes columns left to right and, within a column, the lowest
// remaining row with a nonzero entry.

#include <gmpxx.h>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "matrix.hpp"

namespace normality {

inline constexpr std::uint64_t kModularPrime = (std::uint64_t{1} << 61) - 1;

enum class RankMethod { FractionFreeExact, ModularPrefilterConfirmed };

inline std::string to_string(RankMethod m) {
  return m == RankMethod::FractionFreeExact ? "fraction-free-exact" : "modular-prefilter-confirmed";
}

struct RankResult {
  std::size_t rank = 0;
  RankMethod method = RankMethod::FractionFreeExact;
  std::vector<std::size_t> pivot_columns;  // 0-based, strictly increasing
};

struct RankOptions {
  bool allow_modular = true;
};

namespace detail {

inline std::uint64_t mod_reduce(std::int64_t v, std::uint64_t p) {
  const std::int64_t r = v % static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(p) : r);
}

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1;
  while (e != 0) {
    if (e & 1U) r = mul_mod(r, a, p);
    a = mul_mod(a, a, p);
    e >>= 1U;
  }
  return r;
}

struct EliminationOutcome {
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
};

inline EliminationOutcome eliminate_mod_p(const IntMatrix& a, std::uint64_t p) {
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  std::vector<std::uint64_t> w(rows * cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) w[r * cols + c] = mod_reduce(a(r, c), p);

  EliminationOutcome out;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t r = rank; r < rows; ++r) {
      if (w[r * cols + c] != 0) {
        piv = r;
        break;
      }
    }
    if (piv == rows) continue;
    if (piv != rank)
      for (std::size_t k = c; k < cols; ++k) std::swap(w[piv * cols + k], w[rank * cols + k]);
    const std::uint64_t inv = pow_mod(w[rank * cols + c], p - 2, p);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      const std::uint64_t f = mul_mod(w[r * cols + c], inv, p);
      if (f == 0) continue;
      for (std::size_t k = c; k < cols; ++k) {
        const std::uint64_t sub = mul_mod(f, w[rank * cols + k], p);
        std::uint64_t& x = w[r * cols + k];
        x = x >= sub ? x - sub : x + p - sub;
      }
    }
    out.pivots.push_back(c);
    ++rank;
  }
  out.rank = rank;
  return out;
}

struct WordOverflow {};

// Bareiss step: (piv * x - lead * y) / prev, exact. Word version reports
// results that leave int64.
struct WordArithmetic {
  using value_type = std::int64_t;
  static value_type from(std::int64_t v) { return v; }
  static bool is_zero(value_type v) { return v == 0; }
  static value_type step(value_type piv, value_type x, value_type lead, value_type y,
                         value_type prev) {
    const __int128 num = static_cast<__int128>(piv) * x - static_cast<__int128>(lead) * y;
    const __int128 q = num / prev;
    if (q > INT64_MAX || q < INT64_MIN) throw WordOverflow{};
    return static_cast<value_type>(q);
  }
};

struct BigArithmetic {
  using value_type = mpz_class;
  static value_type from(std::int64_t v) { return mpz_class(static_cast<signed long>(v)); }
  static bool is_zero(const value_type& v) { return sgn(v) == 0; }
  static value_type step(const value_type& piv, const value_type& x, const value_type& lead,
                         const value_type& y, const value_type& prev) {
    mpz_class num = piv * x - lead * y;
    mpz_class q;
    mpz_divexact(q.get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
    return q;
  }
};

template <typename Arith>
EliminationOutcome bareiss(const IntMatrix& a) {
  using V = typename Arith::value_type;
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  std::vector<V> w;
  w.reserve(rows * cols);
  for (auto v : a.data()) w.push_back(Arith::from(v));

  EliminationOutcome out;
  V prev = Arith::from(1);
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t r = rank; r < rows; ++r) {
      if (!Arith::is_zero(w[r * cols + c])) {
        piv = r;
        break;
      }
    }
    if (piv == rows) continue;
    if (piv != rank)
      for (std::size_t k = 0; k < cols; ++k) std::swap(w[piv * cols + k], w[rank * cols + k]);
    const V pv = w[rank * cols + c];
    for (std::size_t r = rank + 1; r < rows; ++r) {
      const V lead = w[r * cols + c];
      for (std::size_t k = c + 1; k < cols; ++k) {
        w[r * cols + k] = Arith::step(pv, w[r * cols + k], lead, w[rank * cols + k], prev);
      }
      w[r * cols + c] = Arith::from(0);
    }
    prev = pv;
    out.pivots.push_back(c);
    ++rank;
  }
  out.rank = rank;
  return out;
}

}  // namespace detail

// True when every minor of `a` is smaller in absolute value than the modular
// prime, so ranks (and pivot columns) mod p equal those over Q.
inline bool hadamard_certifies(const IntMatrix& a, std::uint64_t p = kModularPrime) {
  const std::size_t k = std::min(a.rows(), a.cols());
  const auto b = a.max_abs();
  if (k == 0 || b == 0) return true;
  const double bits = static_cast<double>(k) * std::log2(static_cast<double>(b)) +
                      0.5 * static_cast<double>(k) * std::log2(static_cast<double>(k));
  return bits < std::log2(static_cast<double>(p)) - 1.0;
}

// Rank modulo p; never exceeds the rational rank.
inline std::size_t rank_mod_p(const IntMatrix& a, std::uint64_t p = kModularPrime) {
  return detail::eliminate_mod_p(a, p).rank;
}

inline RankResult rank_fraction_free(const IntMatrix& a) {
  detail::EliminationOutcome e;
  try {
    e = detail::bareiss<detail::WordArithmetic>(a);
  } catch (const detail::WordOverflow&) {
    e = detail::bareiss<detail::BigArithmetic>(a);
  }
  return {e.rank, RankMethod::FractionFreeExact, std::move(e.pivots)};
}

inline RankResult rank_exact(const IntMatrix& a, RankOptions opts = {}) {
  if (a.empty()) return {0, RankMethod::FractionFreeExact, {}};
  if (opts.allow_modular && hadamard_certifies(a)) {
    auto e = detail::eliminate_mod_p(a, kModularPrime);
    return {e.rank, RankMethod::ModularPrefilterConfirmed, std::move(e.pivots)};
  }
  return rank_fraction_free(a);
}

inline std::size_t rank_of(const IntMatrix& a) { return rank_exact(a).rank; }

// rank(T_i); i = n gives 0 by convention.
inline std::size_t rank_i(const SignMatrix& m, std::size_t i) {
  if (i > m.n()) throw InputError("rank_i: i must satisfy 0 <= i <= n");
  if (i == m.n()) return 0;
  return rank_of(build_T(m, i));
}

// rank_0 .. rank_n.
struct RankProfile {
  std::vector<std::size_t> ranks;

  std::size_t n() const { return ranks.empty() ? 0 : ranks.size() - 1; }
  std::size_t operator[](std::size_t i) const { return ranks[i]; }
  friend bool operator==(const RankProfile&, const RankProfile&) = default;
};

inline RankProfile rank_profile(const SignMatrix& m) {
  RankProfile p;
  p.ranks.reserve(m.n() + 1);
  for (std::size_t i = 0; i <= m.n(); ++i) p.ranks.push_back(rank_i(m, i));
  return p;
}

}  // namespace normality
