#pragma once

// Hypercube vertices in a subspace, solution counts of +/-1 systems, the
// paired-row properties P and F_k, and the swap reduction from P to F_k.
//
// Row indices in reports and swap scripts are 1-based.

#include <gmpxx.h>

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "exact_rank.hpp"
#include "matrix.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "signtxt.hpp"

namespace normality {

inline constexpr std::size_t kMaxVertexEnumeration = 24;

// Row space of `basis` inside Q^n.
class Subspace {
 public:
  Subspace(std::size_t ambient_dim, IntMatrix basis) : n_(ambient_dim), basis_(std::move(basis)) {
    if (n_ == 0) throw InputError("Subspace: ambient dimension must be positive");
    if (basis_.rows() != 0 && basis_.cols() != n_)
      throw InputError("Subspace: basis vectors must have length n");
    if (basis_.rows() == 0) basis_ = IntMatrix(0, n_);
    if (rank_of(basis_) != basis_.rows()) throw InputError("Subspace: basis is linearly dependent");
  }

  static Subspace full(std::size_t n) {
    IntMatrix id(n, n);
    for (std::size_t i = 0; i < n; ++i) id(i, i) = 1;
    return Subspace(n, std::move(id));
  }

  std::size_t ambient_dim() const noexcept { return n_; }
  std::size_t dim() const noexcept { return basis_.rows(); }
  const IntMatrix& basis() const noexcept { return basis_; }

 private:
  std::size_t n_;
  IntMatrix basis_;
};

namespace detail {

// Integer basis of {w : B w = 0}, from the reduced row echelon form over Q.
inline std::vector<std::vector<mpz_class>> integer_kernel(const IntMatrix& b, std::size_t n) {
  const std::size_t rows = b.rows();
  std::vector<std::vector<mpq_class>> a(rows, std::vector<mpq_class>(n));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < n; ++c) a[r][c] = mpq_class(static_cast<signed long>(b(r, c)));

  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < n && rank < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t r = rank; r < rows; ++r)
      if (sgn(a[r][c]) != 0) {
        piv = r;
        break;
      }
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    const mpq_class inv = 1 / a[rank][c];
    for (std::size_t k = c; k < n; ++k) a[rank][k] *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || sgn(a[r][c]) == 0) continue;
      const mpq_class f = a[r][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[rank][k];
    }
    pivot_col.push_back(c);
    ++rank;
  }

  std::vector<bool> is_pivot(n, false);
  for (auto c : pivot_col) is_pivot[c] = true;
  std::vector<std::vector<mpz_class>> kernel;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    std::vector<mpq_class> w(n, 0);
    w[f] = 1;
    for (std::size_t r = 0; r < rank; ++r) w[pivot_col[r]] = -a[r][f];
    mpz_class l = 1;
    for (const auto& x : w) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    std::vector<mpz_class> wi(n);
    mpz_class g = 0;
    for (std::size_t c = 0; c < n; ++c) {
      mpq_class s = w[c] * l;
      wi[c] = s.get_num();
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), wi[c].get_mpz_t());
    }
    if (g > 1)
      for (auto& x : wi) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    kernel.push_back(std::move(wi));
  }
  return kernel;
}

inline std::uint64_t mpz_mod_p(const mpz_class& v, std::uint64_t p) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), mpz_class(static_cast<unsigned long>(p)).get_mpz_t());
  return static_cast<std::uint64_t>(r.get_ui());
}

}  // namespace detail

// |{v in {+1,-1}^n : v in S}|. A vertex lies in S iff it is orthogonal to an
// integer kernel basis of S's spanning matrix; residues mod 2^61-1 are
// tracked along a Gray-code walk and every residue hit is confirmed over Z.
inline std::uint64_t hypercube_intersection_count(const Subspace& s) {
  const std::size_t n = s.ambient_dim();
  if (n > kMaxVertexEnumeration)
    throw CapabilityError("hypercube_intersection_count: n = " + std::to_string(n) + " > " +
                          std::to_string(kMaxVertexEnumeration));
  const auto kernel = detail::integer_kernel(s.basis(), n);
  if (kernel.empty()) return std::uint64_t{1} << n;
  const std::uint64_t p = kModularPrime;
  const std::size_t z = kernel.size();

  std::vector<std::vector<std::uint64_t>> w(z, std::vector<std::uint64_t>(n));
  std::vector<std::vector<std::uint64_t>> w2(z, std::vector<std::uint64_t>(n));
  std::vector<std::uint64_t> acc(z, 0);
  for (std::size_t j = 0; j < z; ++j) {
    for (std::size_t c = 0; c < n; ++c) {
      w[j][c] = detail::mpz_mod_p(kernel[j][c], p);
      w2[j][c] = (2 * w[j][c]) % p;
      acc[j] = (acc[j] + w[j][c]) % p;
    }
  }
  std::vector<int> v(n, 1);
  auto confirm = [&] {
    for (const auto& row : kernel) {
      mpz_class dot = 0;
      for (std::size_t c = 0; c < n; ++c) {
        if (v[c] > 0) dot += row[c];
        else dot -= row[c];
      }
      if (sgn(dot) != 0) return false;
    }
    return true;
  };
  auto all_zero = [&] {
    for (auto x : acc)
      if (x != 0) return false;
    return true;
  };

  std::uint64_t count = 0;
  if (all_zero() && confirm()) ++count;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    const auto c = static_cast<std::size_t>(std::countr_zero(step));
    for (std::size_t j = 0; j < z; ++j) {
      std::uint64_t& x = acc[j];
      const std::uint64_t d = w2[j][c];
      if (v[c] > 0) x = x >= d ? x - d : x + p - d;
      else x = x + d >= p ? x + d - p : x + d;
    }
    v[c] = -v[c];
    if (all_zero() && confirm()) ++count;
  }
  return count;
}

// |{x in {+1,-1}^m : A x = c}|.
inline std::uint64_t solution_count(const IntMatrix& a, std::span<const std::int64_t> c) {
  const std::size_t m = a.cols();
  if (m > kMaxVertexEnumeration)
    throw CapabilityError("solution_count: m = " + std::to_string(m) + " > " +
                          std::to_string(kMaxVertexEnumeration));
  if (c.size() != a.rows()) throw InputError("solution_count: c has wrong length");
  const std::size_t k = a.rows();
  std::vector<std::int64_t> ax(k, 0);
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t j = 0; j < m; ++j) ax[r] += a(r, j);
  std::vector<int> x(m, 1);
  auto hit = [&] {
    for (std::size_t r = 0; r < k; ++r)
      if (ax[r] != c[r]) return false;
    return true;
  };
  std::uint64_t count = hit() ? 1 : 0;
  const std::uint64_t total = std::uint64_t{1} << m;
  for (std::uint64_t step = 1; step < total; ++step) {
    const auto j = static_cast<std::size_t>(std::countr_zero(step));
    const std::int64_t delta = -2 * x[j];
    for (std::size_t r = 0; r < k; ++r) ax[r] += delta * a(r, j);
    x[j] = -x[j];
    if (hit()) ++count;
  }
  return count;
}

// 2m x q matrix with +/-1 entries; rows i and m+i (1-based) are paired.
class PairedMatrix {
 public:
  PairedMatrix() = default;

  explicit PairedMatrix(IntMatrix rows) : a_(std::move(rows)) {
    if (a_.rows() == 0 || a_.rows() % 2 != 0)
      throw InputError("PairedMatrix: row count must be even and positive");
    if (a_.cols() == 0) throw InputError("PairedMatrix: need at least one column");
    for (auto v : a_.data())
      if (v != 1 && v != -1) throw InputError("PairedMatrix: entries must be +1 or -1");
  }

  // Bit b (row-major) set means -1.
  static PairedMatrix from_bits(std::size_t m, std::size_t q, std::uint64_t bits) {
    IntMatrix a(2 * m, q);
    for (std::size_t b = 0; b < 2 * m * q; ++b) a(b / q, b % q) = ((bits >> b) & 1U) ? -1 : 1;
    return PairedMatrix(std::move(a));
  }

  std::size_t m() const noexcept { return a_.rows() / 2; }
  std::size_t q() const noexcept { return a_.cols(); }
  const IntMatrix& rows() const noexcept { return a_; }

  friend bool operator==(const PairedMatrix&, const PairedMatrix&) = default;

 private:
  IntMatrix a_;
};

struct PropertyReport {
  std::string property;  // "P" or "F_k"
  bool holds = false;
  std::size_t rank = 0;
  std::optional<std::size_t> k;
  bool rank_matches = true;
  bool property_p = false;
  bool first_k_independent = true;
  std::vector<std::size_t> failing_pairs;  // i such that deleting rows i, m+i keeps the rank
};

namespace detail {

inline IntMatrix without_pair(const IntMatrix& a, std::size_t i) {
  const std::size_t m = a.rows() / 2;
  const std::size_t drop[2] = {i - 1, m + i - 1};
  return a.without_rows(drop);
}

inline PropertyReport property_p_report(const PairedMatrix& a) {
  PropertyReport rep;
  rep.property = "P";
  rep.rank = rank_of(a.rows());
  for (std::size_t i = 1; i <= a.m(); ++i) {
    if (rank_of(without_pair(a.rows(), i)) + 1 > rep.rank) rep.failing_pairs.push_back(i);
  }
  rep.property_p = rep.failing_pairs.empty();
  rep.holds = rep.property_p;
  return rep;
}

// Smallest 1-based i <= limit whose row lies in the span of rows 1..i-1.
inline std::optional<std::size_t> first_dependent_row(const IntMatrix& a, std::size_t limit) {
  const auto pivots = rank_exact(a.first_rows(limit).transposed()).pivot_columns;
  for (std::size_t i = 0; i < limit; ++i) {
    if (i >= pivots.size() || pivots[i] != i) return i + 1;
  }
  return std::nullopt;
}

inline bool in_row_space(const IntMatrix& span, std::span<const std::int64_t> v) {
  IntMatrix row(1, v.size(), std::vector<std::int64_t>(v.begin(), v.end()));
  return rank_of(span.stacked(row)) == rank_of(span);
}

}  // namespace detail

// Deleting the paired rows i and m+i lowers the rank, for every i.
inline PropertyReport has_property_P(const PairedMatrix& a) { return detail::property_p_report(a); }

// Property P, rank exactly k, and rows 1..k independent. Requires m <= k <= 2m.
inline PropertyReport has_property_Fk(const PairedMatrix& a, std::size_t k) {
  if (k < a.m() || k > 2 * a.m())
    throw InputError("has_property_Fk: need m <= k <= 2m (m = " + std::to_string(a.m()) + ")");
  PropertyReport rep = detail::property_p_report(a);
  rep.property = "F_k";
  rep.k = k;
  rep.rank_matches = rep.rank == k;
  rep.first_k_independent = rank_of(a.rows().first_rows(k)) == k;
  rep.holds = rep.property_p && rep.rank_matches && rep.first_k_independent;
  return rep;
}

struct Swap {
  enum class Kind { Half, Pair };
  Kind kind = Kind::Half;
  std::size_t i = 0;  // 1-based, within 1..m
  std::size_t j = 0;  // PairSwap only, i < j <= m

  static Swap half(std::size_t i) { return {Kind::Half, i, 0}; }
  static Swap pair(std::size_t i, std::size_t j) { return {Kind::Pair, std::min(i, j), std::max(i, j)}; }

  std::string to_string() const {
    return kind == Kind::Half ? "HalfSwap(" + std::to_string(i) + ")"
                              : "PairSwap(" + std::to_string(i) + "," + std::to_string(j) + ")";
  }
  friend bool operator==(const Swap&, const Swap&) = default;
};

using SwapScript = std::vector<Swap>;

// HalfSwap(i): rows i <-> m+i. PairSwap(i, j): rows i <-> j and m+i <-> m+j.
inline PairedMatrix apply_swap(const PairedMatrix& a, const Swap& s) {
  const std::size_t m = a.m();
  std::vector<std::size_t> order(2 * m);
  for (std::size_t r = 0; r < 2 * m; ++r) order[r] = r;
  if (s.kind == Swap::Kind::Half) {
    if (s.i < 1 || s.i > m) throw InputError("HalfSwap: index outside 1..m");
    std::swap(order[s.i - 1], order[m + s.i - 1]);
  } else {
    if (s.i < 1 || s.i >= s.j || s.j > m) throw InputError("PairSwap: need 1 <= i < j <= m");
    std::swap(order[s.i - 1], order[s.j - 1]);
    std::swap(order[m + s.i - 1], order[m + s.j - 1]);
  }
  return PairedMatrix(a.rows().select_rows(order));
}

struct Reduction {
  SwapScript script;
  PairedMatrix result;
};

// Swaps a property-P matrix of rank k into property F_k. Each step works on
// the first row i <= k that depends on rows 1..i-1: for i <= m the partner
// row m+i is independent of all other rows (property P), so HalfSwap(i)
// fixes it; for i > m we take the smallest p > k with row p outside the span
// of rows 1..k whose PairSwap(i-m, p-m) moves the first dependent row
// strictly later. Property P is re-checked after every move.
inline Reduction reduce_P_to_Fk(const PairedMatrix& input) {
  if (!has_property_P(input).holds) throw InputError("reduce_P_to_Fk: input lacks property P");
  const std::size_t m = input.m();
  const std::size_t k = rank_of(input.rows());
  Reduction out{{}, input};
  auto witness = [&](const PairedMatrix& a) { return format_pm1_matrix(a.rows()); };
  auto progress_of = [&](const PairedMatrix& a) {
    return detail::first_dependent_row(a.rows(), k).value_or(k + 1);
  };

  for (;;) {
    const auto dep = detail::first_dependent_row(out.result.rows(), k);
    if (!dep) break;
    const std::size_t i = *dep;
    std::optional<Swap> move;
    if (i <= m) {
      move = Swap::half(i);
    } else {
      const IntMatrix lead = out.result.rows().first_rows(k);
      for (std::size_t p = k + 1; p <= 2 * m && !move; ++p) {
        if (detail::in_row_space(lead, out.result.rows().row(p - 1))) continue;
        const Swap cand = Swap::pair(i - m, p - m);
        if (progress_of(apply_swap(out.result, cand)) > i) move = cand;
      }
      if (!move)
        throw InvariantViolation("reduce_P_to_Fk: no row p > k makes progress at dependent row " +
                                     std::to_string(i),
                                 witness(out.result));
    }
    PairedMatrix next = apply_swap(out.result, *move);
    if (!has_property_P(next).holds)
      throw InvariantViolation("reduce_P_to_Fk: " + move->to_string() + " destroyed property P",
                               witness(out.result));
    if (progress_of(next) <= i)
      throw InvariantViolation("reduce_P_to_Fk: " + move->to_string() + " made no progress",
                               witness(out.result));
    out.script.push_back(*move);
    out.result = std::move(next);
  }
  if (!has_property_Fk(out.result, k).holds)
    throw InvariantViolation("reduce_P_to_Fk: result is not F_k", witness(out.result));
  return out;
}

// Leading exponent of the F_k count bound, as stated.
inline long long fk_count_bound(long long m, long long q, long long k) {
  if (k < m || k > 2 * m) throw InputError("fk_count_bound: need m <= k <= 2m");
  return (2 * m - k) * (k - m - q);
}

// The variant appearing on the last line of the counting argument.
inline long long fk_count_bound_proof_variant(long long m, long long q, long long k) {
  if (k < m || k > 2 * m) throw InputError("fk_count_bound: need m <= k <= 2m");
  return (2 * m - q) * (k - m - q);
}

// For F_k matrices and k-m < j <= min(k, m): every row i > k other than m+j
// lies in the span of rows 1..k with row j removed.
inline bool check_span_relation(const PairedMatrix& a, std::size_t j) {
  const std::size_t m = a.m();
  const std::size_t k = rank_of(a.rows());
  if (k < m || !has_property_Fk(a, k).holds)
    throw InputError("check_span_relation: matrix does not have property F_k");
  if (!(j + m > k && j <= std::min(k, m)))
    throw InputError("check_span_relation: need k-m < j <= min(k, m)");
  const IntMatrix lead = a.rows().first_rows(k);
  const std::size_t drop[1] = {j - 1};
  const IntMatrix kj = lead.without_rows(drop);
  for (std::size_t i = k + 1; i <= 2 * m; ++i) {
    if (i == m + j) continue;
    if (!detail::in_row_space(kj, a.rows().row(i - 1))) return false;
  }
  return true;
}

struct CensusRow {
  std::size_t m = 0;
  std::size_t q = 0;
  std::size_t k = 0;
  std::uint64_t count_p = 0;   // property P with rank k
  std::uint64_t count_fk = 0;  // property F_k
  long long bound_exponent = 0;
  long long bound_exponent_proof = 0;
};

struct Census {
  std::size_t m = 0;
  std::size_t q = 0;
  bool exhaustive = true;
  std::uint64_t population = 0;  // matrices examined
  std::uint64_t seed = 0;
  std::vector<CensusRow> rows;   // k = m .. 2m
};

inline constexpr std::size_t kExhaustiveCensusBits = 24;
inline constexpr std::uint64_t kMaxRejectionAttempts = 10'000'000;

// Exhaustive over all 2^{2mq} matrices when 2mq <= 24, otherwise `samples`
// uniform draws (capped at 10^7).
inline Census census(std::size_t m, std::size_t q, std::uint64_t samples = 100000,
                     std::uint64_t seed = 1, unsigned threads = 1) {
  if (m < 1 || q < 1) throw InputError("census: need m, q >= 1");
  Census out;
  out.m = m;
  out.q = q;
  out.seed = seed;
  const std::size_t bits = 2 * m * q;
  out.exhaustive = bits <= kExhaustiveCensusBits;
  out.population = out.exhaustive ? (std::uint64_t{1} << bits)
                                  : std::min<std::uint64_t>(samples, kMaxRejectionAttempts);

  const auto chunks = partition(out.population, 64);
  std::vector<std::vector<std::uint64_t>> p_counts(chunks.size(), std::vector<std::uint64_t>(2 * m + 1));
  std::vector<std::vector<std::uint64_t>> f_counts = p_counts;
  run_chunks(chunks, threads, [&](const ChunkRange& ch) {
    for (std::uint64_t idx = ch.begin; idx < ch.end; ++idx) {
      PairedMatrix a;
      if (out.exhaustive) {
        a = PairedMatrix::from_bits(m, q, idx);
      } else {
        SampleRng rng(seed, idx);
        a = PairedMatrix(random_pm1_matrix(2 * m, q, rng));
      }
      const auto rep = has_property_P(a);
      if (!rep.holds || rep.rank < m) continue;
      ++p_counts[ch.index][rep.rank];
      if (rank_of(a.rows().first_rows(rep.rank)) == rep.rank) ++f_counts[ch.index][rep.rank];
    }
  });
  for (std::size_t k = m; k <= 2 * m; ++k) {
    CensusRow row;
    row.m = m;
    row.q = q;
    row.k = k;
    for (std::size_t c = 0; c < chunks.size(); ++c) {
      row.count_p += p_counts[c][k];
      row.count_fk += f_counts[c][k];
    }
    row.bound_exponent = fk_count_bound(static_cast<long long>(m), static_cast<long long>(q),
                                        static_cast<long long>(k));
    row.bound_exponent_proof = fk_count_bound_proof_variant(
        static_cast<long long>(m), static_cast<long long>(q), static_cast<long long>(k));
    out.rows.push_back(row);
  }
  return out;
}

struct FkSample {
  std::vector<PairedMatrix> instances;
  std::uint64_t attempts = 0;
};

// Rejection sampling of uniform F_k matrices.
inline FkSample sample_fk(std::size_t m, std::size_t q, std::size_t k, std::size_t wanted,
                          std::uint64_t seed, std::uint64_t max_attempts = kMaxRejectionAttempts) {
  if (k < m || k > 2 * m) throw InputError("sample_fk: need m <= k <= 2m");
  FkSample out;
  while (out.instances.size() < wanted && out.attempts < max_attempts) {
    SampleRng rng(seed, out.attempts++);
    PairedMatrix a(random_pm1_matrix(2 * m, q, rng));
    if (has_property_Fk(a, k).holds) out.instances.push_back(std::move(a));
  }
  return out;
}

}  // namespace normality
