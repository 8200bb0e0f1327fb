#pragma once

// Exact counts over all 2^{n^2} sign matrices, Monte Carlo estimates with
// Wilson intervals, and exact conditional probabilities for the recursion
// inequality at small n.

#include <gmpxx.h>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "core.hpp"
#include "errors.hpp"
#include "exact_rank.hpp"
#include "matrix.hpp"
#include "parallel.hpp"
#include "perm_lemma.hpp"
#include "rng.hpp"
#include "signtxt.hpp"
#include "structure_props.hpp"

namespace normality {

inline constexpr std::size_t kMaxDefaultEnumeration = 5;
inline constexpr std::size_t kMaxLongRunEnumeration = 6;
inline constexpr std::size_t kMaxCNormalEnumeration = 4;
inline constexpr double kWilsonZ95 = 1.959963984540054;

enum class CountMode { Exhaustive, MonteCarlo };

inline std::string to_string(CountMode m) { return m == CountMode::Exhaustive ? "exhaustive" : "montecarlo"; }

struct Interval {
  double low = 0.0;
  double high = 0.0;
  bool contains(double x) const { return low <= x && x <= high; }
};

inline Interval wilson_interval(std::uint64_t hits, std::uint64_t samples, double z = kWilsonZ95) {
  if (samples == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(samples);
  const double p = static_cast<double>(hits) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  // the endpoints at 0 and 1 are exact when no (or every) draw hits
  return {hits == 0 ? 0.0 : std::max(0.0, center - half), hits == samples ? 1.0 : std::min(1.0, center + half)};
}

struct CountReport {
  std::size_t n = 0;
  std::string event = "normal";
  CountMode mode = CountMode::Exhaustive;
  mpz_class total;
  mpz_class hits;
  mpq_class probability;  // exact for exhaustive runs, hits/samples otherwise
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::optional<Interval> ci;
  std::string note;
  double wall_seconds = 0.0;
};

// Fixed entries of D_i: the diagonal and the first i rows and columns.
struct ConditioningMask {
  std::size_t n = 0;
  std::size_t i = 0;

  // 1-based.
  bool contains(std::size_t a, std::size_t b) const { return a == b || a <= i || b <= i; }

  // Row-major bit set over the n^2 positions.
  std::uint64_t bits() const {
    std::uint64_t out = 0;
    for (std::size_t a = 1; a <= n; ++a)
      for (std::size_t b = 1; b <= n; ++b)
        if (contains(a, b)) out |= std::uint64_t{1} << ((a - 1) * n + (b - 1));
    return out;
  }

  std::size_t fixed_count() const { return static_cast<std::size_t>(std::popcount(bits())); }
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Gray-code walk over the low `low_bits` positions with the high positions
// fixed to `high`; the commutator's strict upper triangle is updated in O(n)
// per flip and a nonzero counter decides normality.
class NormalityWalker {
 public:
  explicit NormalityWalker(std::size_t n) : n_(n), m_(n * n), d_(n * n, 0) {}

  std::uint64_t count(std::uint64_t start_bits, std::size_t low_bits) {
    load(start_bits);
    std::uint64_t hits = nonzero_ == 0 ? 1 : 0;
    const std::uint64_t steps = std::uint64_t{1} << low_bits;
    for (std::uint64_t s = 1; s < steps; ++s) {
      flip(static_cast<std::size_t>(std::countr_zero(s)));
      if (nonzero_ == 0) ++hits;
    }
    return hits;
  }

 private:
  void load(std::uint64_t bits) {
    for (std::size_t b = 0; b < n_ * n_; ++b) m_[b] = ((bits >> b) & 1U) ? -1 : 1;
    nonzero_ = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i + 1; j < n_; ++j) {
        int v = 0;
        for (std::size_t l = 0; l < n_; ++l) v += m_[i * n_ + l] * m_[j * n_ + l] - m_[l * n_ + i] * m_[l * n_ + j];
        d_[i * n_ + j] = v;
        if (v != 0) ++nonzero_;
      }
    }
  }

  void add(std::size_t a, std::size_t b, int v) {
    if (a == b || v == 0) return;
    if (a > b) std::swap(a, b);
    int& x = d_[a * n_ + b];
    const bool was = x != 0;
    x += v;
    const bool is = x != 0;
    if (was && !is) --nonzero_;
    if (!was && is) ++nonzero_;
  }

  void flip(std::size_t pos) {
    const std::size_t r = pos / n_;
    const std::size_t c = pos % n_;
    const int delta = -2 * m_[pos];
    for (std::size_t j = 0; j < n_; ++j) {
      if (j != r) add(r, j, delta * m_[j * n_ + c]);
      if (j != c) add(c, j, -delta * m_[r * n_ + j]);
    }
    m_[pos] = static_cast<std::int8_t>(-m_[pos]);
  }

  std::size_t n_;
  std::vector<std::int8_t> m_;
  std::vector<int> d_;
  std::size_t nonzero_ = 0;
};

inline CountReport exhaustive_report(std::size_t n, const std::string& event, const mpz_class& hits) {
  CountReport rep;
  rep.n = n;
  rep.event = event;
  rep.mode = CountMode::Exhaustive;
  rep.total = mpz_class(1) << static_cast<mp_bitcnt_t>(n * n);
  rep.hits = hits;
  rep.probability = mpq_class(hits, rep.total);
  rep.probability.canonicalize();
  return rep;
}

}  // namespace detail

// Exact number of normal n x n sign matrices. n <= 5, or n <= 6 with
// `allow_long_run`.
inline CountReport enumerate_nu(std::size_t n, unsigned threads = 1, bool allow_long_run = false) {
  if (n < 1) throw InputError("enumerate_nu: n must be positive");
  const std::size_t cap = allow_long_run ? kMaxLongRunEnumeration : kMaxDefaultEnumeration;
  if (n > cap)
    throw CapabilityError("enumerate_nu: n = " + std::to_string(n) + " exceeds " + std::to_string(cap) +
                          (allow_long_run ? "" : " (use --allow-long-run for n = 6)"));
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t bits = n * n;
  const std::size_t high_bits = std::min<std::size_t>(bits, 10);
  const std::size_t low_bits = bits - high_bits;
  const auto chunks = partition(std::uint64_t{1} << high_bits, std::size_t{1} << high_bits);
  std::vector<std::uint64_t> hits(chunks.size(), 0);
  run_chunks(chunks, threads, [&](const ChunkRange& ch) {
    detail::NormalityWalker walker(n);
    for (std::uint64_t h = ch.begin; h < ch.end; ++h) hits[ch.index] += walker.count(h << low_bits, low_bits);
  });
  mpz_class total_hits = 0;
  for (auto h : hits) total_hits += mpz_class(static_cast<unsigned long>(h));
  auto rep = detail::exhaustive_report(n, "normal", total_hits);
  rep.wall_seconds = detail::seconds_since(t0);
  return rep;
}

namespace detail {

// Cheap necessary condition for D == C_sigma: zero diagonal in C and equal
// multisets of strict-upper entries.
inline bool same_entry_multiset(const IntMatrix& d, const IntMatrix& c) {
  const std::size_t n = d.rows();
  std::vector<std::int64_t> a;
  std::vector<std::int64_t> b;
  for (std::size_t i = 0; i < n; ++i) {
    if (c(i, i) != d(i, i)) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      a.push_back(d(i, j));
      b.push_back(c(i, j));
    }
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

inline bool c_normal_fast(const SignMatrix& m, const IntMatrix& c) {
  if (c.is_zero()) return is_normal(m);
  if (!(c == c.transposed())) return false;
  if (!same_entry_multiset(commutator(m), c)) return false;
  return is_c_normal(m, c, m.n()).has_value();
}

}  // namespace detail

// Exact number of C-normal matrices, n <= 4.
inline CountReport enumerate_c_normal(std::size_t n, const IntMatrix& c, unsigned threads = 1) {
  if (c.rows() != n || c.cols() != n) throw InputError("enumerate_c_normal: C must be n x n");
  if (n > kMaxCNormalEnumeration)
    throw CapabilityError("enumerate_c_normal: n = " + std::to_string(n) + " > " +
                          std::to_string(kMaxCNormalEnumeration));
  if (c.is_zero()) {
    auto rep = enumerate_nu(n, threads);
    rep.event = "c-normal";
    return rep;
  }
  const auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t total = std::uint64_t{1} << (n * n);
  const auto chunks = partition(total, 64);
  std::vector<std::uint64_t> hits(chunks.size(), 0);
  run_chunks(chunks, threads, [&](const ChunkRange& ch) {
    for (std::uint64_t b = ch.begin; b < ch.end; ++b)
      if (detail::c_normal_fast(SignMatrix::from_bits(n, b), c)) ++hits[ch.index];
  });
  mpz_class h = 0;
  for (auto x : hits) h += mpz_class(static_cast<unsigned long>(x));
  auto rep = detail::exhaustive_report(n, "c-normal", h);
  rep.wall_seconds = detail::seconds_since(t0);
  return rep;
}

// 2^{n(n+1)/2} / 2^{n^2}.
inline mpq_class count_symmetric(std::size_t n) {
  mpq_class p(mpz_class(1), mpz_class(1) << static_cast<mp_bitcnt_t>(n * (n - 1) / 2));
  p.canonicalize();
  return p;
}

inline CountReport enumerate_symmetric(std::size_t n) {
  if (n < 1 || n > 4) throw CapabilityError("enumerate_symmetric: exhaustive check limited to n <= 4");
  const std::uint64_t total = std::uint64_t{1} << (n * n);
  std::uint64_t hits = 0;
  for (std::uint64_t b = 0; b < total; ++b)
    if (SignMatrix::from_bits(n, b).is_symmetric()) ++hits;
  return detail::exhaustive_report(n, "symmetric", mpz_class(static_cast<unsigned long>(hits)));
}

enum class Event { Normal, Symmetric, PropertyP, ProfileConformance };

inline std::string to_string(Event e) {
  switch (e) {
    case Event::Normal: return "normal";
    case Event::Symmetric: return "symmetric";
    case Event::PropertyP: return "propertyP";
    case Event::ProfileConformance: return "profileConformance";
  }
  return "?";
}

inline Event parse_event(const std::string& s) {
  if (s == "normal") return Event::Normal;
  if (s == "symmetric") return Event::Symmetric;
  if (s == "propertyP") return Event::PropertyP;
  if (s == "profileConformance") return Event::ProfileConformance;
  throw InputError("unknown event '" + s + "'");
}

struct EventSpec {
  Event event = Event::Normal;
  std::size_t n = 3;
  std::size_t m = 2;  // propertyP only
  std::size_t q = 2;  // propertyP only
};

inline bool sample_event(const EventSpec& e, SampleRng& rng) {
  switch (e.event) {
    case Event::Normal: return is_normal(random_sign_matrix(e.n, rng));
    case Event::Symmetric: return random_sign_matrix(e.n, rng).is_symmetric();
    case Event::PropertyP: return has_property_P(PairedMatrix(random_pm1_matrix(2 * e.m, e.q, rng))).holds;
    case Event::ProfileConformance: {
      const auto trace = greedy_sigma(random_sign_matrix(e.n, rng));
      return fit_kt(trace.profile).deviations.empty();
    }
  }
  return false;
}

// Frequency of `e` over `samples` draws; sample s uses SampleRng(seed, s).
inline CountReport montecarlo(const EventSpec& e, std::uint64_t samples, std::uint64_t seed,
                              unsigned threads = 1) {
  if (samples < 1) throw InputError("montecarlo: samples must be at least 1");
  if (e.n < 1) throw InputError("montecarlo: n must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  const auto chunks = partition(samples, 256);
  std::vector<std::uint64_t> hits(chunks.size(), 0);
  run_chunks(chunks, threads, [&](const ChunkRange& ch) {
    for (std::uint64_t s = ch.begin; s < ch.end; ++s) {
      SampleRng rng(seed, s);
      if (sample_event(e, rng)) ++hits[ch.index];
    }
  });
  std::uint64_t h = 0;
  for (auto x : hits) h += x;
  CountReport rep;
  rep.n = e.event == Event::PropertyP ? 2 * e.m : e.n;
  rep.event = to_string(e.event);
  rep.mode = CountMode::MonteCarlo;
  rep.total = mpz_class(static_cast<unsigned long>(samples));
  rep.hits = mpz_class(static_cast<unsigned long>(h));
  rep.probability = mpq_class(rep.hits, rep.total);
  rep.probability.canonicalize();
  rep.samples = samples;
  rep.seed = seed;
  rep.ci = wilson_interval(h, samples);
  if (h == 0) rep.note = "no hits: the estimate is an upper-bound observation only";
  rep.wall_seconds = detail::seconds_since(t0);
  return rep;
}

struct RecursionStep {
  std::size_t i = 0;
  int exponent = 0;      // min(R_clamped(i-1), 2n-2i)
  int raw_exponent = 0;  // min(R_printed(i-1), 2n-2i)
  std::size_t conditionings = 0;  // attainable D_{i-1}
  mpq_class lhs_sup;              // sup over D_{i-1}
  mpq_class sup_next;             // sup over D_i
  mpq_class rhs;                  // 2^{-exponent} sup_next
  std::size_t violations = 0;
  std::size_t local_violations = 0;  // against the sup over D_i extending D_{i-1} (diagnostic)
  std::size_t raw_violations = 0;    // with raw_exponent (diagnostic)
  std::optional<std::string> witness;  // a member matrix with a violating D_{i-1}
};

struct RecursionCase {
  int k = 0;
  int t = 0;
  std::uint64_t members = 0;
  std::vector<RecursionStep> steps;
  std::size_t violations() const {
    std::size_t v = 0;
    for (const auto& s : steps) v += s.violations;
    return v;
  }
};

struct RecursionReport {
  std::size_t n = 0;
  IntMatrix c;
  std::vector<RecursionCase> cases;
  double wall_seconds = 0.0;
  std::size_t violations() const {
    std::size_t v = 0;
    for (const auto& c : cases) v += c.violations();
    return v;
  }
};

namespace detail {

struct MatrixFacts {
  std::vector<bool> c_normal;
  std::vector<std::vector<std::uint8_t>> profile;
};

inline MatrixFacts matrix_facts(std::size_t n, const IntMatrix& c, unsigned threads) {
  const std::uint64_t total = std::uint64_t{1} << (n * n);
  MatrixFacts f;
  f.c_normal.assign(total, false);
  f.profile.assign(total, {});
  std::vector<std::uint8_t> cn(total, 0);
  const auto chunks = partition(total, 64);
  run_chunks(chunks, threads, [&](const ChunkRange& ch) {
    for (std::uint64_t b = ch.begin; b < ch.end; ++b) {
      const auto m = SignMatrix::from_bits(n, b);
      cn[b] = c_normal_fast(m, c) ? 1 : 0;
      const auto p = rank_profile(m);
      f.profile[b].assign(p.ranks.begin(), p.ranks.end());
    }
  });
  for (std::uint64_t b = 0; b < total; ++b) f.c_normal[b] = cn[b] != 0;
  return f;
}

// c1 / 2^{f1} <= 2^{-e} c2 / 2^{f2}; e may be negative (raw exponents).
inline bool ratio_le(std::uint64_t c1, std::size_t f1, int e, std::uint64_t c2, std::size_t f2) {
  const long left = static_cast<long>(f2) + e;
  const long right = static_cast<long>(f1);
  const long base = std::min(left, right);
  mpz_class lhs = mpz_class(static_cast<unsigned long>(c1)) << static_cast<mp_bitcnt_t>(left - base);
  mpz_class rhs = mpz_class(static_cast<unsigned long>(c2)) << static_cast<mp_bitcnt_t>(right - base);
  return lhs <= rhs;
}

inline mpq_class ratio(std::uint64_t c, std::size_t f) {
  mpq_class q(mpz_class(static_cast<unsigned long>(c)), mpz_class(1) << static_cast<mp_bitcnt_t>(f));
  q.canonicalize();
  return q;
}

inline RecursionCase recursion_case(std::size_t n, int k, int t, const MatrixFacts& facts) {
  const std::uint64_t total = std::uint64_t{1} << (n * n);
  const int ni = static_cast<int>(n);
  std::vector<std::uint8_t> target(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    target[i] = static_cast<std::uint8_t>(r_formula_clamped(ni, k, t, static_cast<int>(i)));

  RecursionCase rc;
  rc.k = k;
  rc.t = t;
  std::vector<bool> member(total, false);
  for (std::uint64_t b = 0; b < total; ++b) {
    member[b] = facts.c_normal[b] && facts.profile[b] == target;
    if (member[b]) ++rc.members;
  }

  for (std::size_t i = 1; i <= n; ++i) {
    RecursionStep st;
    st.i = i;
    const int prev = r_formula_clamped(ni, k, t, static_cast<int>(i) - 1);
    const int prev_raw = r_formula(ni, k, t, static_cast<int>(i) - 1);
    const int dim = 2 * ni - 2 * static_cast<int>(i);
    st.exponent = std::min(prev, dim);
    st.raw_exponent = std::min(prev_raw, dim);

    const ConditioningMask outer{n, i - 1};
    const ConditioningMask inner{n, i};
    const std::uint64_t fo = outer.bits();
    const std::uint64_t fi = inner.bits();
    const std::size_t free_o = n * n - outer.fixed_count();
    const std::size_t free_i = n * n - inner.fixed_count();

    std::unordered_map<std::uint64_t, std::uint64_t> count_o;
    std::unordered_map<std::uint64_t, std::uint64_t> count_i;
    for (std::uint64_t b = 0; b < total; ++b) {
      if (!member[b]) continue;
      ++count_o[b & fo];
      ++count_i[b & fi];
    }
    std::uint64_t best_i = 0;
    for (const auto& [key, cnt] : count_i) best_i = std::max(best_i, cnt);
    // sup over D_i extending each D_{i-1}
    std::unordered_map<std::uint64_t, std::uint64_t> local_best;
    for (const auto& [key, cnt] : count_i) {
      auto& slot = local_best[key & fo];
      slot = std::max(slot, cnt);
    }

    std::uint64_t best_o = 0;
    std::optional<std::uint64_t> bad_key;
    std::vector<std::uint64_t> keys;
    keys.reserve(count_o.size());
    for (const auto& kv : count_o) keys.push_back(kv.first);
    std::sort(keys.begin(), keys.end());
    for (auto key : keys) {
      const std::uint64_t cnt = count_o[key];
      best_o = std::max(best_o, cnt);
      if (!ratio_le(cnt, free_o, st.exponent, best_i, free_i)) {
        ++st.violations;
        if (!bad_key) bad_key = key;
      }
      if (!ratio_le(cnt, free_o, st.exponent, local_best[key], free_i)) ++st.local_violations;
      if (!ratio_le(cnt, free_o, st.raw_exponent, best_i, free_i)) ++st.raw_violations;
    }
    st.conditionings = keys.size();
    st.lhs_sup = ratio(best_o, free_o);
    st.sup_next = ratio(best_i, free_i);
    st.rhs = st.sup_next / (mpq_class(mpz_class(1) << static_cast<mp_bitcnt_t>(st.exponent)));
    st.rhs.canonicalize();
    if (bad_key) {
      for (std::uint64_t b = 0; b < total; ++b) {
        if (member[b] && (b & fo) == *bad_key) {
          st.witness = format_sign_matrix(SignMatrix::from_bits(n, b));
          break;
        }
      }
    }
    rc.steps.push_back(std::move(st));
  }
  return rc;
}

}  // namespace detail

inline void check_recursion_domain(std::size_t n, const IntMatrix& c) {
  if (n < 1) throw InputError("verify_recursion_lemma: n must be positive");
  if (c.rows() != n || c.cols() != n) throw InputError("verify_recursion_lemma: C must be n x n");
  if (n > kMaxCNormalEnumeration)
    throw CapabilityError("verify_recursion_lemma: n = " + std::to_string(n) + " > " +
                          std::to_string(kMaxCNormalEnumeration));
}

// Exact check of
//   P(M in M_{k,t} | D_{i-1}) <= 2^{-min(R(i-1), 2n-2i)} sup_{D_i} P(M in M_{k,t} | D_i)
// for every i and every attainable D_{i-1}. Membership in M_{k,t}: C-normal
// and rank profile equal to the clamped R_{k,t}.
inline RecursionCase verify_recursion_lemma(std::size_t n, const IntMatrix& c, int k, int t,
                                            unsigned threads = 1) {
  check_recursion_domain(n, c);
  detail::check_kt(static_cast<int>(n), k, t, 0);
  return detail::recursion_case(n, k, t, detail::matrix_facts(n, c, threads));
}

// Every 0 <= k <= t <= n.
inline RecursionReport verify_recursion_lemma_all(std::size_t n, const IntMatrix& c, unsigned threads = 1) {
  check_recursion_domain(n, c);
  const auto t0 = std::chrono::steady_clock::now();
  const auto facts = detail::matrix_facts(n, c, threads);
  RecursionReport rep;
  rep.n = n;
  rep.c = c;
  for (int k = 0; k <= static_cast<int>(n); ++k)
    for (int t = k; t <= static_cast<int>(n); ++t) rep.cases.push_back(detail::recursion_case(n, k, t, facts));
  rep.wall_seconds = detail::seconds_since(t0);
  return rep;
}

}  // namespace normality
