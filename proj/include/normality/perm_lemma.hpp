#pragma once

// The greedy permutation that shapes the rank profile of M_sigma, the target
// profile R_{k,t}, profile fitting and the monotonicity / feasibility checks
// that the profile shape is supposed to obey.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "core.hpp"
#include "errors.hpp"
#include "exact_rank.hpp"
#include "matrix.hpp"

namespace normality {

namespace detail {
inline void check_kt(int n, int k, int t, int i) {
  if (n < 1 || k < 0 || k > t || t > n) throw InputError("r_formula: need 0 <= k <= t <= n");
  if (i < 0 || i > n) throw InputError("r_formula: need 0 <= i <= n");
}
}  // namespace detail

// Four-branch target profile, evaluated as printed: rise to k, plateau to t,
// slope -1 up to 2n-k-t, slope -2 to n. i = 0 yields 0.
inline int r_formula(int n, int k, int t, int i) {
  detail::check_kt(n, k, t, i);
  if (0 < i && i <= k) return i;
  if (k < i && i <= t) return k;
  if (t < i && i <= 2 * n - k - t) return k + t - i;
  if (2 * n - k - t < i && i <= n) return 2 * n - 2 * i;
  return 0;
}

// Truncated to the feasible rank range of T_i, which has 2(n-i-1) rows and i
// columns.
inline int r_formula_clamped(int n, int k, int t, int i) {
  const int raw = r_formula(n, k, t, i);
  return std::max(0, std::min({raw, i, 2 * (n - i - 1)}));
}

struct GreedyStep {
  std::size_t i = 0;  // 1-based step
  std::size_t s = 0;  // sigma_i = (i, s), s >= i
  int a = 0;          // rank gain from adding column i
  int b = 0;          // rank drop from deleting the two rows of index i+1
};

struct GreedyTrace {
  Permutation sigma;  // apply_permutation(M, sigma) == permuted
  std::vector<GreedyStep> steps;
  SignMatrix permuted;
  RankProfile profile;
  bool prefilter_fallback = false;  // a modular key disagreed with exact rank
};

namespace detail {

// T_{i-1} with the two rows of position i+1 removed, i.e. T_i without its
// last column (1 <= i <= n-1).
inline IntMatrix reduced_T(const SignMatrix& m, std::size_t i) {
  const IntMatrix t = build_T(m, i - 1);
  const std::size_t h = t.rows() / 2;
  const std::size_t drop[2] = {0, h};
  return t.without_rows(drop);
}

struct CandidateKey {
  std::size_t reduced = 0;  // rank after the row deletion (maximize: b is minimized)
  std::size_t full = 0;     // rank of the next T (maximize: a is maximized)
  std::size_t j = 0;        // smallest index wins remaining ties

  bool better_than(const CandidateKey& o) const {
    return std::tie(o.reduced, o.full, j) < std::tie(reduced, full, o.j);
  }
};

}  // namespace detail

// Greedy construction of sigma = sigma_n ∘ ... ∘ sigma_1, sigma_i = (i, s_i).
//
// Choosing the index at position i+1 is what fixes the transition
// T_{i-1} -> T_i: it decides which two rows are deleted (b_i) and which
// entries the new column i keeps (a_i). So step i+1 ranges over j >= i+1,
// minimizes b_i, then maximizes a_i, then takes the smallest j. Step 1 has no
// transition to fix and keeps s_1 = 1. Transition n starts from the zero-row
// T_{n-1} and records b_n = a_n = 0.
//
// Candidate keys are ranked by ranks mod 2^61-1 (lower bounds); the winner's
// key is re-derived with rank_exact, and on any disagreement every candidate
// is re-evaluated exactly.
inline GreedyTrace greedy_sigma(const SignMatrix& m) {
  const std::size_t n = m.n();
  GreedyTrace trace;
  trace.steps.resize(n);
  for (std::size_t i = 0; i < n; ++i) trace.steps[i].i = i + 1;

  SignMatrix cur = m;
  Permutation sigma = Permutation::identity(n);

  for (std::size_t pos = 1; pos <= n; ++pos) {
    // pos is the position being filled; it fixes transition pos-1.
    const std::size_t tr = pos - 1;
    std::size_t chosen = pos;
    if (tr >= 1 && tr <= n - 1) {
      auto key_of = [&](std::size_t j, bool exact) {
        const SignMatrix cand = cur.conjugated_by_transposition(pos - 1, j - 1);
        const IntMatrix red = detail::reduced_T(cand, tr);
        const IntMatrix full = build_T(cand, tr);
        detail::CandidateKey key;
        key.j = j;
        key.reduced = exact ? rank_of(red) : rank_mod_p(red);
        key.full = exact ? rank_of(full) : rank_mod_p(full);
        return key;
      };
      auto pick = [&](bool exact) {
        detail::CandidateKey best = key_of(pos, exact);
        for (std::size_t j = pos + 1; j <= n; ++j) {
          auto key = key_of(j, exact);
          if (key.better_than(best)) best = key;
        }
        return best;
      };
      detail::CandidateKey best = pick(false);
      const auto confirmed = key_of(best.j, true);
      if (confirmed.reduced != best.reduced || confirmed.full != best.full) {
        trace.prefilter_fallback = true;
        best = pick(true);
      }
      chosen = best.j;
    }
    cur = cur.conjugated_by_transposition(pos - 1, chosen - 1);
    sigma = compose(Permutation::transposition(n, pos, chosen), sigma);
    trace.steps[pos - 1].s = chosen;

    if (tr >= 1 && tr <= n - 1) {
      const std::size_t before = rank_of(build_T(cur, tr - 1));
      const std::size_t red = rank_of(detail::reduced_T(cur, tr));
      const std::size_t after = rank_of(build_T(cur, tr));
      trace.steps[tr - 1].b = static_cast<int>(before - red);
      trace.steps[tr - 1].a = static_cast<int>(after - red);
    }
  }
  trace.steps[n - 1].a = 0;
  trace.steps[n - 1].b = 0;

  trace.sigma = sigma;
  trace.permuted = cur;
  trace.profile = rank_profile(cur);
  return trace;
}

struct ProfileDeviation {
  std::size_t index = 0;
  int measured = 0;
  int formula = 0;
};

struct ProfileFit {
  int k = 0;
  int t = 0;
  std::vector<ProfileDeviation> deviations;      // against r_formula_clamped
  std::vector<ProfileDeviation> raw_deviations;  // against the printed formula
};

// k = max rank, t = last index attaining it.
inline ProfileFit fit_kt(const RankProfile& profile) {
  const int n = static_cast<int>(profile.n());
  ProfileFit fit;
  for (int i = 0; i <= n; ++i) {
    const int r = static_cast<int>(profile[i]);
    if (r >= fit.k) {
      fit.k = r;
      fit.t = i;
    }
  }
  for (int i = 1; i <= n; ++i) {
    const int r = static_cast<int>(profile[i]);
    const int clamped = r_formula_clamped(n, fit.k, fit.t, i);
    const int raw = r_formula(n, fit.k, fit.t, i);
    if (r != clamped) fit.deviations.push_back({static_cast<std::size_t>(i), r, clamped});
    if (r != raw) fit.raw_deviations.push_back({static_cast<std::size_t>(i), r, raw});
  }
  return fit;
}

inline constexpr std::size_t kMaxSigmaSearch = 9;

// Exhaustive search over S_n for a sigma whose rank profile matches the
// clamped formula at its own fitted (k, t). n <= 9.
inline std::optional<Permutation> find_conformant_sigma(const SignMatrix& m) {
  const std::size_t n = m.n();
  if (n > kMaxSigmaSearch)
    throw CapabilityError("find_conformant_sigma: n = " + std::to_string(n) + " > " +
                          std::to_string(kMaxSigmaSearch));
  std::vector<std::size_t> img(n);
  for (std::size_t i = 0; i < n; ++i) img[i] = i;
  do {
    auto sigma = Permutation::from_zero_based(img);
    if (fit_kt(rank_profile(apply_permutation(m, sigma))).deviations.empty()) return sigma;
  } while (std::next_permutation(img.begin(), img.end()));
  return std::nullopt;
}

struct ABViolation {
  std::size_t i = 0;  // 1-based
  std::string kind;   // "b-decreases" or "a-increases-within-block"
  int previous = 0;
  int current = 0;
};

// b must be non-decreasing; a must be non-increasing while b stays constant.
inline std::vector<ABViolation> check_ab(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw InputError("check_ab: a and b lengths differ");
  std::vector<ABViolation> out;
  for (std::size_t i = 1; i < b.size(); ++i) {
    if (b[i] < b[i - 1]) {
      out.push_back({i + 1, "b-decreases", b[i - 1], b[i]});
    } else if (b[i] == b[i - 1] && a[i] > a[i - 1]) {
      out.push_back({i + 1, "a-increases-within-block", a[i - 1], a[i]});
    }
  }
  return out;
}

// Steps 1..n-1 of a trace; step n enters the zero-row boundary and carries
// no rank information.
inline std::vector<ABViolation> check_ab(const GreedyTrace& trace) {
  std::vector<int> a;
  std::vector<int> b;
  for (std::size_t i = 0; i + 1 < trace.steps.size(); ++i) {
    a.push_back(trace.steps[i].a);
    b.push_back(trace.steps[i].b);
  }
  return check_ab(a, b);
}

struct ConstraintViolation {
  std::string constraint;
  double slack = 0.0;  // negative when violated
};

// The four constraints on (k, t) read off the profile shape.
inline std::vector<ConstraintViolation> check_obs1(int n, int k, int t) {
  std::vector<ConstraintViolation> out;
  if (t < n - k - 2) out.push_back({"t >= n-k-2", static_cast<double>(t - (n - k - 2))});
  if (3 * k > 2 * n) out.push_back({"k <= 2n/3", 2.0 * n / 3.0 - k});
  if (2 * t + k > 2 * n) out.push_back({"t + k/2 <= n", n - t - k / 2.0});
  if (t + k < n) out.push_back({"t + k >= n", static_cast<double>(t + k - n)});
  return out;
}

}  // namespace normality
