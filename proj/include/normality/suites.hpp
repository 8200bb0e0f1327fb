#pragma once

// Seeded invariant suites shared by the command-line tool and the acceptance
// runner. Each suite returns pass/fail, counters, and the first witness.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bounds.hpp"
#include "core.hpp"
#include "counting.hpp"
#include "errors.hpp"
#include "exact_rank.hpp"
#include "matrix.hpp"
#include "perm_lemma.hpp"
#include "rng.hpp"
#include "signtxt.hpp"
#include "structure_props.hpp"

namespace normality {

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  std::map<std::string, std::uint64_t> counters;
  std::optional<std::string> witness;  // signtxt of the first failing input
  std::string witness_note;
  nlohmann::json details = nlohmann::json::object();
  double seconds = 0.0;

  void fail(const std::string& why, const std::string& matrix_text) {
    passed = false;
    ++failures;
    ++counters[why];
    if (!witness) {
      witness = matrix_text;
      witness_note = why;
    }
  }
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::size_t n = 3;  // recursion suite
  bool allow_long_run = false;
};

namespace detail {

class SuiteTimer {
 public:
  explicit SuiteTimer(SuiteResult& r) : r_(r), t0_(std::chrono::steady_clock::now()) {}
  ~SuiteTimer() { r_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }
  SuiteTimer(const SuiteTimer&) = delete;
  SuiteTimer& operator=(const SuiteTimer&) = delete;

 private:
  SuiteResult& r_;
  std::chrono::steady_clock::time_point t0_;
};

inline IntMatrix random_independent_rows(std::size_t k, std::size_t n, SampleRng& rng, bool signs) {
  for (;;) {
    IntMatrix b(k, n);
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < n; ++c) b(r, c) = signs ? rng.sign() : rng.between(-2, 2);
    if (rank_of(b) == k) return b;
  }
}

}  // namespace detail

// |Q_n ∩ S| <= 2^{dim S} on random subspaces and count <= 2^{m - rank} on
// random +/-1 systems.
inline SuiteResult suite_odlyzko(const SuiteOptions& opt, std::size_t subspaces = 1000, std::size_t systems = 1000) {
  SuiteResult r;
  r.name = "odlyzko";
  detail::SuiteTimer timer(r);
  std::uint64_t vertex_hits = 0;
  std::uint64_t tight = 0;
  for (std::size_t s = 0; s < subspaces; ++s) {
    SampleRng rng(opt.seed, s, 1);
    const auto n = static_cast<std::size_t>(rng.between(1, 14));
    const auto k = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(n)));
    // A third of the subspaces are spanned by vertices plus a planted
    // vertex-rich block, so that large intersections actually occur.
    const int flavour = static_cast<int>(s % 3);
    IntMatrix basis;
    if (flavour == 2) {
      basis = IntMatrix(k, n);
      for (std::size_t r0 = 0; r0 < k; ++r0)
        for (std::size_t c = 0; c < n; ++c) basis(r0, c) = (c % k == r0) ? 1 : 0;
    } else {
      basis = detail::random_independent_rows(k, n, rng, flavour == 0);
    }
    const Subspace sub(n, basis);
    const auto count = hypercube_intersection_count(sub);
    ++r.cases;
    vertex_hits += count;
    if (count == (std::uint64_t{1} << k)) ++tight;
    if (count > (std::uint64_t{1} << k))
      r.fail("subspace-exceeds-2^k", format_int_matrix(basis));
  }
  std::uint64_t solutions = 0;
  for (std::size_t s = 0; s < systems; ++s) {
    SampleRng rng(opt.seed, s, 2);
    const auto m = static_cast<std::size_t>(rng.between(1, 14));
    const auto k = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(m)));
    const IntMatrix a = random_pm1_matrix(k, m, rng);
    std::vector<std::int64_t> c(k, 0);
    if (s % 4 != 3) {
      for (std::size_t j = 0; j < m; ++j) {
        const int x = rng.sign();
        for (std::size_t i = 0; i < k; ++i) c[i] += a(i, j) * x;
      }
    } else {
      for (auto& v : c) v = rng.between(-static_cast<std::int64_t>(m), static_cast<std::int64_t>(m));
    }
    const auto count = solution_count(a, c);
    const std::size_t rk = rank_of(a);
    ++r.cases;
    solutions += count;
    if (count > (std::uint64_t{1} << (m - rk))) r.fail("system-exceeds-2^(m-r)", format_pm1_matrix(a));
  }
  r.details = {{"subspaces", subspaces}, {"systems", systems}, {"vertexHits", vertex_hits},
               {"tightSubspaces", tight}, {"solutions", solutions}};
  return r;
}

struct GreedyAudit {
  bool identity_ok = true;
  bool sigma_ok = true;
  bool normality_ok = true;
  bool s_ge_i = true;
  bool ranges_ok = true;
  std::vector<ABViolation> ab;
  std::vector<ConstraintViolation> obs;
  ProfileFit fit;
  std::optional<PropertyReport> tt_property;  // T_t read as a paired matrix
};

inline GreedyAudit audit_greedy(const SignMatrix& m, const GreedyTrace& tr) {
  GreedyAudit a;
  const std::size_t n = m.n();
  for (std::size_t i = 1; i <= n; ++i) {
    const auto& st = tr.steps[i - 1];
    const long lhs = static_cast<long>(tr.profile[i - 1]) - st.b + st.a;
    if (lhs != static_cast<long>(tr.profile[i])) a.identity_ok = false;
    if (st.s < i) a.s_ge_i = false;
    if (st.b < 0 || st.b > 2 || st.a < 0 || st.a > 1) a.ranges_ok = false;
  }
  a.sigma_ok = apply_permutation(m, tr.sigma) == tr.permuted;
  a.normality_ok = is_normal(m) == is_normal(tr.permuted);
  a.ab = check_ab(tr);
  a.fit = fit_kt(tr.profile);
  a.obs = check_obs1(static_cast<int>(n), a.fit.k, a.fit.t);
  const auto t = static_cast<std::size_t>(a.fit.t);
  if (t >= 1 && t + 1 < n) a.tt_property = has_property_P(PairedMatrix(build_T(tr.permuted, t)));
  return a;
}

// Deviating traces at n <= this are re-examined by exhaustive sigma search.
inline constexpr std::size_t kSigmaSearchInSuite = 8;

// Greedy traces on random matrices with n in [nmin, nmax]. `ab_only`
// restricts the verdict to the b / a monotonicity.
inline SuiteResult suite_perm_lemma(const SuiteOptions& opt, std::size_t count = 500, std::size_t nmin = 4,
                                    std::size_t nmax = 12, bool ab_only = false) {
  SuiteResult r;
  r.name = ab_only ? "ab-monotone" : "perm-lemma";
  detail::SuiteTimer timer(r);
  std::uint64_t tt_checked = 0;
  std::uint64_t tt_fail = 0;
  std::uint64_t raw_dev = 0;
  std::uint64_t fallbacks = 0;
  std::uint64_t searched = 0;
  std::uint64_t conformant_elsewhere = 0;
  std::map<std::string, std::uint64_t> obs_by_constraint;
  for (std::size_t s = 0; s < count; ++s) {
    SampleRng rng(opt.seed, s, 3);
    const auto n = static_cast<std::size_t>(rng.between(static_cast<std::int64_t>(nmin), static_cast<std::int64_t>(nmax)));
    const SignMatrix m = random_sign_matrix(n, rng);
    const auto tr = greedy_sigma(m);
    const auto a = audit_greedy(m, tr);
    ++r.cases;
    if (tr.prefilter_fallback) ++fallbacks;
    const std::string w = format_sign_matrix(m);
    if (!a.ab.empty()) r.fail("ab-monotonicity", w);
    if (!ab_only) {
      if (!a.identity_ok) r.fail("rank-update-identity", w);
      if (!a.sigma_ok) r.fail("sigma-reproduces-permuted", w);
      if (!a.normality_ok) r.fail("normality-preserved", w);
      if (!a.s_ge_i || !a.ranges_ok) r.fail("step-ranges", w);
      if (!a.fit.deviations.empty()) {
        r.fail("clamped-profile-conformance", w);
        if (n <= kSigmaSearchInSuite) {
          ++searched;
          if (find_conformant_sigma(m)) ++conformant_elsewhere;
        }
      }
      if (!a.obs.empty()) {
        r.fail("observation-constraints", w);
        for (const auto& v : a.obs) ++obs_by_constraint[v.constraint];
      }
    }
    if (!a.fit.raw_deviations.empty()) ++raw_dev;
    if (a.tt_property) {
      ++tt_checked;
      if (!a.tt_property->holds) ++tt_fail;
    }
  }
  r.details = {{"matrices", count},
               {"nRange", {nmin, nmax}},
               {"rawFormulaDeviations", raw_dev},
               {"prefilterFallbacks", fallbacks},
               {"observationViolationsByConstraint", obs_by_constraint},
               {"TtPropertyP", {{"checked", tt_checked}, {"failed", tt_fail}}},
               {"deviatingTracesSearched", searched},
               {"conformantSigmaExists", conformant_elsewhere}};
  return r;
}

inline SuiteResult suite_recursion(const SuiteOptions& opt) {
  SuiteResult r;
  r.name = "recursion";
  detail::SuiteTimer timer(r);
  if (opt.n == 4 && !opt.allow_long_run)
    throw CapabilityError("recursion suite at n = 4 needs --allow-long-run");
  const auto rep = verify_recursion_lemma_all(opt.n, IntMatrix(opt.n, opt.n), opt.threads);
  std::uint64_t conditionings = 0;
  std::uint64_t local = 0;
  std::uint64_t raw = 0;
  for (const auto& c : rep.cases) {
    for (const auto& st : c.steps) {
      ++r.cases;
      conditionings += st.conditionings;
      local += st.local_violations;
      raw += st.raw_violations;
      for (std::size_t v = 0; v < st.violations; ++v)
        r.fail("k=" + std::to_string(c.k) + ",t=" + std::to_string(c.t) + ",i=" + std::to_string(st.i),
               st.witness.value_or(""));
    }
  }
  r.details = {{"n", opt.n}, {"pairsKT", rep.cases.size()}, {"conditionings", conditionings},
               {"localFormViolations", local}, {"rawExponentViolations", raw}};
  return r;
}

// Exhaustive P -> F_k reduction plus the span relation on the F_k outputs.
inline SuiteResult suite_p_to_fk(const SuiteOptions& opt,
                                 const std::vector<std::pair<std::size_t, std::size_t>>& shapes = {
                                     {1, 1}, {1, 2}, {2, 2}, {2, 3}}) {
  SuiteResult r;
  r.name = "p-to-fk";
  detail::SuiteTimer timer(r);
  nlohmann::json per_shape = nlohmann::json::array();
  for (const auto& [m, q] : shapes) {
    const std::uint64_t total = std::uint64_t{1} << (2 * m * q);
    std::uint64_t with_p = 0;
    std::uint64_t reduced = 0;
    std::uint64_t half_swaps = 0;
    std::uint64_t pair_swaps = 0;
    std::uint64_t span_checks = 0;
    std::size_t longest = 0;
    for (std::uint64_t b = 0; b < total; ++b) {
      const auto a = PairedMatrix::from_bits(m, q, b);
      if (!has_property_P(a).holds) continue;
      ++with_p;
      ++r.cases;
      try {
        const auto red = reduce_P_to_Fk(a);
        const std::size_t k = rank_of(red.result.rows());
        if (!has_property_Fk(red.result, k).holds || red.script.size() > 2 * m) {
          r.fail("reduction-output", format_pm1_matrix(a.rows()));
          continue;
        }
        ++reduced;
        longest = std::max(longest, red.script.size());
        for (const auto& s : red.script) (s.kind == Swap::Kind::Half ? half_swaps : pair_swaps)++;
        for (std::size_t j = k - m + 1; j <= std::min(k, m); ++j) {
          ++span_checks;
          if (!check_span_relation(red.result, j)) r.fail("span-relation", format_pm1_matrix(red.result.rows()));
        }
      } catch (const InvariantViolation& e) {
        r.fail("reduction-invariant", e.witness());
      }
    }
    per_shape.push_back({{"m", m}, {"q", q}, {"matrices", total}, {"propertyP", with_p}, {"reduced", reduced},
                         {"halfSwaps", half_swaps}, {"pairSwaps", pair_swaps}, {"longestScript", longest},
                         {"spanRelationChecks", span_checks}});
  }
  (void)opt;
  r.details = {{"shapes", per_shape}};
  return r;
}

// C-normality of M and M_sigma agree on random (M, sigma, C), n <= 6.
inline SuiteResult suite_prop26(const SuiteOptions& opt, std::size_t count = 1000, std::size_t nmax = 6) {
  SuiteResult r;
  r.name = "prop26";
  detail::SuiteTimer timer(r);
  std::uint64_t positives = 0;
  for (std::size_t s = 0; s < count; ++s) {
    SampleRng rng(opt.seed, s, 4);
    const auto n = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(nmax)));
    const SignMatrix m = random_sign_matrix(n, rng);
    const Permutation sigma = random_permutation(n, rng);
    IntMatrix c;
    switch (s % 3) {
      case 0: c = apply_permutation(commutator(m), random_permutation(n, rng)); break;
      case 1: c = commutator(random_sign_matrix(n, rng)); break;
      default: c = IntMatrix(n, n); break;
    }
    const SignMatrix ms = apply_permutation(m, sigma);
    const auto w1 = is_c_normal(m, c);
    const auto w2 = is_c_normal(ms, c);
    ++r.cases;
    if (w1) ++positives;
    if (w1.has_value() != w2.has_value()) r.fail("c-normal-status-differs", format_sign_matrix(m));
    for (const auto& [mm, w] : {std::pair{&m, &w1}, std::pair{&ms, &w2}}) {
      if (*w && !(apply_permutation(c, **w) == commutator(*mm)))
        r.fail("witness-does-not-certify", format_sign_matrix(*mm));
    }
  }
  r.details = {{"triples", count}, {"cNormal", positives}};
  return r;
}

// Coverage of 95% Wilson intervals over seeds 1..runs for events with exactly
// known probability.
inline SuiteResult suite_calibration(const SuiteOptions& opt, std::size_t runs = 100, std::uint64_t samples = 20000,
                                     std::size_t min_covered = 93) {
  SuiteResult r;
  r.name = "calibration";
  detail::SuiteTimer timer(r);
  const double nu3 = enumerate_nu(3, 1).probability.get_d();
  struct Target {
    std::string name;
    EventSpec spec;
    double p;
  };
  const std::vector<Target> targets = {
      {"symmetric-n3", {Event::Symmetric, 3}, count_symmetric(3).get_d()},
      {"symmetric-n4", {Event::Symmetric, 4}, count_symmetric(4).get_d()},
      {"normal-n3", {Event::Normal, 3}, nu3},
  };
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& t : targets) {
    std::size_t covered = 0;
    for (std::size_t seed = 1; seed <= runs; ++seed) {
      const auto rep = montecarlo(t.spec, samples, seed, opt.threads);
      ++r.cases;
      if (rep.ci->contains(t.p)) ++covered;
    }
    if (covered < min_covered) r.fail("coverage-" + t.name, "");
    rows.push_back({{"event", t.name}, {"probability", t.p}, {"runs", runs}, {"samples", samples}, {"covered", covered}});
  }
  r.details = {{"events", rows}, {"minCovered", min_covered}};
  return r;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"odlyzko", "perm-lemma", "ab-monotone", "recursion",
                                                 "p-to-fk", "prop26",     "calibration"};
  return names;
}

inline SuiteResult run_suite(const std::string& name, const SuiteOptions& opt) {
  if (name == "odlyzko") return suite_odlyzko(opt);
  if (name == "perm-lemma") return suite_perm_lemma(opt);
  if (name == "ab-monotone") return suite_perm_lemma(opt, 500, 4, 12, true);
  if (name == "recursion") return suite_recursion(opt);
  if (name == "p-to-fk") return suite_p_to_fk(opt);
  if (name == "prop26") return suite_prop26(opt);
  if (name == "calibration") return suite_calibration(opt);
  throw InputError("unknown suite '" + name + "'");
}

}  // namespace normality
