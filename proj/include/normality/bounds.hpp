#pragma once

// Leading-order exponents (coefficients of n^2) of the probability bounds,
// the six boundary cases of the min-max over (k, t), and the self-improving
// fixed point for alpha. Everything here is double precision with n = 1
// unless an explicit n is passed.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace normality {

inline double f_bound(double alpha, double n, double k, double t) {
  return (1.0 - alpha) * t * t - k * k / 2.0 - n * n + n * k;
}

inline double g1_bound(double n, double k, double t) {
  return t * t - 3.0 * k * k + 2.0 * k * n + k * t - 2.0 * n * t;
}

inline double g2_bound(double n, double k, double t) {
  return n * n + k * k + t * t + k * t - 2.0 * k * n - 2.0 * n * t;
}

// The exponent of the M_{k,t} bound given alpha; same formula as f.
inline double lemma33_bound(double alpha, double n, double k, double t) { return f_bound(alpha, n, k, t); }

inline constexpr double kFeasibilitySlack = 1e-12;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct FeasibilityOptions {
  // The profile rises to k before its plateau ends at t, so k <= t; the
  // three emptiness conditions alone do not impose it.
  bool require_k_le_t = true;
};

// M_{k,t} is nonempty only if k + t >= n, k <= 2n/3 and t + k/2 <= n.
inline bool feasible(double n, double k, double t, FeasibilityOptions opt = {}) {
  const double e = kFeasibilitySlack;
  if (k < -e || t < -e || t > n + e) return false;
  if (k + t < n - e) return false;
  if (k > 2.0 * n / 3.0 + e) return false;
  if (t + k / 2.0 > n + e) return false;
  if (opt.require_k_le_t && k > t + e) return false;
  return true;
}

// The g-side of the bound: g1 below k = n/2, g2 above.
inline double g_bound(double n, double k, double t) {
  return k <= n / 2.0 ? g1_bound(n, k, t) : g2_bound(n, k, t);
}

inline double combined_bound(double alpha, double n, double k, double t) {
  return std::min(g_bound(n, k, t), f_bound(alpha, n, k, t));
}

struct Lemma31Value {
  bool in_range = false;
  double value = kInfinity;   // +inf outside the stated range
  bool boundary = false;      // k == n/2, both branches evaluated
  bool branches_agree = true;
};

// Range: 0 < k <= 2n/3 and k/2 < n - t <= k (and k <= t, see FeasibilityOptions).
inline Lemma31Value lemma31_bound(double n, double k, double t, FeasibilityOptions opt = {}) {
  Lemma31Value v;
  const double e = kFeasibilitySlack;
  const double gap = n - t;
  v.in_range = k > e && k <= 2.0 * n / 3.0 + e && k / 2.0 < gap - e && gap <= k + e &&
               (!opt.require_k_le_t || k <= t + e);
  if (!v.in_range) return v;
  const double a = g1_bound(n, k, t);
  const double b = g2_bound(n, k, t);
  if (std::abs(k - n / 2.0) <= e) {
    v.boundary = true;
    v.value = std::min(a, b);
    v.branches_agree = std::abs(a - b) <= 1e-12 * std::max(1.0, n * n);
  } else {
    v.value = k > n / 2.0 ? b : a;
  }
  return v;
}

// Self-consistent root of f(alpha, 1, k, t) = -alpha (f is affine in alpha).
inline std::optional<double> alpha_from_f(double k, double t) {
  const double denom = 1.0 - t * t;
  if (std::abs(denom) < 1e-14) return std::nullopt;
  return (1.0 - k + k * k / 2.0 - t * t) / denom;
}

// The same root by bisection on alpha in [lo, hi], for cross-checking.
inline std::optional<double> alpha_from_f_bisect(double k, double t, double lo = -4.0, double hi = 4.0) {
  auto h = [&](double a) { return f_bound(a, 1.0, k, t) + a; };
  double hl = h(lo);
  const double hh = h(hi);
  if ((hl > 0) == (hh > 0)) return std::nullopt;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double hm = h(mid);
    if ((hm > 0) == (hl > 0)) {
      lo = mid;
      hl = hm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct Optimum1d {
  double x = 0.0;
  double value = kInfinity;
  bool found = false;
  std::size_t excluded = 0;  // grid points outside the domain (value +inf)
};

inline constexpr double kGridStep = 1e-4;
inline constexpr double kRefineTol = 1e-7;

// Minimum of phi over [lo, hi]: grid scan with step `step`, then golden-section
// refinement in the bracket around the best grid point. phi returns +inf
// outside its domain.
inline Optimum1d minimize_1d(const std::function<double(double)>& phi, double lo, double hi,
                             double step = kGridStep, double tol = kRefineTol) {
  Optimum1d best;
  const auto cells = static_cast<std::size_t>(std::ceil((hi - lo) / step));
  std::size_t best_j = 0;
  for (std::size_t j = 0; j <= cells; ++j) {
    const double x = std::min(hi, lo + static_cast<double>(j) * step);
    const double v = phi(x);
    if (!std::isfinite(v)) {
      ++best.excluded;
      continue;
    }
    if (!best.found || v < best.value) {
      best = {x, v, true, best.excluded};
      best_j = j;
    }
  }
  if (!best.found) return best;
  double a = std::max(lo, lo + (static_cast<double>(best_j) - 1.0) * step);
  double b = std::min(hi, lo + (static_cast<double>(best_j) + 1.0) * step);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = phi(c);
  double fd = phi(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = phi(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = phi(d);
    }
  }
  for (double x : {a, b, 0.5 * (a + b)}) {
    const double v = phi(x);
    if (std::isfinite(v) && v < best.value) {
      best.x = x;
      best.value = v;
    }
  }
  return best;
}

inline constexpr std::array<double, 6> kCaseTargets = {0.425, 0.307, 0.3125, 0.323, 0.302, 0.307};

struct CaseResult {
  int case_id = 0;
  double worst_k = 0.0;
  double worst_t = 0.0;
  double value = 0.0;   // implied lower bound on alpha
  double target = 0.0;  // the printed constant
  bool converged = false;
  // Value of the printed closed-form expressions, where they differ in form
  // from the computation above.
  std::optional<double> printed_value;
  std::optional<double> printed_crossing;  // Case 1: where the two printed curves meet
  double closed_form_discrepancy = 0.0;    // printed k(t) or alpha_f vs direct root finding
  std::size_t excluded_points = 0;         // negative discriminant or outside the region
  std::string note;
};

namespace detail {

inline CaseResult make_case(int id) {
  CaseResult r;
  r.case_id = id;
  r.target = kCaseTargets[static_cast<std::size_t>(id - 1)];
  return r;
}

// Case 5: k from f = g1; Case 6: k from f = g2.
inline std::optional<double> printed_k(int id, double alpha, double t) {
  if (id == 5) {
    const double disc = (t + 1) * (t + 1) - 5.0 * (4.0 * t - 2.0 - 2.0 * alpha * t * t);
    if (disc < 0) return std::nullopt;
    return (t + 1.0 + std::sqrt(disc)) / 5.0;
  }
  const double disc = (t - 3) * (t - 3) - 3.0 * (4.0 - 4.0 * t + 2.0 * alpha * t * t);
  if (disc < 0) return std::nullopt;
  return (3.0 - t - std::sqrt(disc)) / 3.0;
}

// Root of f - g in k on [lo, hi] by bisection, if there is a sign change.
inline std::optional<double> root_k(int id, double alpha, double t, double lo, double hi) {
  auto h = [&](double k) {
    return f_bound(alpha, 1.0, k, t) - (id == 5 ? g1_bound(1.0, k, t) : g2_bound(1.0, k, t));
  };
  double hl = h(lo);
  const double hh = h(hi);
  if (hl == 0) return lo;
  if (hh == 0) return hi;
  if ((hl > 0) == (hh > 0)) return std::nullopt;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double hm = h(mid);
    if ((hm > 0) == (hl > 0)) {
      lo = mid;
      hl = hm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline CaseResult curve_case(int id, double alpha, FeasibilityOptions opt) {
  CaseResult r = make_case(id);
  const double klo = id == 5 ? 0.0 : 0.5;
  const double khi = id == 5 ? 0.5 : 2.0 / 3.0;
  auto k_of = [&](double t) -> std::optional<double> {
    auto k = printed_k(id, alpha, t);
    if (!k || *k < klo - kFeasibilitySlack || *k > khi + kFeasibilitySlack) return std::nullopt;
    if (!feasible(1.0, *k, t, opt)) return std::nullopt;
    return k;
  };
  auto phi = [&](double t) {
    const auto k = k_of(t);
    return k ? -f_bound(alpha, 1.0, *k, t) : kInfinity;
  };
  const auto best = minimize_1d(phi, 0.0, 1.0);
  r.excluded_points = best.excluded;
  if (!best.found) {
    r.value = kInfinity;
    r.note = "no real feasible point on the f = g curve";
    return r;
  }
  r.worst_t = best.x;
  r.worst_k = *k_of(best.x);
  r.value = best.value;
  r.converged = true;
  // Cross-check the printed root against bisection on f - g along a t grid.
  for (double t = 0.0; t <= 1.0; t += 0.01) {
    const auto k = k_of(t);
    if (!k) continue;
    const auto k2 = root_k(id, alpha, t, std::max(klo, *k - 1e-3), std::min(khi, *k + 1e-3));
    if (k2) r.closed_form_discrepancy = std::max(r.closed_form_discrepancy, std::abs(*k - *k2));
  }
  return r;
}

}  // namespace detail

// Lower bound on alpha implied by boundary case `id` (1..6) at the current alpha.
//
// Cases 1 and 4 take min over k of max(alpha_f, -g) where alpha_f solves
// f(alpha, 1, k, t) = -alpha on the case's line; Cases 2 and 3 take -max g on
// t = 1 - k/2; Cases 5 and 6 walk the curve f = g and take min over t of -f.
inline CaseResult case_value(int id, double alpha, FeasibilityOptions opt = {}) {
  if (id < 1 || id > 6) throw InputError("case_value: case id must be in 1..6");
  CaseResult r = detail::make_case(id);
  switch (id) {
    case 1: {
      // t = 1 - k, k in (0, 1/2]; k = 0 makes f + alpha identically zero.
      auto af = [](double k) { return *alpha_from_f_bisect(k, 1.0 - k); };
      auto phi = [&](double k) {
        if (k <= 0.0) return kInfinity;
        return std::max(af(k), -g1_bound(1.0, k, 1.0 - k));
      };
      const auto best = minimize_1d(phi, 0.0, 0.5);
      r.worst_k = best.x;
      r.worst_t = 1.0 - best.x;
      r.value = best.value;
      r.converged = best.found;
      for (double k = 0.01; k <= 0.5; k += 0.01)
        r.closed_form_discrepancy = std::max(r.closed_form_discrepancy, std::abs(af(k) - (1.0 - k) / (2.0 - k)));
      auto printed = [](double k) { return std::max((1.0 - k) / (2.0 - k), 1.0 + 3.0 * k * k - 3.0 * k); };
      r.printed_value = minimize_1d(printed, 0.0, 0.5).value;
      // (1-k)/(2-k) = 1+3k^2-3k
      double lo = 0.0;
      double hi = 0.5;
      auto diff = [](double k) { return (1.0 - k) / (2.0 - k) - (1.0 + 3.0 * k * k - 3.0 * k); };
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((diff(mid) > 0) == (diff(lo) > 0)) lo = mid;
        else hi = mid;
      }
      r.printed_crossing = (1.0 - lo) / (2.0 - lo);
      r.note = "alpha_f is identically 1/2 on t = 1-k; the printed (1-k)/(2-k) does not solve f = -alpha";
      break;
    }
    case 2: {
      auto phi = [](double k) { return g1_bound(1.0, k, 1.0 - k / 2.0); };
      const auto best = minimize_1d([&](double k) { return -phi(k); }, 0.0, 0.5);
      r.worst_k = best.x;
      r.worst_t = 1.0 - best.x / 2.0;
      r.value = best.value;
      r.converged = best.found;
      r.printed_value = minimize_1d([](double k) { return 1.0 + 13.0 * k * k / 4.0 - 3.0 * k; }, 0.0, 0.5).value;
      break;
    }
    case 3: {
      auto phi = [](double k) { return g2_bound(1.0, k, 1.0 - k / 2.0); };
      const auto best = minimize_1d([&](double k) { return -phi(k); }, 0.5, 2.0 / 3.0);
      r.worst_k = best.x;
      r.worst_t = 1.0 - best.x / 2.0;
      r.value = best.value;
      r.converged = best.found;
      r.printed_value = minimize_1d([](double k) { return -(3.0 * k * k / 4.0 - k); }, 0.5, 2.0 / 3.0).value;
      break;
    }
    case 4: {
      // t = k, k in [1/2, 2/3]; k > 2/3 lies outside the feasible region.
      auto af = [](double k) { return *alpha_from_f_bisect(k, k); };
      auto phi = [&](double k) { return std::max(af(k), -g2_bound(1.0, k, k)); };
      const auto best = minimize_1d(phi, 0.5, 2.0 / 3.0);
      r.worst_k = best.x;
      r.worst_t = best.x;
      r.value = best.value;
      r.converged = best.found;
      for (double k = 0.5; k <= 2.0 / 3.0; k += 0.01)
        r.closed_form_discrepancy =
            std::max(r.closed_form_discrepancy, std::abs(af(k) - (1.0 - k - k * k / 2.0) / (1.0 - k * k)));
      auto printed = [](double k) {
        if (k >= 1.0) return kInfinity;
        return std::max((-1.0 + k * k / 2.0 + k) / (1.0 - k * k), 1.0 + 3.0 * k * k - 4.0 * k);
      };
      r.printed_value = minimize_1d(printed, 0.5, 1.0).value;
      r.note = "alpha_f = (1-k-k^2/2)/(1-k^2); the printed expression has the opposite sign";
      break;
    }
    default: return detail::curve_case(id, alpha, opt);
  }
  return r;
}

inline constexpr double kAlphaStart = 0.2499;
inline constexpr double kAlphaOffset = 0.0001;
inline constexpr std::size_t kMaxFixedPointIterations = 10000;

struct FixedPointStep {
  std::size_t iteration = 0;
  double alpha = 0.0;
  int binding_case = 0;
  double case_min = 0.0;
};

struct FixedPointResult {
  double alpha = 0.0;
  int binding_case = 0;
  std::vector<CaseResult> cases;  // at the final alpha
  std::vector<FixedPointStep> trace;
  bool converged = false;
};

// alpha <- min_c case_value(c, alpha) - 0.0001 until |delta| < tol.
inline FixedPointResult alpha_fixed_point(double alpha0 = kAlphaStart, double tol = 1e-6,
                                          FeasibilityOptions opt = {}) {
  FixedPointResult out;
  double alpha = alpha0;
  for (std::size_t it = 1; it <= kMaxFixedPointIterations; ++it) {
    std::vector<CaseResult> cases;
    int binding = 0;
    double lowest = kInfinity;
    for (int id = 1; id <= 6; ++id) {
      cases.push_back(case_value(id, alpha, opt));
      if (cases.back().value < lowest) {
        lowest = cases.back().value;
        binding = id;
      }
    }
    const double next = lowest - kAlphaOffset;
    out.trace.push_back({it, next, binding, lowest});
    const bool done = std::abs(next - alpha) < tol;
    alpha = next;
    out.cases = std::move(cases);
    out.binding_case = binding;
    if (done) {
      out.converged = true;
      break;
    }
  }
  out.alpha = alpha;
  if (!out.converged) {
    std::string tail;
    for (std::size_t i = out.trace.size() >= 5 ? out.trace.size() - 5 : 0; i < out.trace.size(); ++i)
      tail += " " + std::to_string(out.trace[i].alpha);
    throw InvariantViolation("alpha_fixed_point: no convergence within 10^4 iterations", "last alphas:" + tail);
  }
  return out;
}

struct Optimum2d {
  double k = 0.0;
  double t = 0.0;
  double value = -kInfinity;
  bool found = false;
};

// Maximum of phi over the unit box on a `step` grid, refined by alternating
// golden-section passes in k and t (phi = -inf outside its domain).
inline Optimum2d maximize_2d(const std::function<double(double, double)>& phi, double kmax = 2.0 / 3.0,
                             double step = 1e-3) {
  Optimum2d best;
  const auto kc = static_cast<std::size_t>(std::ceil(kmax / step));
  const auto tc = static_cast<std::size_t>(std::ceil(1.0 / step));
  for (std::size_t a = 0; a <= kc; ++a) {
    const double k = std::min(kmax, static_cast<double>(a) * step);
    for (std::size_t b = 0; b <= tc; ++b) {
      const double t = std::min(1.0, static_cast<double>(b) * step);
      const double v = phi(k, t);
      if (std::isfinite(v) && (!best.found || v > best.value)) best = {k, t, v, true};
    }
  }
  if (!best.found) return best;
  auto neg_inf_to_inf = [](double v) { return std::isfinite(v) ? -v : kInfinity; };
  for (int pass = 0; pass < 4; ++pass) {
    const double k0 = best.k;
    auto pk = minimize_1d([&](double k) { return neg_inf_to_inf(phi(k, best.t)); }, std::max(0.0, k0 - step),
                          std::min(kmax, k0 + step), step / 10.0);
    if (pk.found && -pk.value > best.value) {
      best.k = pk.x;
      best.value = -pk.value;
    }
    const double t0 = best.t;
    auto pt = minimize_1d([&](double t) { return neg_inf_to_inf(phi(best.k, t)); }, std::max(0.0, t0 - step),
                          std::min(1.0, t0 + step), step / 10.0);
    if (pt.found && -pt.value > best.value) {
      best.t = pt.x;
      best.value = -pt.value;
    }
  }
  return best;
}

// Largest Lemma 3.1 exponent over its range.
inline Optimum2d lemma31_maximum(FeasibilityOptions opt = {}, double step = 1e-3) {
  return maximize_2d(
      [&](double k, double t) {
        const auto v = lemma31_bound(1.0, k, t, opt);
        return v.in_range ? v.value : -kInfinity;
      },
      2.0 / 3.0, step);
}

// Largest combined exponent min(g, f(alpha)) over the feasible region.
inline Optimum2d combined_maximum(double alpha, FeasibilityOptions opt = {}, double step = 1e-3) {
  return maximize_2d(
      [&](double k, double t) { return feasible(1.0, k, t, opt) ? combined_bound(alpha, 1.0, k, t) : -kInfinity; },
      2.0 / 3.0, step);
}

struct FeasibleRegion {
  double resolution = 0.0;
  std::size_t cells = 0;
  double area = 0.0;
  std::vector<std::pair<double, double>> centers;  // filled when keep_cells
};

// Grid cells of side `resolution` over [0,1]^2 whose centers are feasible.
inline FeasibleRegion feasible_region(double resolution, FeasibilityOptions opt = {}, bool keep_cells = false) {
  if (!(resolution > 0.0) || resolution > 1.0) throw InputError("feasible_region: resolution must be in (0, 1]");
  FeasibleRegion r;
  r.resolution = resolution;
  const auto cells = static_cast<std::size_t>(std::llround(1.0 / resolution));
  const double h = 1.0 / static_cast<double>(cells);
  for (std::size_t a = 0; a < cells; ++a) {
    const double k = (static_cast<double>(a) + 0.5) * h;
    for (std::size_t b = 0; b < cells; ++b) {
      const double t = (static_cast<double>(b) + 0.5) * h;
      if (!feasible(1.0, k, t, opt)) continue;
      ++r.cells;
      if (keep_cells) r.centers.emplace_back(k, t);
    }
  }
  r.area = static_cast<double>(r.cells) * h * h;
  return r;
}

// Closed interval with outward rounding after every operation.
struct RoundedInterval {
  double lo = 0.0;
  double hi = 0.0;

  static RoundedInterval point(double x) { return {x, x}; }

  static RoundedInterval widen(double lo, double hi) {
    return {std::nextafter(lo, -kInfinity), std::nextafter(hi, kInfinity)};
  }
  friend RoundedInterval operator+(RoundedInterval a, RoundedInterval b) { return widen(a.lo + b.lo, a.hi + b.hi); }
  friend RoundedInterval operator-(RoundedInterval a, RoundedInterval b) { return widen(a.lo - b.hi, a.hi - b.lo); }
  friend RoundedInterval operator*(RoundedInterval a, RoundedInterval b) {
    const double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return widen(*std::min_element(p, p + 4), *std::max_element(p, p + 4));
  }
  bool contains(double x) const { return lo <= x && x <= hi; }
  double width() const { return hi - lo; }
};

struct SpotCheck {
  std::string formula;
  double value = 0.0;
  RoundedInterval enclosure;
  bool ok = false;
};

// Re-evaluates f, g1, g2 at (alpha, k, t) in interval arithmetic and checks
// that the double results sit inside enclosures narrower than `max_width`.
inline std::vector<SpotCheck> interval_spot_check(double alpha, double k, double t, double max_width = 1e-12) {
  using I = RoundedInterval;
  const I a = I::point(alpha);
  const I K = I::point(k);
  const I T = I::point(t);
  const I one = I::point(1.0);
  const I two = I::point(2.0);
  const I three = I::point(3.0);
  const I half = I::point(0.5);
  const I f = (one - a) * T * T - half * K * K - one + K;
  const I g1 = T * T - three * K * K + two * K + K * T - two * T;
  const I g2 = one + K * K + T * T + K * T - two * K - two * T;
  std::vector<SpotCheck> out;
  auto push = [&](const std::string& name, double v, const I& e) {
    out.push_back({name, v, e, e.contains(v) && e.width() <= max_width});
  };
  push("f", f_bound(alpha, 1.0, k, t), f);
  push("g1", g1_bound(1.0, k, t), g1);
  push("g2", g2_bound(1.0, k, t), g2);
  return out;
}

}  // namespace normality
