#include <gtest/gtest.h>

#include <cmath>

#include "normality/bounds.hpp"

using namespace normality;

TEST(Formulas, HandValues) {
  EXPECT_DOUBLE_EQ(f_bound(0.3, 1.0, 0.5, 0.6), 0.7 * 0.36 - 0.125 - 1.0 + 0.5);
  EXPECT_DOUBLE_EQ(g1_bound(1.0, 0.5, 0.5), -0.25);
  EXPECT_DOUBLE_EQ(g2_bound(1.0, 0.5, 0.5), -0.25);
  // homogeneous of degree 2
  EXPECT_NEAR(g1_bound(3.0, 1.2, 2.1), 9.0 * g1_bound(1.0, 0.4, 0.7), 1e-12);
  EXPECT_NEAR(f_bound(0.3, 2.0, 0.8, 1.4), 4.0 * f_bound(0.3, 1.0, 0.4, 0.7), 1e-12);
  EXPECT_DOUBLE_EQ(combined_bound(0.3, 1.0, 0.4, 0.7), std::min(g1_bound(1.0, 0.4, 0.7), f_bound(0.3, 1.0, 0.4, 0.7)));
  EXPECT_DOUBLE_EQ(g_bound(1.0, 0.6, 0.7), g2_bound(1.0, 0.6, 0.7));
}

TEST(Feasibility, Region) {
  EXPECT_TRUE(feasible(1.0, 0.5, 0.5));
  EXPECT_FALSE(feasible(1.0, 0.3, 0.5));  // k + t < n
  EXPECT_FALSE(feasible(1.0, 0.7, 0.6));  // k > 2n/3
  EXPECT_FALSE(feasible(1.0, 0.6, 0.8));  // t + k/2 > n
  EXPECT_FALSE(feasible(1.0, 0.6, 0.45));
  EXPECT_TRUE(feasible(1.0, 0.6, 0.45, {false}));

  // areas 1/12 with k <= t, 1/9 without
  const auto a = feasible_region(0.0025);
  EXPECT_NEAR(a.area, 1.0 / 12.0, 2e-3);
  const auto b = feasible_region(0.0025, {false});
  EXPECT_NEAR(b.area, 1.0 / 9.0, 2e-3);
  EXPECT_THROW(feasible_region(0.0), InputError);
}

TEST(Lemma31, RangeAndOptimum) {
  const auto v = lemma31_bound(1.0, 0.5, 0.5);
  EXPECT_TRUE(v.in_range);
  EXPECT_TRUE(v.boundary);
  EXPECT_TRUE(v.branches_agree);
  EXPECT_DOUBLE_EQ(v.value, -0.25);
  EXPECT_FALSE(lemma31_bound(1.0, 0.5, 0.8).in_range);  // n - t < k/2
  EXPECT_FALSE(lemma31_bound(1.0, 0.3, 0.6).in_range);  // n - t > k
  EXPECT_TRUE(std::isinf(lemma31_bound(1.0, 0.0, 1.0).value));

  const auto opt = lemma31_maximum();
  EXPECT_NEAR(opt.value, -0.25, 1e-4);
  EXPECT_NEAR(opt.k, 0.5, 1e-2);
  EXPECT_NEAR(opt.t, 0.5, 1e-2);
}

TEST(Alpha, ClosedFormAgreesWithBisection) {
  for (double k = 0.05; k < 0.66; k += 0.05)
    for (double t = 0.4; t < 0.99; t += 0.05) {
      const auto a = alpha_from_f(k, t);
      const auto b = alpha_from_f_bisect(k, t);
      ASSERT_TRUE(a && b);
      EXPECT_NEAR(*a, *b, 1e-10);
      EXPECT_NEAR(f_bound(*a, 1.0, k, t), -*a, 1e-12);
    }
  EXPECT_FALSE(alpha_from_f(0.5, 1.0).has_value());
}

TEST(Minimize, Parabola) {
  const auto r = minimize_1d([](double x) { return (x - 0.3141) * (x - 0.3141) + 2.0; }, 0.0, 1.0);
  ASSERT_TRUE(r.found);
  EXPECT_NEAR(r.x, 0.3141, 1e-6);
  EXPECT_NEAR(r.value, 2.0, 1e-12);
  const auto none = minimize_1d([](double) { return kInfinity; }, 0.0, 1.0);
  EXPECT_FALSE(none.found);
}

// Values frozen from an independent scripted grid search.
TEST(Cases, FrozenValuesAtFixedPoint) {
  const double alpha = 0.302854;
  const std::array<double, 6> expect = {0.5, 4.0 / 13.0, 5.0 / 16.0, 0.323866, 0.302954, 0.306942};
  for (int id = 1; id <= 6; ++id) {
    const auto c = case_value(id, alpha);
    EXPECT_NEAR(c.value, expect[static_cast<std::size_t>(id - 1)], 2e-5) << "case " << id;
    // case 1 records how far its printed closed form is from the actual root
    if (id != 1) {
      EXPECT_LT(c.closed_form_discrepancy, 1e-9) << "case " << id;
    }
    EXPECT_DOUBLE_EQ(c.target, kCaseTargets[static_cast<std::size_t>(id - 1)]);
  }
  const auto c1 = case_value(1, alpha);
  EXPECT_GT(c1.closed_form_discrepancy, 0.1);
  ASSERT_TRUE(c1.printed_crossing.has_value());
  EXPECT_NEAR(*c1.printed_crossing, 0.426022, 1e-5);
  EXPECT_THROW(case_value(7, alpha), InputError);
}

TEST(FixedPoint, ConvergesWithCaseFiveBinding) {
  const auto r = alpha_fixed_point();
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.binding_case, 5);
  EXPECT_NEAR(r.alpha, 0.302854, 2e-6);
  EXPECT_GE(r.alpha, 0.302);
  ASSERT_FALSE(r.trace.empty());
  // each step applies the offset to the smallest case value
  for (const auto& st : r.trace) EXPECT_DOUBLE_EQ(st.alpha, st.case_min - kAlphaOffset);
  EXPECT_DOUBLE_EQ(r.trace.back().alpha, r.alpha);
  const auto again = alpha_fixed_point();
  EXPECT_EQ(r.alpha, again.alpha);
}

TEST(Combined, MaximumBelowThreshold) {
  const auto m = combined_maximum(0.302854);
  EXPECT_LT(m.value, -0.302);
}

TEST(Interval, SpotChecksEnclose) {
  for (const auto& s : interval_spot_check(0.302854, 0.46261, 0.69983)) EXPECT_TRUE(s.ok) << s.formula;
}
