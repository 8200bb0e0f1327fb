#include <gtest/gtest.h>

#include "normality/core.hpp"
#include "normality/exact_rank.hpp"
#include "normality/rng.hpp"
#include "normality/signtxt.hpp"
#include "oracles.hpp"

using namespace normality;

namespace {

SignMatrix example4() {
  return SignMatrix::from_rows({{1, -1, 1, 1}, {-1, -1, 1, -1}, {1, 1, 1, -1}, {-1, 1, -1, 1}});
}

}  // namespace

TEST(Slicing, SubmatrixRelations) {
  const auto m = example4();
  const auto a = submatrix(m, slice::eq(2), slice::gt(2));
  ASSERT_EQ(a.rows(), 1U);
  ASSERT_EQ(a.cols(), 2U);
  EXPECT_EQ(a(0, 0), 1);
  EXPECT_EQ(a(0, 1), -1);

  const auto b = submatrix(m, slice::le(2), slice::ge(3));
  EXPECT_EQ(b, IntMatrix::from_rows({{1, 1}, {1, -1}}));

  const auto c = submatrix(m, slice::lt(1), slice::le(4));
  EXPECT_EQ(c.rows(), 0U);
  EXPECT_EQ(c.cols(), 4U);

  EXPECT_THROW(submatrix(m, slice::eq(0), slice::eq(1)), InputError);
  EXPECT_THROW(submatrix(m, slice::eq(5), slice::eq(1)), InputError);
}

TEST(Slicing, BuildTMatchesDefinition) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    SampleRng rng(11, s);
    const std::size_t n = 1 + rng.below(9);
    const auto m = random_sign_matrix(n, rng);
    for (std::size_t i = 0; i < n; ++i) {
      const auto t = build_T(m, i);
      EXPECT_EQ(t.rows(), 2 * (n - i - 1));
      EXPECT_EQ(t.cols(), i);
      EXPECT_EQ(t, oracle::naive_T(m, i));
    }
    EXPECT_THROW(build_T(m, n), InputError);
  }
}

TEST(Slicing, BuildX) {
  const auto m = example4();
  // x_2 = [-M(2;>2)^T ; M(>2;2)]
  EXPECT_EQ(build_x(m, 2), (std::vector<std::int64_t>{-1, 1, 1, 1}));
  EXPECT_EQ(build_x(m, 2, false), (std::vector<std::int64_t>{1, -1, 1, 1}));
  EXPECT_TRUE(build_x(m, 4).empty());
  EXPECT_THROW(build_x(m, 0), InputError);

  const auto sys = bordered_system(m, 1);
  EXPECT_EQ(sys.T.rows(), sys.x.size());
}

TEST(Permutation, CompositionLaw) {
  for (std::uint64_t s = 0; s < 300; ++s) {
    SampleRng rng(12, s);
    const std::size_t n = 1 + rng.below(8);
    const auto m = random_sign_matrix(n, rng);
    const auto sigma = random_permutation(n, rng);
    const auto rho = random_permutation(n, rng);
    EXPECT_EQ(apply_permutation(apply_permutation(m, sigma), rho), apply_permutation(m, compose(rho, sigma)));
    EXPECT_EQ(apply_permutation(apply_permutation(m, sigma), sigma.inverse()), m);
    // definition, entrywise
    const auto ms = apply_permutation(m, sigma);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) EXPECT_EQ(ms(sigma(i), sigma(j)), m(i, j));
  }
}

TEST(Permutation, OneBasedRoundTrip) {
  const std::vector<int> img = {3, 1, 2};
  const auto p = Permutation::from_one_based(img);
  EXPECT_EQ(p.one_based(), img);
  EXPECT_TRUE(compose(p, p.inverse()).is_identity());
  const std::vector<int> bad = {1, 1, 2};
  EXPECT_THROW(Permutation::from_one_based(bad), InputError);
}

TEST(Commutator, MatchesProductAndIsSymmetric) {
  for (std::uint64_t s = 0; s < 300; ++s) {
    SampleRng rng(13, s);
    const std::size_t n = 1 + rng.below(10);
    const auto m = random_sign_matrix(n, rng);
    const auto d = commutator(m);
    EXPECT_EQ(d, oracle::naive_commutator(m));
    EXPECT_EQ(d, d.transposed());
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(d(i, i), 0);
    // D(M_sigma) = D(M)_sigma
    const auto sigma = random_permutation(n, rng);
    EXPECT_EQ(commutator(apply_permutation(m, sigma)), apply_permutation(d, sigma));
  }
}

TEST(Commutator, Examples) {
  EXPECT_TRUE(is_normal(SignMatrix::all_ones(5)));
  EXPECT_TRUE(is_normal(SignMatrix::from_rows({{1, 1}, {-1, 1}})));
  const auto m = SignMatrix::from_rows({{1, 1}, {-1, -1}});
  EXPECT_FALSE(is_normal(m));
  EXPECT_EQ(commutator(m), IntMatrix::from_rows({{0, -4}, {-4, 0}}));
}

TEST(CNormal, WitnessIsCertificate) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    SampleRng rng(14, s);
    const std::size_t n = 2 + rng.below(4);
    const auto m = random_sign_matrix(n, rng);
    const auto sigma = random_permutation(n, rng);
    const auto c = apply_permutation(commutator(m), sigma.inverse());
    const auto w = is_c_normal(m, c);
    ASSERT_TRUE(w.has_value());
    EXPECT_EQ(apply_permutation(c, *w), commutator(m));
    if (n <= 4) {
      EXPECT_TRUE(oracle::naive_is_c_normal(m, c));
    }
  }
}

TEST(CNormal, AgreesWithPermutationMatrixOracle) {
  const IntMatrix c = IntMatrix::from_rows({{0, 4, 0}, {4, 0, 0}, {0, 0, 0}});
  for (std::uint64_t b = 0; b < 512; ++b) {
    const auto m = SignMatrix::from_bits(3, b);
    EXPECT_EQ(is_c_normal(m, c).has_value(), oracle::naive_is_c_normal(m, c)) << format_sign_matrix(m);
  }
}

TEST(CNormal, ZeroCIsNormality) {
  for (std::uint64_t b = 0; b < 512; ++b) {
    const auto m = SignMatrix::from_bits(3, b);
    EXPECT_EQ(is_c_normal(m, IntMatrix(3, 3)).has_value(), is_normal(m));
  }
}

TEST(CNormal, SearchCapIsACapabilityError) {
  SampleRng rng(15, 0);
  const auto m = random_sign_matrix(9, rng);
  IntMatrix c(9, 9);
  c(0, 1) = c(1, 0) = 4;
  EXPECT_THROW(is_c_normal(m, c), CapabilityError);
  EXPECT_THROW(is_c_normal(m, IntMatrix(3, 3)), InputError);
}

TEST(Residual, DecompositionIdentity) {
  for (std::uint64_t s = 0; s < 300; ++s) {
    SampleRng rng(16, s);
    const std::size_t n = 2 + rng.below(8);
    const auto m = random_sign_matrix(n, rng);
    IntMatrix c(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) c(i, j) = c(j, i) = 4 * rng.between(-2, 2);
    for (std::size_t k = 2; k <= n; ++k) {
      const auto lhs = constraint_residual(m, c, k);
      const auto rc = residual_c(m, c, k);
      const auto tx = transpose_times(build_T(m, k - 1), build_x(m, k));
      ASSERT_EQ(lhs.size(), k - 1);
      for (std::size_t i = 0; i + 1 < k; ++i) EXPECT_EQ(lhs[i], rc[i] - tx[i]);
    }
  }
}

// residual_c(M, C, k) only reads the diagonal and the first k-1 rows and
// columns of M.
TEST(Residual, MeasurableWithRespectToD) {
  for (std::uint64_t s = 0; s < 300; ++s) {
    SampleRng rng(17, s);
    const std::size_t n = 2 + rng.below(8);
    const auto m = random_sign_matrix(n, rng);
    IntMatrix c(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) c(i, j) = c(j, i) = 4 * rng.between(-2, 2);
    const std::size_t k = 2 + rng.below(n - 1);
    std::vector<std::int8_t> e(n * n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        const bool fixed = a == b || a < k - 1 || b < k - 1;
        e[a * n + b] = static_cast<std::int8_t>(fixed ? m(a, b) : rng.sign());
      }
    const SignMatrix other(n, std::move(e));
    EXPECT_EQ(residual_c(m, c, k), residual_c(other, c, k));
  }
}

TEST(Residual, ZeroForNormalMatrixAndZeroC) {
  const auto m = SignMatrix::all_ones(4);
  for (std::size_t k = 2; k <= 4; ++k) {
    for (auto v : constraint_residual(m, IntMatrix(4, 4), k)) EXPECT_EQ(v, 0);
  }
  EXPECT_THROW(constraint_residual(m, IntMatrix(4, 4), 1), InputError);
  EXPECT_THROW(residual_c(m, IntMatrix(3, 3), 2), InputError);
}

TEST(SignText, RoundTripAndErrors) {
  SampleRng rng(18, 0);
  const auto m = random_sign_matrix(6, rng);
  EXPECT_EQ(parse_sign_matrix(format_sign_matrix(m)), m);
  EXPECT_EQ(parse_sign_matrix("+ -\n- +\n"), SignMatrix::from_rows({{1, -1}, {-1, 1}}));
  EXPECT_THROW(parse_sign_matrix("+ -\n-\n"), InputError);
  EXPECT_THROW(parse_sign_matrix("+ x\n- +\n"), InputError);
  EXPECT_THROW(parse_sign_matrix(""), InputError);
  const auto a = IntMatrix::from_rows({{3, -2}, {0, 7}});
  EXPECT_EQ(parse_int_matrix(format_int_matrix(a)), a);
}
