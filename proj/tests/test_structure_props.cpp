#include <gtest/gtest.h>

#include "normality/rng.hpp"
#include "normality/structure_props.hpp"
#include "oracles.hpp"

using namespace normality;

TEST(Subspace, Validation) {
  EXPECT_THROW(Subspace(3, IntMatrix::from_rows({{1, 1, 1}, {2, 2, 2}})), InputError);
  EXPECT_THROW(Subspace(3, IntMatrix::from_rows({{1, 1}})), InputError);
  EXPECT_THROW(Subspace(0, IntMatrix(0, 0)), InputError);
  EXPECT_EQ(Subspace(4, IntMatrix(0, 4)).dim(), 0U);
}

TEST(Hypercube, Examples) {
  EXPECT_EQ(hypercube_intersection_count(Subspace::full(6)), 64U);
  EXPECT_EQ(hypercube_intersection_count(Subspace(5, IntMatrix(0, 5))), 0U);
  // span{(1,1,1)} meets the cube in +-(1,1,1)
  EXPECT_EQ(hypercube_intersection_count(Subspace(3, IntMatrix::from_rows({{1, 1, 1}}))), 2U);
  // {x1 = x2, x3 = x4}
  EXPECT_EQ(hypercube_intersection_count(Subspace(4, IntMatrix::from_rows({{1, 1, 0, 0}, {0, 0, 1, 1}}))), 4U);
  EXPECT_EQ(hypercube_intersection_count(Subspace(3, IntMatrix::from_rows({{1, 2, 0}}))), 0U);
}

TEST(Hypercube, MatchesBruteForceAndOdlyzko) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    SampleRng rng(41, s);
    const std::size_t n = 1 + rng.below(8);
    const std::size_t k = rng.below(n + 1);
    IntMatrix basis(0, n);
    // spans of sign vectors hit many vertices; small integers hit few
    while (basis.rows() < k) {
      IntMatrix row = (s % 2 == 0) ? random_pm1_matrix(1, n, rng) : IntMatrix(1, n);
      if (s % 2 == 1)
        for (std::size_t j = 0; j < n; ++j) row(0, j) = rng.between(-2, 2);
      const auto cand = basis.stacked(row);
      if (oracle::rank_q(cand) == cand.rows()) basis = cand;
    }
    const std::uint64_t got = hypercube_intersection_count(Subspace(n, basis));
    EXPECT_EQ(got, oracle::naive_vertex_count(basis, n));
    EXPECT_LE(got, std::uint64_t{1} << k);
  }
}

TEST(Hypercube, RefusesLargeAmbientDimension) {
  EXPECT_THROW(hypercube_intersection_count(Subspace::full(kMaxVertexEnumeration + 1)), CapabilityError);
}

TEST(Solutions, MatchesBruteForce) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    SampleRng rng(42, s);
    const std::size_t q = 1 + rng.below(10);
    const std::size_t m = 1 + rng.below(5);
    const auto a = random_pm1_matrix(m, q, rng);
    // right-hand side from a planted solution half the time
    std::vector<std::int64_t> c(m);
    const auto v = random_pm1_matrix(1, q, rng);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t j = 0; j < q; ++j) c[r] += a(r, j) * v(0, j);
      if (s % 2 == 1) c[r] += 2 * rng.between(-1, 1);
    }
    const auto got = solution_count(a, c);
    EXPECT_EQ(got, oracle::naive_solution_count(a, c));
    const std::size_t r = oracle::rank_q(a);
    EXPECT_LE(got, std::uint64_t{1} << (q - r));
  }
}

TEST(PropertyP, MatchesOracleExhaustively) {
  for (auto [m, q] : {std::pair<std::size_t, std::size_t>{1, 1}, {1, 3}, {2, 2}, {2, 3}}) {
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << (2 * m * q)); ++b) {
      const auto a = PairedMatrix::from_bits(m, q, b);
      const auto rep = has_property_P(a);
      ASSERT_EQ(rep.holds, oracle::naive_property_P(a.rows())) << m << "x" << q << " bits " << b;
      for (std::size_t k = m; k <= 2 * m; ++k)
        ASSERT_EQ(has_property_Fk(a, k).holds, oracle::naive_property_Fk(a.rows(), k));
    }
  }
}

TEST(PropertyP, Examples) {
  // [1; -1] has rank 1 and deleting the pair leaves nothing
  const PairedMatrix a(IntMatrix::from_rows({{1}, {-1}}));
  EXPECT_TRUE(has_property_P(a).holds);
  EXPECT_TRUE(has_property_Fk(a, 1).holds);
  EXPECT_FALSE(has_property_Fk(a, 2).holds);
  EXPECT_THROW(has_property_Fk(a, 3), InputError);
  EXPECT_THROW(has_property_Fk(a, 0), InputError);

  // rows 1 and 2 are equal, so deleting pair 1 keeps row 2 and the rank
  const PairedMatrix b(IntMatrix::from_rows({{1, 1}, {1, 1}, {1, -1}, {1, -1}}));
  const auto rep = has_property_P(b);
  EXPECT_FALSE(rep.holds);
  EXPECT_EQ(rep.failing_pairs, (std::vector<std::size_t>{1, 2}));

  EXPECT_THROW(PairedMatrix(IntMatrix::from_rows({{1, 1}, {1, 1}, {1, 1}})), InputError);
  EXPECT_THROW(PairedMatrix(IntMatrix::from_rows({{1, 2}, {1, 1}})), InputError);
}

TEST(Swaps, Involutions) {
  SampleRng rng(43, 0);
  const PairedMatrix a(random_pm1_matrix(6, 4, rng));
  for (std::size_t i = 1; i <= 3; ++i) EXPECT_EQ(apply_swap(apply_swap(a, Swap::half(i)), Swap::half(i)), a);
  EXPECT_EQ(apply_swap(apply_swap(a, Swap::pair(1, 3)), Swap::pair(3, 1)), a);
  const auto h = apply_swap(a, Swap::half(2));
  EXPECT_EQ(h.rows()(1, 0), a.rows()(4, 0));
  const auto p = apply_swap(a, Swap::pair(1, 2));
  EXPECT_EQ(p.rows()(3, 2), a.rows()(4, 2));
  EXPECT_THROW(apply_swap(a, Swap::half(4)), InputError);
  EXPECT_THROW(apply_swap(a, Swap::pair(2, 2)), InputError);
  EXPECT_EQ(Swap::pair(3, 1).to_string(), "PairSwap(1,3)");
}

// Swaps preserve property P.
TEST(Swaps, PreservePropertyP) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    SampleRng rng(44, s);
    const PairedMatrix a(random_pm1_matrix(6, 3 + rng.below(4), rng));
    const bool p = has_property_P(a).holds;
    EXPECT_EQ(has_property_P(apply_swap(a, Swap::half(1 + rng.below(3)))).holds, p);
    EXPECT_EQ(has_property_P(apply_swap(a, Swap::pair(1, 2 + rng.below(2)))).holds, p);
  }
}

TEST(Reduction, EveryPropertyPMatrixReaches_Fk) {
  for (auto [m, q] : {std::pair<std::size_t, std::size_t>{1, 2}, {2, 2}, {2, 3}}) {
    std::uint64_t reduced = 0;
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << (2 * m * q)); ++b) {
      const auto a = PairedMatrix::from_bits(m, q, b);
      if (!has_property_P(a).holds) {
        EXPECT_THROW(reduce_P_to_Fk(a), InputError);
        continue;
      }
      const auto red = reduce_P_to_Fk(a);
      PairedMatrix replay = a;
      for (const auto& sw : red.script) replay = apply_swap(replay, sw);
      ASSERT_EQ(replay, red.result);
      const std::size_t k = oracle::rank_q(a.rows());
      ASSERT_TRUE(oracle::naive_property_Fk(red.result.rows(), k));
      ++reduced;
    }
    EXPECT_GT(reduced, 0U);
  }
}

TEST(Census, MatchesOracleCounts) {
  for (auto [m, q] : {std::pair<std::size_t, std::size_t>{1, 2}, {2, 2}}) {
    const auto c = census(m, q);
    ASSERT_TRUE(c.exhaustive);
    std::vector<std::uint64_t> p(2 * m + 1), f(2 * m + 1);
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << (2 * m * q)); ++b) {
      const auto a = PairedMatrix::from_bits(m, q, b).rows();
      if (!oracle::naive_property_P(a)) continue;
      const std::size_t k = oracle::rank_q(a);
      if (k < m) continue;
      ++p[k];
      if (oracle::naive_property_Fk(a, k)) ++f[k];
    }
    for (const auto& row : c.rows) {
      EXPECT_EQ(row.count_p, p[row.k]);
      EXPECT_EQ(row.count_fk, f[row.k]);
      EXPECT_LE(row.count_fk, row.count_p);
    }
  }
}

TEST(Census, ThreadCountDoesNotChangeSampledCounts) {
  const auto a = census(3, 5, 3000, 9, 1);
  const auto b = census(3, 5, 3000, 9, 4);
  ASSERT_FALSE(a.exhaustive);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].count_p, b.rows[i].count_p);
    EXPECT_EQ(a.rows[i].count_fk, b.rows[i].count_fk);
  }
}

TEST(CountBound, Exponents) {
  EXPECT_EQ(fk_count_bound(2, 3, 3), (4 - 3) * (3 - 2 - 3));
  EXPECT_EQ(fk_count_bound_proof_variant(2, 3, 3), (4 - 3) * (3 - 2 - 3));
  EXPECT_EQ(fk_count_bound(3, 2, 4), 2 * -1);
  EXPECT_EQ(fk_count_bound_proof_variant(3, 2, 4), 4 * -1);
  EXPECT_THROW(fk_count_bound(3, 2, 7), InputError);
}

TEST(SpanRelation, HoldsOnSampledFk) {
  for (auto [m, q, k] : {std::tuple<std::size_t, std::size_t, std::size_t>{2, 3, 3}, {3, 4, 4}, {3, 5, 5}}) {
    const auto sample = sample_fk(m, q, k, 20, 7);
    ASSERT_FALSE(sample.instances.empty());
    for (const auto& a : sample.instances) {
      ASSERT_TRUE(has_property_Fk(a, k).holds);
      for (std::size_t j = k - m + 1; j <= std::min(k, m); ++j) EXPECT_TRUE(check_span_relation(a, j));
    }
  }
}
