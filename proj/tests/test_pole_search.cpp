#include <gtest/gtest.h>

#include <numbers>

#include "minpart/pole_search.hpp"

using namespace minpart;

namespace {

SearchOptions small(std::size_t k, std::size_t poles, std::size_t budget) {
  SearchOptions o;
  o.k = k;
  o.poles = poles;
  o.h = 1.0 / 24;
  o.budget = budget;
  return o;
}

}  // namespace

TEST(Search, NoPolesIsASingleEvaluation) {
  const auto r = search_minimal_partition(DomainSpec::unit_square(), small(2, 0, 50));
  EXPECT_EQ(r.evaluations, 1u);
  EXPECT_TRUE(r.best.empty());
  const auto g = build_grid(DomainSpec::unit_square(), 1.0 / 24);
  EXPECT_NEAR(r.lambda_k, smallest_eigenpairs(assemble_laplacian(g), 2).eigenvalues[1], 1e-9);
  EXPECT_EQ(r.partition.k, 2u);
  EXPECT_GE(r.energy_estimate, r.lambda_k * (1 - 1e-6));
}

TEST(Search, PoleCountValidation) {
  auto check = [](std::size_t k, std::size_t l) {
    try {
      (void)search_minimal_partition(DomainSpec::unit_square(), small(k, l, 5));
      return false;
    } catch (const Error& e) {
      return e.code() == ErrorCode::InvalidPoleCount;
    }
  };
  EXPECT_TRUE(check(1, 1));
  EXPECT_TRUE(check(2, 1));
  EXPECT_TRUE(check(3, 3));
  EXPECT_FALSE(check(3, 2));
}

TEST(Search, RespectsBudgetAndImprovesOnTheStart) {
  const auto r = search_minimal_partition(DomainSpec::unit_square(), small(3, 1, 40));
  EXPECT_LE(r.evaluations, 40u);
  ASSERT_FALSE(r.trace.empty());
  EXPECT_GE(r.lambda_k, r.trace.front().value);
  double incumbent = -1;
  for (const auto& t : r.trace) {
    EXPECT_GE(t.incumbent, incumbent);
    incumbent = t.incumbent;
  }
  EXPECT_NEAR(incumbent, r.lambda_k, 1e-10 * r.lambda_k);
  ASSERT_EQ(r.best.size(), 1u);
  // The k-th eigenvalue at the reported poles equals the search value.
  const auto g = build_grid(DomainSpec::unit_square(), 1.0 / 24);
  EXPECT_NEAR(smallest_eigenpairs(assemble_ab(g, r.best), 3).eigenvalues[2], r.lambda_k, 1e-8 * r.lambda_k);
}

TEST(Search, DeterministicForSeedAndThreadCount) {
  auto o = small(3, 1, 25);
  const auto a = search_minimal_partition(DomainSpec::unit_square(), o);
  o.threads = 3;
  const auto b = search_minimal_partition(DomainSpec::unit_square(), o);
  const auto g = build_grid(DomainSpec::unit_square(), o.h);
  EXPECT_EQ(to_json(a, g).dump(), to_json(b, g).dump());
  o.seed = 7;
  const auto c = search_minimal_partition(DomainSpec::unit_square(), o);
  EXPECT_NE(to_json(a, g)["trace"].dump(), to_json(c, g)["trace"].dump());
}

TEST(Objective, CachesBySortedPoleSet) {
  const auto g = build_grid(DomainSpec::unit_square(), 1.0 / 16);
  LambdaObjective f(g, 2, {});
  const PoleConfig a{{{3, 4}, {9, 10}}};
  const PoleConfig b{{{9, 10}, {3, 4}}};
  const double va = f(a);
  EXPECT_EQ(f.evaluations(), 1u);
  EXPECT_TRUE(f.cached(b));
  EXPECT_EQ(f(b), va);
  EXPECT_EQ(f.evaluations(), 1u);
  EXPECT_EQ(f.cache_hits(), 1u);
}

TEST(Objective, ContinuousPositionsAreSnapped) {
  const double a = objective_lambda_k(DomainSpec::unit_square(), 2, {{0.5, 0.5}}, 1.0 / 17);
  const double b = objective_lambda_k(DomainSpec::unit_square(), 2, {{0.49, 0.51}}, 1.0 / 17);
  EXPECT_EQ(a, b);
}

TEST(Kronecker, PointsInUnitCubeAndSeeded) {
  detail::KroneckerSequence s(4, 42), t(4, 42), u(4, 43);
  for (int i = 0; i < 100; ++i) {
    const auto x = s.next(), y = t.next(), z = u.next();
    EXPECT_EQ(x, y);
    EXPECT_NE(x, z);
    for (double v : x) {
      EXPECT_GE(v, 0.0);
      EXPECT_LT(v, 1.0);
    }
  }
}

TEST(Sweep, PicksTheLargestEigenvalue) {
  const auto s = sweep_pole_counts(DomainSpec::unit_square(), small(3, 0, 15), {0, 1});
  ASSERT_EQ(s.results.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_LE(s.results[i].lambda_k, s.results[s.best].lambda_k);
}
