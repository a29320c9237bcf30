#include <gtest/gtest.h>

#include <numeric>

#include "netest/metrics.hpp"
#include "oracles.hpp"

using namespace netest;

namespace {

Matrix fixed4() {
  Matrix w(4, 4);
  w << 0.0, 0.2, 0.5, 0.9,
       0.2, 0.0, 0.4, 0.1,
       0.5, 0.4, 0.0, 0.7,
       0.9, 0.1, 0.7, 0.0;
  return w;
}

Matrix two_disjoint_k4() {
  Matrix w = Matrix::Zero(8, 8);
  w.topLeftCorner(4, 4) = oracle::unit_complete(4);
  w.bottomRightCorner(4, 4) = oracle::unit_complete(4);
  return w;
}

Matrix permuted(const Matrix& w, const std::vector<Index>& perm) {
  Matrix p(w.rows(), w.cols());
  for (Index i = 0; i < w.rows(); ++i)
    for (Index j = 0; j < w.cols(); ++j) p(i, j) = w(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  return p;
}

}  // namespace

// Values below were computed once from the index-sum definitions and frozen.
TEST(FrozenValues, FourNodeNetwork) {
  const Matrix w = fixed4();
  const double k[] = {1.6, 0.7, 1.6, 1.7};
  const double nd[] = {1.54375, 1.6142857142857143, 1.41875, 1.5470588235294118};
  const double cc[] = {0.510958904109589, 0.61428571428571432, 0.46144578313253015, 0.45696202531645574};
  for (Index i = 0; i < 4; ++i) {
    EXPECT_NEAR(degree(w, i), k[i], 1e-12);
    EXPECT_NEAR(avg_neighbour_degree(w, i), nd[i], 1e-12);
    EXPECT_NEAR(clustering_coefficient(w, i), cc[i], 1e-12);
  }
  EXPECT_NEAR(mean_degree(w), 1.4, 1e-12);
  EXPECT_NEAR(transitivity(w), 0.48313253012048191, 1e-12);
  EXPECT_NEAR(global_clustering(w), 0.51091310671107237, 1e-12);
  EXPECT_NEAR(modularity(w, ModuleAssignment({1, 1, 2, 2})), -0.19451530612244902, 1e-12);
}

TEST(ExactValues, UnitComplete) {
  for (Index n : {3, 4, 7}) {
    const Matrix w = oracle::unit_complete(n);
    for (Index i = 0; i < n; ++i) {
      EXPECT_DOUBLE_EQ(degree(w, i), static_cast<double>(n - 1));
      EXPECT_DOUBLE_EQ(avg_neighbour_degree(w, i), static_cast<double>(n - 1));
      EXPECT_DOUBLE_EQ(clustering_coefficient(w, i), 1.0);
    }
    EXPECT_DOUBLE_EQ(mean_degree(w), static_cast<double>(n - 1));
    EXPECT_DOUBLE_EQ(transitivity(w), 1.0);
    EXPECT_DOUBLE_EQ(global_clustering(w), 1.0);
    EXPECT_NEAR(modularity(w, ModuleAssignment::single(n)), 0.0, 1e-15);
  }
}

TEST(ExactValues, StarAndPath) {
  const Matrix star = oracle::unit_star(5);
  EXPECT_EQ(transitivity(star), 0.0);
  EXPECT_EQ(clustering_coefficient(star, 0), 0.0);
  EXPECT_EQ(clustering_coefficient(star, 3), 0.0);  // zero denominator
  EXPECT_DOUBLE_EQ(avg_neighbour_degree(star, 2), 4.0);
  EXPECT_DOUBLE_EQ(avg_neighbour_degree(star, 0), 1.0);

  const Matrix path = oracle::unit_path(3);
  EXPECT_DOUBLE_EQ(avg_neighbour_degree(path, 1), 1.0);
  EXPECT_DOUBLE_EQ(avg_neighbour_degree(path, 0), 2.0);
}

TEST(ExactValues, TwoDisjointCliques) {
  const Matrix w = two_disjoint_k4();
  EXPECT_DOUBLE_EQ(modularity(w, ModuleAssignment({1, 1, 1, 1, 2, 2, 2, 2})), 0.5);
  EXPECT_DOUBLE_EQ(transitivity(w), 1.0);
}

TEST(Degenerate, ZeroDenominatorsAndEmptyNetwork) {
  const Matrix z = Matrix::Zero(4, 4);
  EXPECT_EQ(avg_neighbour_degree(z, 1), 0.0);
  EXPECT_EQ(transitivity(z), 0.0);
  EXPECT_EQ(global_clustering(z), 0.0);
  try {
    modularity(z, ModuleAssignment::single(4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyNetwork);
  }
}

TEST(Oracle, MatchesIndexSumDefinitions) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Matrix w = oracle::random_symmetric(6, seed);
    const std::vector<int> mods = {1, 2, 1, 3, 2, 1};
    for (Index i = 0; i < 6; ++i) {
      EXPECT_NEAR(degree(w, i), oracle::degree(w, i), 1e-10);
      EXPECT_NEAR(avg_neighbour_degree(w, i), oracle::avg_neighbour_degree(w, i), 1e-10);
      EXPECT_NEAR(clustering_coefficient(w, i), oracle::clustering(w, i), 1e-10);
    }
    EXPECT_NEAR(transitivity(w), oracle::transitivity(w), 1e-10);
    EXPECT_NEAR(global_clustering(w), oracle::global_clustering(w), 1e-10);
    EXPECT_NEAR(modularity(w, ModuleAssignment(mods)), oracle::modularity(w, mods), 1e-10);
  }
}

TEST(Properties, RangesOnValidNetworks) {
  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    const Index n = 3 + static_cast<Index>(seed % 9);
    const Matrix w = oracle::random_symmetric(n, seed);
    std::vector<int> mods(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) mods[static_cast<std::size_t>(i)] = 1 + static_cast<int>(i % 3);
    const double t = transitivity(w);
    EXPECT_GE(t, 0.0);
    EXPECT_LE(t, 1.0 + 1e-12);
    for (Index i = 0; i < n; ++i) {
      EXPECT_GE(degree(w, i), 0.0);
      EXPECT_LE(degree(w, i), static_cast<double>(n - 1));
      EXPECT_GE(clustering_coefficient(w, i), 0.0);
      EXPECT_LE(clustering_coefficient(w, i), 1.0 + 1e-12);
    }
    const double m = modularity(w, ModuleAssignment(mods));
    EXPECT_GE(m, -0.5 - 1e-12);
    EXPECT_LE(m, 1.0);
  }
}

TEST(Properties, PermutationEquivariance) {
  const Matrix w = oracle::random_symmetric(7, 9);
  const std::vector<Index> perm = {3, 0, 6, 1, 5, 2, 4};
  const Matrix p = permuted(w, perm);
  for (Index i = 0; i < 7; ++i) {
    const Index src = perm[static_cast<std::size_t>(i)];
    EXPECT_NEAR(degree(p, i), degree(w, src), 1e-12);
    EXPECT_NEAR(avg_neighbour_degree(p, i), avg_neighbour_degree(w, src), 1e-12);
    EXPECT_NEAR(clustering_coefficient(p, i), clustering_coefficient(w, src), 1e-12);
  }
  EXPECT_NEAR(transitivity(p), transitivity(w), 1e-12);
  EXPECT_NEAR(global_clustering(p), global_clustering(w), 1e-12);

  const std::vector<int> mods = {1, 1, 2, 2, 3, 3, 1};
  std::vector<int> pmods(7);
  for (std::size_t i = 0; i < 7; ++i) pmods[i] = mods[static_cast<std::size_t>(perm[i])];
  EXPECT_NEAR(modularity(p, ModuleAssignment(pmods)), modularity(w, ModuleAssignment(mods)), 1e-12);
}

TEST(Properties, ScalingLaws) {
  const Matrix w = oracle::random_symmetric(8, 17);
  const std::vector<int> mods = {1, 1, 1, 2, 2, 2, 3, 3};
  for (double c : {0.25, 0.5, 0.8}) {
    const Matrix s = c * w;
    EXPECT_NEAR(transitivity(s), c * transitivity(w), 1e-12);
    EXPECT_NEAR(global_clustering(s), c * global_clustering(w), 1e-12);
    EXPECT_NEAR(mean_degree(s), c * mean_degree(w), 1e-12);
    EXPECT_NEAR(avg_neighbour_degree(s, 2), c * avg_neighbour_degree(w, 2), 1e-12);
    EXPECT_NEAR(modularity(s, ModuleAssignment(mods)), modularity(w, ModuleAssignment(mods)), 1e-12);
  }
}

TEST(Specs, EvaluateAndTargets) {
  const Matrix w = fixed4();
  const ModuleAssignment mods({1, 1, 2, 2});
  const auto specs = targets_from(w, {MetricKind::Degree, MetricKind::Transitivity, MetricKind::Modularity}, mods);
  ASSERT_EQ(specs.size(), 6u);
  EXPECT_EQ(*specs[2].node, 2);
  EXPECT_NEAR(specs[2].target, 1.6, 1e-12);
  EXPECT_NEAR(specs[4].target, 0.48313253012048191, 1e-12);
  EXPECT_NEAR(specs[5].target, -0.19451530612244902, 1e-12);

  EXPECT_THROW(evaluate(MetricSpec{MetricKind::Degree, std::nullopt, std::nullopt, 0.0}, w), Error);
  EXPECT_THROW(evaluate(MetricSpec{MetricKind::Degree, 4, std::nullopt, 0.0}, w), Error);
  EXPECT_THROW(evaluate(MetricSpec{MetricKind::Modularity, std::nullopt, ModuleAssignment({1, 2}), 0.0}, w), Error);
  EXPECT_EQ(parse_metric_kind("clustering"), MetricKind::ClusteringCoefficient);
  for (MetricKind k : kAllMetricKinds) EXPECT_EQ(parse_metric_kind(metric_name(k)), k);
  EXPECT_THROW(parse_metric_kind("betweenness"), Error);
}
