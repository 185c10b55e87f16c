#include <doctest.h>

#include <cmath>

#include "citemap/community.hpp"
#include "test_graphs.hpp"

using namespace citemap;
using testgraphs::make;

TEST_CASE("partition relabels by first appearance") {
  const auto p = Partition::from_labels({7, 7, 3, 9, 3});
  CHECK(p.assignment == std::vector<int>{0, 0, 1, 2, 1});
  CHECK(p.n_communities() == 3);
  CHECK(p.members()[1] == std::vector<std::size_t>{2, 4});
}

TEST_CASE("modularity: all-in-one is zero") {
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    const auto g = testgraphs::random_weighted(rng, 7, 0.5);
    CHECK(std::abs(modularity(g, Partition::from_labels(std::vector<int>(7, 0)))) < 1e-15);
  }
}

TEST_CASE("modularity: triangle fixtures") {
  const auto p = Partition::from_labels({0, 0, 0, 1, 1, 1});
  CHECK(modularity(testgraphs::two_triangles(false), p, false) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(modularity(testgraphs::two_triangles(true), p, false) == doctest::Approx(6.0 / 7.0 - 0.5).epsilon(1e-12));
  CHECK(modularity(testgraphs::two_triangles(true), p, true) == doctest::Approx(6.0 / 7.0 - 0.5).epsilon(1e-12));
}

TEST_CASE("modularity errors and edgeless graphs") {
  CHECK_THROWS_AS(modularity(testgraphs::two_triangles(false), Partition::from_labels({0, 1})), Error);
  CHECK(modularity(make(3, {}), Partition::from_labels({0, 1, 2})) == 0.0);
}

TEST_CASE("modularity invariants on random graphs") {
  Rng rng(8);
  for (int t = 0; t < 100; ++t) {
    auto g = testgraphs::random_weighted(rng, 8, 0.4);
    std::vector<int> labels(8);
    for (auto& l : labels) l = static_cast<int>(rng.below(3));
    const auto p = Partition::from_labels(labels);
    const double q = modularity(g, p);
    CHECK(q >= -1.0);
    CHECK(q <= 1.0);
    // relabeling the community ids
    std::vector<int> shifted = labels;
    for (auto& l : shifted) l = 10 - l;
    CHECK(std::abs(modularity(g, Partition::from_labels(shifted)) - q) < 1e-12);
    // constant weights behave like the unweighted case
    for (auto& e : g.edges) e.weight = 0.37;
    CHECK(std::abs(modularity(g, p, true) - modularity(g, p, false)) < 1e-12);
  }
}

TEST_CASE("louvain: two triangles with a bridge") {
  const auto g = testgraphs::two_triangles(true);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto p = louvain(g, seed);
    CHECK(p == Partition::from_labels({0, 0, 0, 1, 1, 1}));
  }
  CHECK(louvain(g, 3) == brute_force_partition(g).partition);
}

TEST_CASE("louvain: edgeless and complete graphs") {
  CHECK(louvain(make(4, {}), 1) == Partition::from_labels({0, 1, 2, 3}));
  std::vector<std::tuple<std::size_t, std::size_t, double>> all;
  for (std::size_t u = 0; u < 6; ++u) {
    for (std::size_t v = u + 1; v < 6; ++v) all.emplace_back(u, v, 1.0);
  }
  CHECK(louvain(make(6, all), 1).n_communities() == 1);
  CHECK(louvain(make(1, {}), 1).n_communities() == 1);
}

TEST_CASE("louvain is deterministic and never worse than singletons") {
  Rng rng(31);
  for (int t = 0; t < 50; ++t) {
    const auto g = testgraphs::random_weighted(rng, 30, 0.15);
    const auto a = louvain(g, 99);
    CHECK(a == louvain(g, 99));
    std::vector<int> single(30);
    for (int i = 0; i < 30; ++i) single[static_cast<std::size_t>(i)] = i;
    CHECK(modularity(g, a) >= modularity(g, Partition::from_labels(single)) - 1e-12);
    CHECK(a.n_nodes() == 30);
  }
}

TEST_CASE("louvain finds planted blocks") {
  Rng rng(12);
  std::vector<std::tuple<std::size_t, std::size_t, double>> e;
  for (std::size_t u = 0; u < 40; ++u) {
    for (std::size_t v = u + 1; v < 40; ++v) {
      const bool same = u / 10 == v / 10;
      if (rng.bernoulli(same ? 0.8 : 0.02)) e.emplace_back(u, v, same ? 0.8 : 0.25);
    }
  }
  const auto p = louvain(make(40, e), 5);
  CHECK(p.n_communities() == 4);
  for (std::size_t u = 0; u < 40; ++u) CHECK(p.assignment[u] == p.assignment[(u / 10) * 10]);
}

TEST_CASE("brute force oracle") {
  const auto tt = brute_force_partition(testgraphs::two_triangles(false), false);
  CHECK(tt.modularity == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(tt.partition == Partition::from_labels({0, 0, 0, 1, 1, 1}));
  const auto edge = brute_force_partition(make(2, {{0, 1, 1.0}}));
  CHECK(edge.partition.n_communities() == 1);
  CHECK(edge.modularity == 0.0);
  CHECK(brute_force_partition(make(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}})).partition.n_communities() == 1);
  CHECK_THROWS_AS(brute_force_partition(make(11, {})), Error);
}

TEST_CASE("louvain stays close to the optimum on small graphs") {
  Rng rng(2024);
  for (int t = 0; t < 60; ++t) {
    const auto n = 3 + rng.below(6);
    const auto g = testgraphs::random_weighted(rng, n, 0.5);
    const auto best = brute_force_partition(g);
    const double q = modularity(g, louvain(g, static_cast<std::uint64_t>(t)));
    CHECK(q <= best.modularity + 1e-12);
    CHECK(q >= 0.95 * best.modularity - 1e-12);
  }
}
