#include <doctest.h>

#include <cmath>

#include "citemap/common.hpp"
#include "citemap/simnet.hpp"
#include "table1_fixture.hpp"

using namespace citemap;

namespace {

// Builds a dense docs x venues matrix from column vectors.
OccurrenceMatrix from_columns(const std::vector<std::vector<std::int64_t>>& cols) {
  const std::size_t rows = cols.empty() ? 0 : cols[0].size();
  std::vector<std::string> r, c;
  for (std::size_t i = 0; i < rows; ++i) r.push_back("d" + std::to_string(i));
  std::vector<std::vector<OccurrenceMatrix::Entry>> entries;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    c.push_back("V" + std::to_string(j));
    auto& e = entries.emplace_back();
    for (std::size_t i = 0; i < rows; ++i) {
      if (cols[j][i] > 0) e.push_back({i, cols[j][i]});
    }
  }
  return OccurrenceMatrix(r, c, entries);
}

SimilarityNetwork graph(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges) {
  SimilarityNetwork g;
  for (std::size_t i = 0; i < n; ++i) g.nodes.push_back("n" + std::to_string(i));
  for (auto [u, v] : edges) g.edges.push_back({std::min(u, v), std::max(u, v), 1.0});
  std::sort(g.edges.begin(), g.edges.end(), [](auto& a, auto& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
  return g;
}

SimilarityMatrix sim3(double ab, double ac, double bc) {
  SimilarityMatrix s;
  s.venues = {"A", "B", "C"};
  s.values = Eigen::MatrixXd::Identity(3, 3);
  s.values(0, 1) = s.values(1, 0) = ab;
  s.values(0, 2) = s.values(2, 0) = ac;
  s.values(1, 2) = s.values(2, 1) = bc;
  return s;
}

}  // namespace

TEST_CASE("cosine: identity, orthogonality and the hand example") {
  const auto s = cosine_matrix(from_columns({{1, 1, 0}, {1, 0, 1}, {2, 2, 0}, {0, 0, 3}}));
  CHECK(s.values(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s.values(0, 2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.values(2, 3) == 0.0);
  for (int i = 0; i < 4; ++i) CHECK(s.values(i, i) == 1.0);
  CHECK(s.values.isApprox(s.values.transpose()));
}

TEST_CASE("cosine: zero column is an error naming the venue") {
  const OccurrenceMatrix m({"d0", "d1"}, {"A", "EMPTY"}, {{{0, 1}}, {}});
  try {
    cosine_matrix(m);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("EMPTY") != std::string::npos);
  }
}

TEST_CASE("cosine is invariant to row permutation and column scaling") {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::vector<std::int64_t>> cols(5, std::vector<std::int64_t>(8));
    for (auto& c : cols) {
      for (auto& x : c) x = static_cast<std::int64_t>(rng.below(4));
      c[rng.below(8)] += 1;
    }
    const auto base = cosine_matrix(from_columns(cols));
    auto perm = cols;
    std::vector<std::size_t> order{0, 1, 2, 3, 4, 5, 6, 7};
    rng.shuffle(order);
    for (std::size_t j = 0; j < perm.size(); ++j) {
      for (std::size_t i = 0; i < 8; ++i) perm[j][i] = cols[j][order[i]];
    }
    auto scaled = cols;
    for (auto& x : scaled[2]) x *= 3;
    CHECK((cosine_matrix(from_columns(perm)).values - base.values).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((cosine_matrix(from_columns(scaled)).values - base.values).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(base.values.minCoeff() >= 0.0);
    CHECK(base.values.maxCoeff() <= 1.0);
  }
}

TEST_CASE("threshold_network is strict") {
  const auto net = threshold_network(sim3(0.5, 0.2, 0.19), 0.2);
  REQUIRE(net.n_edges() == 1);
  CHECK(net.edges[0] == WeightedEdge{0, 1, 0.5});
  CHECK(net.tau == 0.2);
  CHECK(threshold_network(sim3(0.5, 0.0, 0.19), 0.0).n_edges() == 2);
  CHECK(threshold_network(sim3(1.0, 0.3, 0.3), 0.999999).n_edges() == 1);
  CHECK_THROWS_AS(threshold_network(sim3(0.5, 0.2, 0.1), 1.0), Error);
  CHECK_THROWS_AS(threshold_network(sim3(0.5, 0.2, 0.1), -0.1), Error);
}

TEST_CASE("edge count is non-increasing in tau") {
  Rng rng(4);
  std::vector<std::vector<std::int64_t>> cols(12, std::vector<std::int64_t>(15));
  for (auto& c : cols) {
    for (auto& x : c) x = rng.bernoulli(0.3) ? 1 : 0;
    c[rng.below(15)] = 1;
  }
  const auto s = cosine_matrix(from_columns(cols));
  std::size_t prev = SIZE_MAX;
  for (double tau = 0.0; tau < 1.0; tau += 0.05) {
    const auto e = threshold_network(s, tau).n_edges();
    CHECK(e <= prev);
    prev = e;
  }
}

TEST_CASE("density") {
  CHECK(density(graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}})) == 1.0);
  CHECK(density(graph(4, {})) == 0.0);
  CHECK(density_from_endpoints(57, 720) == doctest::Approx(0.2256).epsilon(1e-4));
  CHECK(fixed(density_from_endpoints(57, 720), 3) == "0.226");
  CHECK(fixed(density_from_endpoints(203, 4130), 3) == "0.101");
  CHECK_THROWS_AS(density(graph(1, {})), Error);
  CHECK_THROWS_AS(density_from_endpoints(1, 0), Error);
}

TEST_CASE("density convention reproduces every Table 1 row") {
  for (const auto& r : fixture::kTable1) {
    const double d = density_from_endpoints(static_cast<std::size_t>(r.venues), static_cast<std::size_t>(r.edge_endpoints));
    CHECK(std::abs(d - r.density) <= 0.001 + 1e-12);
    CHECK(r.edge_endpoints % 2 == 0);
  }
}

TEST_CASE("average clustering") {
  CHECK(avg_clustering(graph(3, {{0, 1}, {1, 2}, {0, 2}})) == 1.0);
  CHECK(avg_clustering(graph(3, {{0, 1}, {1, 2}})) == 0.0);
  CHECK(avg_clustering(graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}})) == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
  CHECK(avg_clustering(graph(1, {})) == 0.0);
  CHECK(avg_clustering(graph(5, {{0, 1}, {1, 2}, {0, 2}})) == doctest::Approx(3.0 / 5.0));
}

TEST_CASE("clustering ignores weights") {
  auto g = graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}});
  const double base = avg_clustering(g);
  for (auto& e : g.edges) e.weight = 0.3 + 0.1 * static_cast<double>(e.u);
  CHECK(avg_clustering(g) == base);
}
