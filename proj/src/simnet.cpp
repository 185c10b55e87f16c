#include "citemap/simnet.hpp"

#include <algorithm>
#include <cmath>

#include "citemap/common.hpp"

namespace citemap {

std::vector<std::vector<std::size_t>> SimilarityNetwork::adjacency() const {
  std::vector<std::vector<std::size_t>> adj(nodes.size());
  for (const auto& e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

SimilarityMatrix cosine_matrix(const OccurrenceMatrix& m) {
  const std::size_t p = m.n_cols();
  if (p < 2) throw Error("cosine_matrix: need at least 2 venues");

  // Row-major view of the sparse columns for the dot products.
  std::vector<std::vector<std::pair<std::size_t, double>>> by_row(m.n_rows());
  Eigen::VectorXd norms(static_cast<Eigen::Index>(p));
  for (std::size_t j = 0; j < p; ++j) {
    double sq = 0.0;
    for (const auto& e : m.column(j)) {
      const double c = static_cast<double>(e.count);
      by_row[e.row].emplace_back(j, c);
      sq += c * c;
    }
    if (sq <= 0.0) throw Error("cosine_matrix: zero-norm column for venue " + m.cols()[j]);
    norms[static_cast<Eigen::Index>(j)] = std::sqrt(sq);
  }

  Eigen::MatrixXd dot = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  for (const auto& row : by_row) {
    for (std::size_t a = 0; a < row.size(); ++a) {
      for (std::size_t b = a + 1; b < row.size(); ++b) {
        dot(static_cast<Eigen::Index>(row[a].first), static_cast<Eigen::Index>(row[b].first)) +=
            row[a].second * row[b].second;
      }
    }
  }

  SimilarityMatrix s;
  s.venues = m.cols();
  s.values = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(p); ++i) {
    for (Eigen::Index j = i + 1; j < static_cast<Eigen::Index>(p); ++j) {
      const double c = std::clamp(dot(i, j) / (norms[i] * norms[j]), 0.0, 1.0);
      s.values(i, j) = c;
      s.values(j, i) = c;
    }
  }
  return s;
}

SimilarityNetwork threshold_network(const SimilarityMatrix& s, double tau) {
  if (!(tau >= 0.0 && tau < 1.0)) throw Error("threshold_network: tau must lie in [0, 1)");
  SimilarityNetwork net;
  net.nodes = s.venues;
  net.tau = tau;
  const auto n = s.values.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (s.values(i, j) > tau) {
        net.edges.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), s.values(i, j)});
      }
    }
  }
  return net;
}

double density_from_endpoints(std::size_t n_nodes, std::size_t n_edge_endpoints) {
  if (n_nodes < 2) throw Error("density: need at least 2 nodes");
  return static_cast<double>(n_edge_endpoints) / (static_cast<double>(n_nodes) * static_cast<double>(n_nodes - 1));
}

double density(const SimilarityNetwork& net) {
  return density_from_endpoints(net.n_nodes(), net.n_edge_endpoints());
}

double avg_clustering(const SimilarityNetwork& net) {
  if (net.nodes.empty()) throw Error("avg_clustering: empty network");
  const auto adj = net.adjacency();
  double sum = 0.0;
  for (const auto& nbrs : adj) {
    const std::size_t k = nbrs.size();
    if (k < 2) continue;
    std::size_t links = 0;
    for (std::size_t a = 0; a < k; ++a) {
      const auto& na = adj[nbrs[a]];
      for (std::size_t b = a + 1; b < k; ++b) {
        if (std::binary_search(na.begin(), na.end(), nbrs[b])) ++links;
      }
    }
    sum += static_cast<double>(links) / (0.5 * static_cast<double>(k * (k - 1)));
  }
  return sum / static_cast<double>(adj.size());
}

}  // namespace citemap
