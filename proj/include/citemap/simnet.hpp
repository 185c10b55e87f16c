#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "citemap/corpus.hpp"

namespace citemap {

struct SimilarityMatrix {
  std::vector<std::string> venues;
  Eigen::MatrixXd values;  // symmetric, unit diagonal
};

struct WeightedEdge {
  std::size_t u = 0;  // u < v
  std::size_t v = 0;
  double weight = 0.0;

  bool operator==(const WeightedEdge&) const = default;
};

/// Undirected, loop-free; edges sorted by (u, v).
struct SimilarityNetwork {
  std::vector<std::string> nodes;
  std::vector<WeightedEdge> edges;
  double tau = 0.0;

  std::size_t n_nodes() const { return nodes.size(); }
  std::size_t n_edges() const { return edges.size(); }
  std::size_t n_edge_endpoints() const { return 2 * edges.size(); }
  /// Unweighted adjacency lists, neighbours sorted.
  std::vector<std::vector<std::size_t>> adjacency() const;
};

struct NetworkMetrics {
  std::size_t n_nodes = 0;
  std::size_t n_edges = 0;
  std::size_t n_edge_endpoints = 0;
  std::size_t n_communities = 0;
  double modularity = 0.0;
  double avg_clustering = 0.0;
  double density = 0.0;
};

SimilarityMatrix cosine_matrix(const OccurrenceMatrix& m);

/// Edge (u, v) iff u != v and cosine > tau (strict).
SimilarityNetwork threshold_network(const SimilarityMatrix& s, double tau);

double density(const SimilarityNetwork& net);
/// endpoints / (N (N - 1)): the convention behind published arc-count tables.
double density_from_endpoints(std::size_t n_nodes, std::size_t n_edge_endpoints);

/// Mean local clustering over all nodes; nodes of degree < 2 contribute 0.
double avg_clustering(const SimilarityNetwork& net);

}  // namespace citemap
