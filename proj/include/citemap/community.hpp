#pragma once

#include <cstdint>
#include <vector>

#include "citemap/simnet.hpp"

namespace citemap {

/// Node index -> community id, ids contiguous from 0 in order of first appearance.
struct Partition {
  std::vector<int> assignment;

  static Partition from_labels(const std::vector<int>& labels);
  std::size_t n_nodes() const { return assignment.size(); }
  int n_communities() const;
  std::vector<std::vector<std::size_t>> members() const;

  bool operator==(const Partition&) const = default;
};

double modularity(const SimilarityNetwork& net, const Partition& p, bool weighted = true);

/// Two-phase greedy optimizer (local moving, then aggregation) at resolution 1.
Partition louvain(const SimilarityNetwork& net, std::uint64_t seed, bool weighted = true);

struct BruteForceResult {
  Partition partition;
  double modularity = 0.0;
};

/// Exhaustive search over all set partitions; at most 10 nodes.
BruteForceResult brute_force_partition(const SimilarityNetwork& net, bool weighted = true);

}  // namespace citemap
