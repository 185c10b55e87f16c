// Random community series for flow tests.
#pragma once

#include <string>
#include <vector>

#include "citemap/common.hpp"
#include "citemap/flow.hpp"

namespace testseries {

inline citemap::CommunitySlice slice(int label, std::vector<std::string> nodes, std::vector<int> labels) {
  return {label, std::move(nodes), citemap::Partition::from_labels(labels)};
}

// Nodes drawn from a shared pool so consecutive slices overlap partially.
inline citemap::CommunitySeries random_series(citemap::Rng& rng) {
  citemap::CommunitySeries s;
  const auto n_slices = 2 + rng.below(5);
  const auto pool = 6 + rng.below(20);
  for (std::size_t t = 0; t < n_slices; ++t) {
    std::vector<std::string> nodes;
    std::vector<int> labels;
    const auto k = 1 + rng.below(5);
    for (std::size_t v = 0; v < pool; ++v) {
      if (!rng.bernoulli(0.75)) continue;
      nodes.push_back("v" + std::to_string(v));
      labels.push_back(static_cast<int>(rng.below(k)));
    }
    if (nodes.empty()) {
      nodes.push_back("v0");
      labels.push_back(0);
    }
    s.slices.push_back(slice(1990 + static_cast<int>(t), nodes, labels));
  }
  return s;
}

}  // namespace testseries
