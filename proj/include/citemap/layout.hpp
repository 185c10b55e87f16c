#pragma once

// Stress-based network layout. The static solver is SMACOF stress
// majorization, which minimizes the same energy as the Kamada-Kawai spring
// model; the dynamic solver adds an anchoring term towards each venue's
// trailing mean position.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "citemap/simnet.hpp"

namespace citemap {

struct DissimilarityMatrix {
  std::vector<std::string> venues;
  Eigen::MatrixXd values;   // symmetric, zero diagonal
  Eigen::MatrixXd weights;  // symmetric stress weights
};

struct Configuration {
  std::vector<std::string> venues;
  Eigen::MatrixX2d positions;
};

/// d = 1 - cosine. With a threshold, pairs at or below it get weight 0.1
/// instead of 1.
DissimilarityMatrix dissimilarity_from_similarity(const SimilarityMatrix& s, std::optional<double> tau = std::nullopt);

struct StressOptions {
  double tol = 1e-9;
  int max_iter = 500;
};

struct StressResult {
  Configuration config;
  std::vector<double> stress_history;  // weighted raw stress, index 0 = initial
  int iterations = 0;
};

/// Seeded uniform positions in [-0.5, 0.5]^2.
Configuration random_configuration(const std::vector<std::string>& venues, std::uint64_t seed);

/// Weighted raw stress sum_{u<v} w (|x_u - x_v| - d)^2.
double raw_stress(const DissimilarityMatrix& d, const Eigen::MatrixX2d& x);

StressResult stress_majorization(const DissimilarityMatrix& d, const Configuration& init, const StressOptions& opts = {});
StressResult stress_majorization(const DissimilarityMatrix& d, std::uint64_t seed, const StressOptions& opts = {});

/// Kruskal stress-1 over unordered pairs (unweighted).
double kruskal_stress(const DissimilarityMatrix& d, const Configuration& c);

struct LayoutFrame {
  int label = 0;
  std::uint64_t seed = 0;
  Configuration config;
  double stress = 0.0;  // Kruskal stress-1 of this frame
};

struct LayoutSeries {
  std::vector<LayoutFrame> frames;
  double alpha = 0.0;
  int smooth_span = 4;
};

struct DynamicLayoutOptions {
  double alpha = 0.5;
  int smooth_span = 4;
  std::uint64_t seed = 1;
  StressOptions stress;
};

/// Seed used for frame `label`; the static layout with this seed is what
/// alpha = 0 reproduces.
std::uint64_t frame_seed(std::uint64_t seed, int label);

LayoutSeries dynamic_layout(const std::vector<DissimilarityMatrix>& series, const std::vector<int>& labels,
                            const DynamicLayoutOptions& opts);

/// Stress-1 pooled over every frame's pair terms.
double aggregated_stress(const LayoutSeries& ls, const std::vector<DissimilarityMatrix>& ds);

/// Sum over consecutive frames and shared venues of the displacement length.
double total_displacement(const LayoutSeries& ls);
double max_displacement(const LayoutSeries& ls, std::size_t from_frame = 1);

}  // namespace citemap
