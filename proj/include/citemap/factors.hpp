#pragma once

#include <Eigen/Dense>
#include <string>
#include <string_view>
#include <vector>

#include "citemap/corpus.hpp"

namespace citemap {

struct CorrelationMatrix {
  std::vector<std::string> venues;
  Eigen::MatrixXd values;
};

enum class Rotation { None, Varimax };

struct FactorSolution {
  std::vector<std::string> venues;
  Eigen::MatrixXd loadings;  // venues x k
  std::vector<double> eigenvalues;  // the k retained, descending
  std::vector<double> all_eigenvalues;  // full spectrum, for scree output
  double pct_variance = 0.0;
  Rotation rotation = Rotation::None;

  std::size_t k() const { return static_cast<std::size_t>(loadings.cols()); }
  std::size_t p() const { return venues.size(); }
};

CorrelationMatrix correlation(const OccurrenceMatrix& m);

/// Venue indices whose count column is constant over the documents.
std::vector<std::size_t> constant_columns(const OccurrenceMatrix& m);
OccurrenceMatrix drop_columns(const OccurrenceMatrix& m, const std::vector<std::size_t>& cols);

/// Principal components of a correlation matrix. Each loading column is
/// sqrt(eigenvalue) times the eigenvector, flipped so its largest-magnitude
/// entry is positive.
FactorSolution principal_components(const CorrelationMatrix& c, std::size_t k);

struct VarimaxResult {
  Eigen::MatrixXd loadings;
  Eigen::MatrixXd rotation;  // orthonormal k x k, loadings = input * rotation
  std::vector<double> criterion;  // after each sweep, criterion[0] = start
  int sweeps = 0;
};

struct VarimaxOptions {
  bool kaiser_normalize = true;
  double tolerance = 1e-10;
  int max_sweeps = 100;
};

/// Varimax criterion sum_j [mean(L^4) - mean(L^2)^2] over the columns.
double varimax_criterion(const Eigen::MatrixXd& loadings);

VarimaxResult varimax(const Eigen::MatrixXd& loadings, const VarimaxOptions& opts = {});

/// Rotates a solution in place of its loadings; column signs follow the
/// largest-magnitude-positive convention afterwards.
FactorSolution rotate_varimax(const FactorSolution& sol, const VarimaxOptions& opts = {});

/// Number of factors on which the venue loads with |loading| >= threshold.
int interfactorial_complexity(const FactorSolution& sol, std::string_view venue, double load_threshold);

}  // namespace citemap
