// Brute-force reference for two-factor varimax: scan the rotation angle on a fixed grid.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "citemap/factors.hpp"

namespace oracle {

inline Eigen::MatrixXd rotate2(const Eigen::MatrixXd& l, double t) {
  Eigen::Matrix2d r;
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return l * r;
}

// Returns the input rotated by the grid angle with the highest (Kaiser-normalized) criterion.
inline Eigen::MatrixXd grid_varimax2(const Eigen::MatrixXd& l, double step = 1e-4) {
  Eigen::VectorXd h = l.rowwise().norm();
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    if (h[i] == 0.0) h[i] = 1.0;
  }
  const Eigen::MatrixXd x = h.cwiseInverse().asDiagonal() * l;
  double best = -1.0, best_t = 0.0;
  for (double t = 0.0; t < std::numbers::pi / 2; t += step) {
    const double c = citemap::varimax_criterion(rotate2(x, t));
    if (c > best) {
      best = c;
      best_t = t;
    }
  }
  return rotate2(l, best_t);
}

// Largest entrywise difference after matching column order and sign.
inline double match_distance2(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  double best = 1e300;
  for (int swap = 0; swap < 2; ++swap) {
    for (int s0 = -1; s0 <= 1; s0 += 2) {
      for (int s1 = -1; s1 <= 1; s1 += 2) {
        Eigen::MatrixXd c(b.rows(), 2);
        c.col(0) = s0 * b.col(swap ? 1 : 0);
        c.col(1) = s1 * b.col(swap ? 0 : 1);
        best = std::min(best, (a - c).cwiseAbs().maxCoeff());
      }
    }
  }
  return best;
}

}  // namespace oracle
