#include "citemap/factors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "citemap/common.hpp"

namespace citemap {

namespace {

using Index = Eigen::Index;

void apply_sign_convention(Eigen::MatrixXd& loadings, Eigen::MatrixXd* rotation = nullptr) {
  for (Index j = 0; j < loadings.cols(); ++j) {
    Index arg = 0;
    double best = -1.0;
    for (Index i = 0; i < loadings.rows(); ++i) {
      // First index wins ties, so the convention is deterministic.
      if (std::abs(loadings(i, j)) > best + 1e-12) {
        best = std::abs(loadings(i, j));
        arg = i;
      }
    }
    if (loadings.rows() > 0 && loadings(arg, j) < 0.0) {
      loadings.col(j) *= -1.0;
      if (rotation) rotation->col(j) *= -1.0;
    }
  }
}

}  // namespace

std::vector<std::size_t> constant_columns(const OccurrenceMatrix& m) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < m.n_cols(); ++j) {
    const auto& col = m.column(j);
    // Constant iff every row holds the same count (all zero is impossible here).
    if (col.size() == m.n_rows()) {
      const bool same = std::all_of(col.begin(), col.end(), [&](const auto& e) { return e.count == col.front().count; });
      if (same) out.push_back(j);
    }
  }
  return out;
}

OccurrenceMatrix drop_columns(const OccurrenceMatrix& m, const std::vector<std::size_t>& cols) {
  std::vector<std::string> names;
  std::vector<std::vector<OccurrenceMatrix::Entry>> columns;
  for (std::size_t j = 0; j < m.n_cols(); ++j) {
    if (std::find(cols.begin(), cols.end(), j) != cols.end()) continue;
    names.push_back(m.cols()[j]);
    columns.push_back(m.column(j));
  }
  return OccurrenceMatrix(m.rows(), std::move(names), std::move(columns));
}

CorrelationMatrix correlation(const OccurrenceMatrix& m) {
  const auto n = static_cast<Index>(m.n_rows());
  const auto p = static_cast<Index>(m.n_cols());
  if (n < 2) throw Error("correlation: need at least 2 documents");

  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, p);
  for (Index j = 0; j < p; ++j) {
    for (const auto& e : m.column(static_cast<std::size_t>(j))) x(static_cast<Index>(e.row), j) = static_cast<double>(e.count);
  }
  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;
  Eigen::VectorXd sd(p);
  for (Index j = 0; j < p; ++j) {
    sd[j] = x.col(j).norm();
    if (sd[j] <= 0.0) throw Error("correlation: zero-variance column for venue " + m.cols()[static_cast<std::size_t>(j)]);
  }
  CorrelationMatrix c;
  c.venues = m.cols();
  c.values = x.transpose() * x;
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < p; ++j) c.values(i, j) /= sd[i] * sd[j];
  }
  for (Index i = 0; i < p; ++i) {
    c.values(i, i) = 1.0;
    for (Index j = i + 1; j < p; ++j) {
      const double r = std::clamp(0.5 * (c.values(i, j) + c.values(j, i)), -1.0, 1.0);
      c.values(i, j) = r;
      c.values(j, i) = r;
    }
  }
  return c;
}

FactorSolution principal_components(const CorrelationMatrix& c, std::size_t k) {
  const auto p = static_cast<std::size_t>(c.values.rows());
  if (k < 1 || k > p) throw Error("principal_components: k must lie in [1, " + std::to_string(p) + "]");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c.values);
  if (eig.info() != Eigen::Success) throw Error("principal_components: eigendecomposition failed");
  // Eigen returns ascending eigenvalues.
  const Eigen::VectorXd& values = eig.eigenvalues();
  if (values[0] < -1e-8) throw Error("principal_components: correlation matrix is not positive semidefinite");

  FactorSolution sol;
  sol.venues = c.venues;
  sol.loadings.resize(static_cast<Index>(p), static_cast<Index>(k));
  for (std::size_t i = 0; i < p; ++i) sol.all_eigenvalues.push_back(std::max(0.0, values[static_cast<Index>(p - 1 - i)]));
  double retained = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const auto src = static_cast<Index>(p - 1 - j);
    const double lambda = sol.all_eigenvalues[j];
    sol.eigenvalues.push_back(lambda);
    retained += lambda;
    sol.loadings.col(static_cast<Index>(j)) = std::sqrt(lambda) * eig.eigenvectors().col(src);
  }
  apply_sign_convention(sol.loadings);
  sol.pct_variance = 100.0 * retained / static_cast<double>(p);
  sol.rotation = Rotation::None;
  return sol;
}

double varimax_criterion(const Eigen::MatrixXd& loadings) {
  const double p = static_cast<double>(loadings.rows());
  double v = 0.0;
  for (Index j = 0; j < loadings.cols(); ++j) {
    const Eigen::ArrayXd sq = loadings.col(j).array().square();
    const double m2 = sq.sum() / p;
    const double m4 = sq.square().sum() / p;
    v += m4 - m2 * m2;
  }
  return v;
}

VarimaxResult varimax(const Eigen::MatrixXd& loadings, const VarimaxOptions& opts) {
  const Index p = loadings.rows();
  const Index k = loadings.cols();
  VarimaxResult res;
  res.rotation = Eigen::MatrixXd::Identity(k, k);
  if (k < 2 || p == 0) {
    res.loadings = loadings;
    res.criterion.push_back(varimax_criterion(loadings));
    return res;
  }

  Eigen::VectorXd scale = Eigen::VectorXd::Ones(p);
  if (opts.kaiser_normalize) {
    for (Index i = 0; i < p; ++i) {
      const double h = loadings.row(i).norm();
      if (h > 0.0) scale[i] = h;
    }
  }
  Eigen::MatrixXd x = scale.cwiseInverse().asDiagonal() * loadings;
  const double np = static_cast<double>(p);

  double crit = varimax_criterion(x);
  res.criterion.push_back(crit);
  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    for (Index a = 0; a < k - 1; ++a) {
      for (Index b = a + 1; b < k; ++b) {
        // Closed-form optimal planar angle for the column pair (a, b).
        double sa = 0.0, sb = 0.0, sc = 0.0, sd = 0.0;
        for (Index i = 0; i < p; ++i) {
          const double u = x(i, a) * x(i, a) - x(i, b) * x(i, b);
          const double v = 2.0 * x(i, a) * x(i, b);
          sa += u;
          sb += v;
          sc += u * u - v * v;
          sd += 2.0 * u * v;
        }
        const double num = sd - 2.0 * sa * sb / np;
        const double den = sc - (sa * sa - sb * sb) / np;
        if (std::abs(num) < 1e-15 && std::abs(den) < 1e-15) continue;
        const double phi = 0.25 * std::atan2(num, den);
        if (std::abs(phi) < 1e-15) continue;
        const double cs = std::cos(phi), sn = std::sin(phi);
        for (Index i = 0; i < p; ++i) {
          const double xa = x(i, a), xb = x(i, b);
          x(i, a) = cs * xa + sn * xb;
          x(i, b) = -sn * xa + cs * xb;
        }
        for (Index i = 0; i < k; ++i) {
          const double ra = res.rotation(i, a), rb = res.rotation(i, b);
          res.rotation(i, a) = cs * ra + sn * rb;
          res.rotation(i, b) = -sn * ra + cs * rb;
        }
      }
    }
    ++res.sweeps;
    const double next = varimax_criterion(x);
    res.criterion.push_back(next);
    const double gain = next - crit;
    crit = next;
    if (gain < opts.tolerance) break;
  }
  res.loadings = scale.asDiagonal() * x;
  return res;
}

FactorSolution rotate_varimax(const FactorSolution& sol, const VarimaxOptions& opts) {
  FactorSolution out = sol;
  auto res = varimax(sol.loadings, opts);
  out.loadings = std::move(res.loadings);
  apply_sign_convention(out.loadings);
  out.rotation = Rotation::Varimax;
  return out;
}

int interfactorial_complexity(const FactorSolution& sol, std::string_view venue, double load_threshold) {
  if (!(load_threshold > 0.0)) throw Error("interfactorial_complexity: threshold must be positive");
  const auto it = std::find(sol.venues.begin(), sol.venues.end(), venue);
  if (it == sol.venues.end()) throw Error("interfactorial_complexity: unknown venue " + std::string(venue));
  const auto row = static_cast<Index>(it - sol.venues.begin());
  int count = 0;
  for (Index j = 0; j < sol.loadings.cols(); ++j) {
    if (std::abs(sol.loadings(row, j)) >= load_threshold) ++count;
  }
  return count;
}

}  // namespace citemap
