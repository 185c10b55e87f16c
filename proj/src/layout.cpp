#include "citemap/layout.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>

#include "citemap/common.hpp"

namespace citemap {

namespace {

using Index = Eigen::Index;

struct Anchors {
  std::vector<char> active;   // per venue
  Eigen::MatrixX2d target;    // valid where active
  double alpha = 0.0;

  bool any() const { return alpha > 0.0 && std::any_of(active.begin(), active.end(), [](char a) { return a != 0; }); }
};

double anchor_energy(const Anchors& a, const Eigen::MatrixX2d& x) {
  if (!a.any()) return 0.0;
  double e = 0.0;
  for (Index i = 0; i < x.rows(); ++i) {
    if (a.active[static_cast<std::size_t>(i)]) e += (x.row(i) - a.target.row(i)).squaredNorm();
  }
  return a.alpha * e;
}

void center(Eigen::MatrixX2d& x) {
  if (x.rows() == 0) return;
  const Eigen::RowVector2d mean = x.colwise().mean();
  x.rowwise() -= mean;
}

StressResult majorize(const DissimilarityMatrix& d, Eigen::MatrixX2d x, const Anchors& anchors, const StressOptions& opts) {
  const Index n = d.values.rows();
  if (n < 2) throw Error("stress_majorization: need at least 2 venues");
  if (x.rows() != n) throw Error("stress_majorization: initial configuration size mismatch");
  if (n >= 3 && d.values.cwiseAbs().maxCoeff() <= 0.0) {
    throw Error("stress_majorization: all dissimilarities are zero");
  }

  const bool anchored = anchors.any();
  Eigen::MatrixXd system = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      system(i, j) = -d.weights(i, j);
      system(i, i) += d.weights(i, j);
    }
  }
  if (anchored) {
    for (Index i = 0; i < n; ++i) {
      if (anchors.active[static_cast<std::size_t>(i)]) system(i, i) += anchors.alpha;
    }
  } else {
    // Adding J/n makes the weighted Laplacian invertible without changing
    // its action on centred vectors.
    system.array() += 1.0 / static_cast<double>(n);
  }
  const Eigen::LDLT<Eigen::MatrixXd> solver(system);

  StressResult res;
  if (!anchored) center(x);
  double energy = raw_stress(d, x) + anchor_energy(anchors, x);
  res.stress_history.push_back(energy);

  Eigen::MatrixXd b(n, n);
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    b.setZero();
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        const double dist = (x.row(i) - x.row(j)).norm();
        if (dist <= 1e-300) continue;
        const double v = -d.weights(i, j) * d.values(i, j) / dist;
        b(i, j) = v;
        b(j, i) = v;
        b(i, i) -= v;
        b(j, j) -= v;
      }
    }
    Eigen::MatrixX2d rhs = b * x;
    if (anchored) {
      for (Index i = 0; i < n; ++i) {
        if (anchors.active[static_cast<std::size_t>(i)]) rhs.row(i) += anchors.alpha * anchors.target.row(i);
      }
    }
    Eigen::MatrixX2d next = solver.solve(rhs);
    if (!anchored) center(next);
    const double next_energy = raw_stress(d, next) + anchor_energy(anchors, next);
    x = std::move(next);
    res.stress_history.push_back(next_energy);
    ++res.iterations;
    const double prev = energy;
    energy = next_energy;
    if (energy <= 1e-20) break;
    if ((prev - energy) / prev < opts.tol) break;
  }
  res.config.venues = d.venues;
  res.config.positions = std::move(x);
  return res;
}

}  // namespace

DissimilarityMatrix dissimilarity_from_similarity(const SimilarityMatrix& s, std::optional<double> tau) {
  DissimilarityMatrix d;
  d.venues = s.venues;
  const Index n = s.values.rows();
  d.values = (Eigen::MatrixXd::Ones(n, n) - s.values).cwiseMax(0.0);
  d.weights = Eigen::MatrixXd::Ones(n, n);
  for (Index i = 0; i < n; ++i) {
    d.values(i, i) = 0.0;
    d.weights(i, i) = 0.0;
    if (!tau) continue;
    for (Index j = 0; j < n; ++j) {
      if (i != j && !(s.values(i, j) > *tau)) d.weights(i, j) = 0.1;
    }
  }
  return d;
}

Configuration random_configuration(const std::vector<std::string>& venues, std::uint64_t seed) {
  Rng rng(seed);
  Configuration c;
  c.venues = venues;
  c.positions.resize(static_cast<Index>(venues.size()), 2);
  for (Index i = 0; i < c.positions.rows(); ++i) {
    c.positions(i, 0) = rng.uniform(-0.5, 0.5);
    c.positions(i, 1) = rng.uniform(-0.5, 0.5);
  }
  return c;
}

double raw_stress(const DissimilarityMatrix& d, const Eigen::MatrixX2d& x) {
  double s = 0.0;
  const Index n = d.values.rows();
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double r = (x.row(i) - x.row(j)).norm() - d.values(i, j);
      s += d.weights(i, j) * r * r;
    }
  }
  return s;
}

StressResult stress_majorization(const DissimilarityMatrix& d, const Configuration& init, const StressOptions& opts) {
  return majorize(d, init.positions, Anchors{}, opts);
}

StressResult stress_majorization(const DissimilarityMatrix& d, std::uint64_t seed, const StressOptions& opts) {
  return stress_majorization(d, random_configuration(d.venues, seed), opts);
}

double kruskal_stress(const DissimilarityMatrix& d, const Configuration& c) {
  const Index n = d.values.rows();
  std::vector<Index> pos(static_cast<std::size_t>(n));
  if (c.venues == d.venues) {
    for (Index i = 0; i < n; ++i) pos[static_cast<std::size_t>(i)] = i;
  } else {
    std::unordered_map<std::string, Index> where;
    for (std::size_t i = 0; i < c.venues.size(); ++i) where.emplace(c.venues[i], static_cast<Index>(i));
    for (Index i = 0; i < n; ++i) {
      auto it = where.find(d.venues[static_cast<std::size_t>(i)]);
      if (it == where.end()) throw Error("kruskal_stress: configuration has no position for " + d.venues[static_cast<std::size_t>(i)]);
      pos[static_cast<std::size_t>(i)] = it->second;
    }
  }
  double num = 0.0, den = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double dist = (c.positions.row(pos[static_cast<std::size_t>(i)]) - c.positions.row(pos[static_cast<std::size_t>(j)])).norm();
      num += (dist - d.values(i, j)) * (dist - d.values(i, j));
      den += d.values(i, j) * d.values(i, j);
    }
  }
  if (den <= 0.0) throw Error("kruskal_stress: all target dissimilarities are zero");
  return std::sqrt(num / den);
}

std::uint64_t frame_seed(std::uint64_t seed, int label) { return derive_seed(seed, "layout-frame", label); }

LayoutSeries dynamic_layout(const std::vector<DissimilarityMatrix>& series, const std::vector<int>& labels,
                            const DynamicLayoutOptions& opts) {
  if (series.empty()) throw Error("dynamic_layout: no frames");
  if (labels.size() != series.size()) throw Error("dynamic_layout: one label per frame required");
  if (!(opts.alpha >= 0.0)) throw Error("dynamic_layout: alpha must be >= 0");
  if (opts.smooth_span < 1) throw Error("dynamic_layout: smooth_span must be >= 1");

  LayoutSeries ls;
  ls.alpha = opts.alpha;
  ls.smooth_span = opts.smooth_span;
  // Positions of the trailing frames, most recent last.
  std::deque<std::unordered_map<std::string, Eigen::RowVector2d>> history;

  for (std::size_t t = 0; t < series.size(); ++t) {
    const auto& d = series[t];
    const Index n = static_cast<Index>(d.venues.size());
    LayoutFrame frame;
    frame.label = labels[t];
    frame.seed = frame_seed(opts.seed, labels[t]);

    Configuration init = random_configuration(d.venues, frame.seed);
    Anchors anchors;
    anchors.alpha = opts.alpha;
    anchors.active.assign(static_cast<std::size_t>(n), 0);
    anchors.target = Eigen::MatrixX2d::Zero(n, 2);

    if (opts.alpha > 0.0 && !history.empty()) {
      std::vector<char> placed(static_cast<std::size_t>(n), 0);
      for (Index i = 0; i < n; ++i) {
        Eigen::RowVector2d sum = Eigen::RowVector2d::Zero();
        int seen = 0;
        for (const auto& past : history) {
          auto it = past.find(d.venues[static_cast<std::size_t>(i)]);
          if (it == past.end()) continue;
          sum += it->second;
          ++seen;
        }
        if (seen == 0) continue;
        anchors.active[static_cast<std::size_t>(i)] = 1;
        anchors.target.row(i) = sum / seen;
        init.positions.row(i) = anchors.target.row(i);
        placed[static_cast<std::size_t>(i)] = 1;
      }
      // New venues start at the similarity-weighted centroid of their
      // above-threshold neighbours, jittered so twins do not coincide.
      Rng jitter(derive_seed(frame.seed, "jitter"));
      for (Index i = 0; i < n; ++i) {
        if (placed[static_cast<std::size_t>(i)]) continue;
        Eigen::RowVector2d sum = Eigen::RowVector2d::Zero();
        double mass = 0.0;
        for (Index j = 0; j < n; ++j) {
          if (j == i || !placed[static_cast<std::size_t>(j)] || d.weights(i, j) < 1.0) continue;
          const double sim = 1.0 - d.values(i, j);
          if (sim <= 0.0) continue;
          sum += sim * init.positions.row(j);
          mass += sim;
        }
        if (mass > 0.0) {
          init.positions.row(i) = sum / mass;
          init.positions(i, 0) += jitter.uniform(-1e-3, 1e-3);
          init.positions(i, 1) += jitter.uniform(-1e-3, 1e-3);
        }
      }
    }

    auto result = majorize(d, init.positions, anchors, opts.stress);
    frame.config = std::move(result.config);
    frame.stress = kruskal_stress(d, frame.config);

    std::unordered_map<std::string, Eigen::RowVector2d> snapshot;
    for (Index i = 0; i < n; ++i) snapshot.emplace(d.venues[static_cast<std::size_t>(i)], frame.config.positions.row(i));
    history.push_back(std::move(snapshot));
    while (history.size() > static_cast<std::size_t>(opts.smooth_span)) history.pop_front();
    ls.frames.push_back(std::move(frame));
  }
  return ls;
}

double aggregated_stress(const LayoutSeries& ls, const std::vector<DissimilarityMatrix>& ds) {
  if (ls.frames.empty() || ds.empty()) throw Error("aggregated_stress: empty series");
  if (ls.frames.size() != ds.size()) throw Error("aggregated_stress: frames and matrices differ in number");
  double num = 0.0, den = 0.0;
  for (std::size_t t = 0; t < ds.size(); ++t) {
    const auto& d = ds[t];
    const auto& c = ls.frames[t].config;
    if (c.venues != d.venues) throw Error("aggregated_stress: frame venues do not match matrix " + std::to_string(t));
    const Index n = d.values.rows();
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        const double dist = (c.positions.row(i) - c.positions.row(j)).norm();
        num += (dist - d.values(i, j)) * (dist - d.values(i, j));
        den += d.values(i, j) * d.values(i, j);
      }
    }
  }
  if (den <= 0.0) throw Error("aggregated_stress: all target dissimilarities are zero");
  return std::sqrt(num / den);
}

namespace {
template <class F>
void for_each_shift(const LayoutSeries& ls, std::size_t from_frame, F&& f) {
  for (std::size_t t = std::max<std::size_t>(from_frame, 1); t < ls.frames.size(); ++t) {
    const auto& prev = ls.frames[t - 1].config;
    const auto& cur = ls.frames[t].config;
    std::unordered_map<std::string, Index> where;
    for (std::size_t i = 0; i < prev.venues.size(); ++i) where.emplace(prev.venues[i], static_cast<Index>(i));
    for (std::size_t i = 0; i < cur.venues.size(); ++i) {
      auto it = where.find(cur.venues[i]);
      if (it == where.end()) continue;
      f((cur.positions.row(static_cast<Index>(i)) - prev.positions.row(it->second)).norm());
    }
  }
}
}  // namespace

double total_displacement(const LayoutSeries& ls) {
  double s = 0.0;
  for_each_shift(ls, 1, [&](double v) { s += v; });
  return s;
}

double max_displacement(const LayoutSeries& ls, std::size_t from_frame) {
  double m = 0.0;
  for_each_shift(ls, from_frame, [&](double v) { m = std::max(m, v); });
  return m;
}

}  // namespace citemap
