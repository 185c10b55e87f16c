#include "citemap/community.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "citemap/common.hpp"

namespace citemap {

namespace {

constexpr double kGainEps = 1e-12;

// Weighted graph at one aggregation level. Self-loop weight holds the
// internal weight counted in both directions (sum over i,j in C of A_ij).
struct LevelGraph {
  std::vector<std::vector<std::pair<std::size_t, double>>> nbrs;
  std::vector<double> self;
  std::vector<double> degree;  // k_i including the self loop
  double two_m = 0.0;

  std::size_t size() const { return nbrs.size(); }
};

LevelGraph from_network(const SimilarityNetwork& net, bool weighted) {
  LevelGraph g;
  const std::size_t n = net.n_nodes();
  g.nbrs.resize(n);
  g.self.assign(n, 0.0);
  g.degree.assign(n, 0.0);
  for (const auto& e : net.edges) {
    const double w = weighted ? e.weight : 1.0;
    g.nbrs[e.u].emplace_back(e.v, w);
    g.nbrs[e.v].emplace_back(e.u, w);
    g.degree[e.u] += w;
    g.degree[e.v] += w;
    g.two_m += 2.0 * w;
  }
  return g;
}

// Returns true when at least one node changed community.
bool local_moving(const LevelGraph& g, std::vector<std::size_t>& comm, Rng& rng) {
  const std::size_t n = g.size();
  std::vector<double> tot(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) tot[comm[i]] += g.degree[i];

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);

  std::vector<double> link(n, 0.0);
  std::vector<char> is_touched(n, 0);
  std::vector<std::size_t> touched;
  bool any_move = false;
  bool moved = true;
  while (moved) {
    moved = false;
    for (std::size_t i : order) {
      const std::size_t own = comm[i];
      const double k = g.degree[i];
      touched.clear();
      touched.push_back(own);
      is_touched[own] = 1;
      for (const auto& [j, w] : g.nbrs[i]) {
        const std::size_t c = comm[j];
        if (!is_touched[c]) {
          is_touched[c] = 1;
          touched.push_back(c);
        }
        link[c] += w;
      }
      tot[own] -= k;

      auto gain = [&](std::size_t c) { return link[c] - tot[c] * k / g.two_m; };
      const double stay = gain(own);
      double best_gain = stay;
      for (std::size_t c : touched) best_gain = std::max(best_gain, gain(c));
      std::size_t target = own;
      if (best_gain > stay + kGainEps) {
        target = SIZE_MAX;
        for (std::size_t c : touched) {
          if (gain(c) >= best_gain - kGainEps && c < target) target = c;
        }
      }
      tot[target] += k;
      for (std::size_t c : touched) {
        link[c] = 0.0;
        is_touched[c] = 0;
      }
      if (target != own) {
        comm[i] = target;
        moved = true;
        any_move = true;
      }
    }
  }
  return any_move;
}

// Renumbers comm to 0..K-1 in order of first appearance; returns K.
std::size_t renumber(std::vector<std::size_t>& comm) {
  std::map<std::size_t, std::size_t> ids;
  for (auto& c : comm) {
    auto [it, inserted] = ids.emplace(c, ids.size());
    c = it->second;
  }
  return ids.size();
}

LevelGraph aggregate(const LevelGraph& g, const std::vector<std::size_t>& comm, std::size_t k) {
  LevelGraph agg;
  agg.nbrs.resize(k);
  agg.self.assign(k, 0.0);
  agg.degree.assign(k, 0.0);
  agg.two_m = g.two_m;
  std::vector<std::map<std::size_t, double>> acc(k);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::size_t ci = comm[i];
    agg.self[ci] += g.self[i];
    agg.degree[ci] += g.degree[i];
    for (const auto& [j, w] : g.nbrs[i]) {
      const std::size_t cj = comm[j];
      if (ci == cj) {
        agg.self[ci] += w;
      } else {
        acc[ci][cj] += w;
      }
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    for (const auto& [d, w] : acc[c]) agg.nbrs[c].emplace_back(d, w);
  }
  return agg;
}

// Vertex mover pass: every node moves once to its best community (possibly
// downhill), then the sequence is cut back to its best prefix. Returns the gain.
double vertex_mover(const LevelGraph& g, std::vector<std::size_t>& comm) {
  const std::size_t n = g.size();
  std::vector<double> tot(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) tot[comm[i]] += g.degree[i];
  std::vector<char> locked(n, 0);
  std::vector<double> link(n, 0.0);
  std::vector<std::pair<std::size_t, std::size_t>> undo;  // node, old community
  double running = 0.0, best = 0.0;
  std::size_t best_len = 0;

  for (std::size_t step = 0; step < n; ++step) {
    double step_gain = -1e300;
    std::size_t node = SIZE_MAX, target = SIZE_MAX;
    for (std::size_t i = 0; i < n; ++i) {
      if (locked[i]) continue;
      const std::size_t own = comm[i];
      const double k = g.degree[i];
      std::vector<std::size_t> seen{own};
      for (const auto& [j, w] : g.nbrs[i]) {
        if (link[comm[j]] == 0.0 && std::find(seen.begin(), seen.end(), comm[j]) == seen.end()) seen.push_back(comm[j]);
        link[comm[j]] += w;
      }
      const double stay = link[own] - (tot[own] - k) * k / g.two_m;
      // an empty community is always available: gain 0
      std::size_t empty = SIZE_MAX;
      for (std::size_t c = 0; c < n && empty == SIZE_MAX; ++c) {
        if (tot[c] <= 0.0 && c != own) empty = c;
      }
      auto consider = [&](std::size_t c, double gain) {
        const double d = gain - stay;
        if (d > step_gain + kGainEps || (d > step_gain - kGainEps && (i < node || (i == node && c < target)))) {
          step_gain = d;
          node = i;
          target = c;
        }
      };
      for (std::size_t c : seen) {
        if (c != own) consider(c, link[c] - tot[c] * k / g.two_m);
      }
      if (empty != SIZE_MAX && tot[own] - k > 0.0) consider(empty, 0.0);
      for (std::size_t c : seen) link[c] = 0.0;
    }
    if (node == SIZE_MAX) break;
    locked[node] = 1;
    undo.emplace_back(node, comm[node]);
    tot[comm[node]] -= g.degree[node];
    tot[target] += g.degree[node];
    comm[node] = target;
    running += step_gain;
    if (running > best + kGainEps) {
      best = running;
      best_len = undo.size();
    }
  }
  while (undo.size() > best_len) {
    comm[undo.back().first] = undo.back().second;
    undo.pop_back();
  }
  return best;
}

}  // namespace

Partition Partition::from_labels(const std::vector<int>& labels) {
  Partition p;
  p.assignment.reserve(labels.size());
  std::map<int, int> ids;
  for (int l : labels) {
    auto [it, inserted] = ids.emplace(l, static_cast<int>(ids.size()));
    p.assignment.push_back(it->second);
  }
  return p;
}

int Partition::n_communities() const {
  int k = 0;
  for (int c : assignment) k = std::max(k, c + 1);
  return k;
}

std::vector<std::vector<std::size_t>> Partition::members() const {
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(n_communities()));
  for (std::size_t i = 0; i < assignment.size(); ++i) out[static_cast<std::size_t>(assignment[i])].push_back(i);
  return out;
}

double modularity(const SimilarityNetwork& net, const Partition& p, bool weighted) {
  if (p.n_nodes() != net.n_nodes()) {
    throw Error("modularity: partition covers " + std::to_string(p.n_nodes()) + " nodes, network has " +
                std::to_string(net.n_nodes()));
  }
  for (int c : p.assignment) {
    if (c < 0) throw Error("modularity: node missing from partition");
  }
  const auto k = static_cast<std::size_t>(p.n_communities());
  std::vector<double> inside(k, 0.0), strength(k, 0.0);
  double total = 0.0;
  for (const auto& e : net.edges) {
    const double w = weighted ? e.weight : 1.0;
    const auto cu = static_cast<std::size_t>(p.assignment[e.u]);
    const auto cv = static_cast<std::size_t>(p.assignment[e.v]);
    total += w;
    strength[cu] += w;
    strength[cv] += w;
    if (cu == cv) inside[cu] += w;
  }
  if (total <= 0.0) return 0.0;
  double q = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    const double share = strength[c] / (2.0 * total);
    q += inside[c] / total - share * share;
  }
  return q;
}

namespace {

constexpr int kLouvainRestarts = 4;

std::vector<std::size_t> louvain_once(const LevelGraph& base, Rng& rng) {
  std::vector<std::size_t> node_comm(base.size());
  std::iota(node_comm.begin(), node_comm.end(), 0);
  LevelGraph g = base;
  while (true) {
    while (true) {
      std::vector<std::size_t> comm(g.size());
      std::iota(comm.begin(), comm.end(), 0);
      const bool moved = local_moving(g, comm, rng);
      if (vertex_mover(g, comm) <= kGainEps && !moved) break;
      const std::size_t k = renumber(comm);
      for (auto& c : node_comm) c = comm[c];
      if (k == g.size()) break;
      g = aggregate(g, comm, k);
    }
    // refinement on the original nodes: greedy first, then downhill-tolerant
    const bool moved = local_moving(base, node_comm, rng);
    if (!moved && vertex_mover(base, node_comm) <= kGainEps) break;
    const std::size_t k = renumber(node_comm);
    g = aggregate(base, node_comm, k);
  }
  return node_comm;
}

}  // namespace

Partition louvain(const SimilarityNetwork& net, std::uint64_t seed, bool weighted) {
  const std::size_t n = net.n_nodes();
  if (n == 0) throw Error("louvain: empty network");

  const LevelGraph base = from_network(net, weighted);
  if (base.two_m <= 0.0) {
    std::vector<int> singletons(n);
    std::iota(singletons.begin(), singletons.end(), 0);
    return Partition::from_labels(singletons);
  }

  // several visit orders, best Q kept (first one on ties)
  Partition best;
  double best_q = -2.0;
  for (int r = 0; r < kLouvainRestarts; ++r) {
    Rng rng(r == 0 ? seed : derive_seed(seed, "louvain-restart", r));
    const auto comm = louvain_once(base, rng);
    auto p = Partition::from_labels(std::vector<int>(comm.begin(), comm.end()));
    const double q = modularity(net, p, weighted);
    if (q > best_q + kGainEps) {
      best_q = q;
      best = std::move(p);
    }
  }
  return best;
}

BruteForceResult brute_force_partition(const SimilarityNetwork& net, bool weighted) {
  const std::size_t n = net.n_nodes();
  if (n == 0) throw Error("brute_force_partition: empty network");
  if (n > 10) throw Error("brute_force_partition: " + std::to_string(n) + " nodes exceeds the limit of 10");

  // Restricted growth strings enumerate every set partition exactly once.
  std::vector<int> rgs(n, 0), prefix_max(n, 0);
  BruteForceResult best;
  best.partition.assignment = rgs;
  best.modularity = modularity(net, best.partition, weighted);
  Partition trial;
  while (true) {
    std::size_t i = n - 1;
    while (i > 0 && rgs[i] > prefix_max[i - 1]) --i;
    if (i == 0) break;
    ++rgs[i];
    prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      rgs[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
    trial.assignment = rgs;
    const double q = modularity(net, trial, weighted);
    if (q > best.modularity + kGainEps) {
      best.modularity = q;
      best.partition = trial;
    }
  }
  return best;
}

}  // namespace citemap
