#include "citemap/flow.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>

#include "citemap/common.hpp"

namespace citemap {

const char* to_string(FlowEventKind kind) {
  switch (kind) {
    case FlowEventKind::Split: return "SPLIT";
    case FlowEventKind::Merge: return "MERGE";
    case FlowEventKind::Birth: return "BIRTH";
    case FlowEventKind::Death: return "DEATH";
    case FlowEventKind::Continuation: return "CONTINUATION";
  }
  return "?";
}

FlowGraph align_communities(const CommunitySeries& series, double min_overlap) {
  if (series.slices.size() < 2) throw Error("align_communities: need at least 2 slices");
  if (!(min_overlap > 0.0 && min_overlap <= 1.0)) throw Error("align_communities: min_overlap must lie in (0, 1]");

  FlowGraph g;
  g.min_overlap = min_overlap;
  for (std::size_t s = 0; s < series.slices.size(); ++s) {
    const auto& slice = series.slices[s];
    if (s > 0 && slice.label <= series.slices[s - 1].label) throw Error("align_communities: labels must increase");
    if (slice.partition.n_nodes() != slice.nodes.size()) {
      throw Error("align_communities: partition does not cover slice " + std::to_string(slice.label));
    }
    g.labels.push_back(slice.label);
    std::vector<int> sizes(static_cast<std::size_t>(slice.partition.n_communities()), 0);
    for (int c : slice.partition.assignment) ++sizes[static_cast<std::size_t>(c)];
    g.community_sizes.push_back(std::move(sizes));
    g.carried.emplace_back(g.community_sizes.back().size(), 0);
  }

  for (std::size_t s = 0; s + 1 < series.slices.size(); ++s) {
    const auto& a = series.slices[s];
    const auto& b = series.slices[s + 1];
    std::unordered_map<std::string, int> b_comm;
    for (std::size_t i = 0; i < b.nodes.size(); ++i) b_comm.emplace(b.nodes[i], b.partition.assignment[i]);

    std::map<std::pair<int, int>, int> mass;
    std::vector<int> from_u(g.community_sizes[s].size(), 0);
    std::vector<int> to_u(g.community_sizes[s + 1].size(), 0);
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
      auto it = b_comm.find(a.nodes[i]);
      if (it == b_comm.end()) continue;
      const int ca = a.partition.assignment[i];
      ++mass[{ca, it->second}];
      ++from_u[static_cast<std::size_t>(ca)];
      ++to_u[static_cast<std::size_t>(it->second)];
    }
    g.carried[s] = from_u;
    if (mass.empty()) {
      g.warnings.push_back("slices " + std::to_string(a.label) + " and " + std::to_string(b.label) +
                           " share no nodes; no flow edges");
      continue;
    }
    for (const auto& [key, m] : mass) {
      FlowEdge e;
      e.slice = s;
      e.from = key.first;
      e.to = key.second;
      e.mass = m;
      e.overlap = static_cast<double>(m) / from_u[static_cast<std::size_t>(key.first)];
      e.back_overlap = static_cast<double>(m) / to_u[static_cast<std::size_t>(key.second)];
      e.significant = e.overlap >= min_overlap && e.back_overlap >= min_overlap;
      g.edges.push_back(e);
    }
  }
  return g;
}

std::vector<FlowEvent> detect_events(const FlowGraph& g) {
  std::vector<FlowEvent> events;
  for (std::size_t s = 0; s + 1 < g.n_slices(); ++s) {
    std::vector<std::vector<int>> out(g.community_sizes[s].size());
    std::vector<std::vector<int>> in(g.community_sizes[s + 1].size());
    for (const auto& e : g.edges) {
      if (e.slice != s || !e.significant) continue;
      out[static_cast<std::size_t>(e.from)].push_back(e.to);
      in[static_cast<std::size_t>(e.to)].push_back(e.from);
    }
    for (std::size_t c = 0; c < out.size(); ++c) {
      const int id = static_cast<int>(c);
      if (out[c].empty()) {
        events.push_back({FlowEventKind::Death, s, {id}, {}});
      } else if (out[c].size() >= 2) {
        events.push_back({FlowEventKind::Split, s, {id}, out[c]});
      } else if (in[static_cast<std::size_t>(out[c].front())].size() == 1) {
        events.push_back({FlowEventKind::Continuation, s, {id}, out[c]});
      }
    }
    for (std::size_t c = 0; c < in.size(); ++c) {
      const int id = static_cast<int>(c);
      if (in[c].empty()) {
        events.push_back({FlowEventKind::Birth, s, {}, {id}});
      } else if (in[c].size() >= 2) {
        events.push_back({FlowEventKind::Merge, s, in[c], {id}});
      }
    }
  }
  return events;
}

EventCounts count_events(const std::vector<FlowEvent>& events) {
  EventCounts n;
  for (const auto& e : events) {
    switch (e.kind) {
      case FlowEventKind::Split: ++n.splits; break;
      case FlowEventKind::Merge: ++n.merges; break;
      case FlowEventKind::Birth: ++n.births; break;
      case FlowEventKind::Death: ++n.deaths; break;
      case FlowEventKind::Continuation: ++n.continuations; break;
    }
  }
  return n;
}

CommunitySeries reversed(const CommunitySeries& series) {
  CommunitySeries out;
  out.slices.assign(series.slices.rbegin(), series.slices.rend());
  // Labels must increase; negate them so ordering flips with the slices.
  for (auto& s : out.slices) s.label = -s.label;
  return out;
}

AlluvialGeometry alluvial_layout(const FlowGraph& g) {
  if (g.n_slices() == 0) throw Error("alluvial_layout: empty flow graph");
  AlluvialGeometry geo;
  const std::size_t ns = g.n_slices();
  const double span = 1.0 - geo.band_width;

  // band_index[slice][community] -> index into geo.bands
  std::vector<std::vector<std::size_t>> band_index(ns);
  std::vector<double> unit(ns, 0.0);  // height per member
  for (std::size_t s = 0; s < ns; ++s) {
    const auto& sizes = g.community_sizes[s];
    std::vector<int> order(sizes.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return sizes[static_cast<std::size_t>(a)] > sizes[static_cast<std::size_t>(b)]; });
    const double total = std::accumulate(sizes.begin(), sizes.end(), 0.0);
    const double gaps = sizes.empty() ? 0.0 : geo.gap * static_cast<double>(sizes.size() - 1);
    unit[s] = total > 0.0 ? (1.0 - gaps) / total : 0.0;
    const double x0 = ns == 1 ? 0.0 : span * static_cast<double>(s) / static_cast<double>(ns - 1);
    band_index[s].assign(sizes.size(), 0);
    double y = 0.0;
    for (int c : order) {
      Band b;
      b.slice = s;
      b.community = c;
      b.size = sizes[static_cast<std::size_t>(c)];
      b.x0 = x0;
      b.x1 = x0 + geo.band_width;
      b.y0 = y;
      b.y1 = y + unit[s] * b.size;
      band_index[s][static_cast<std::size_t>(c)] = geo.bands.size();
      geo.bands.push_back(b);
      y = b.y1 + geo.gap;
    }
  }

  // Ribbons leave each band ordered by target position and enter each band
  // ordered by source position, so they do not cross inside a band.
  std::vector<std::size_t> order(g.edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> out_cursor(geo.bands.size()), in_cursor(geo.bands.size());
  for (std::size_t i = 0; i < geo.bands.size(); ++i) out_cursor[i] = in_cursor[i] = geo.bands[i].y0;

  auto src_band = [&](const FlowEdge& e) { return band_index[e.slice][static_cast<std::size_t>(e.from)]; };
  auto dst_band = [&](const FlowEdge& e) { return band_index[e.slice + 1][static_cast<std::size_t>(e.to)]; };

  std::vector<Ribbon> ribbons(g.edges.size());
  auto by_source = order;
  std::stable_sort(by_source.begin(), by_source.end(), [&](std::size_t a, std::size_t b) {
    const auto& ea = g.edges[a];
    const auto& eb = g.edges[b];
    return std::tuple(ea.slice, src_band(ea), dst_band(ea)) < std::tuple(eb.slice, src_band(eb), dst_band(eb));
  });
  for (std::size_t idx : by_source) {
    const auto& e = g.edges[idx];
    const auto sb = src_band(e);
    auto& r = ribbons[idx];
    r.edge = idx;
    r.x0 = geo.bands[sb].x1;
    r.src_y0 = out_cursor[sb];
    r.src_y1 = r.src_y0 + unit[e.slice] * e.mass;
    out_cursor[sb] = r.src_y1;
  }
  auto by_target = order;
  std::stable_sort(by_target.begin(), by_target.end(), [&](std::size_t a, std::size_t b) {
    const auto& ea = g.edges[a];
    const auto& eb = g.edges[b];
    return std::tuple(ea.slice, dst_band(ea), src_band(ea)) < std::tuple(eb.slice, dst_band(eb), src_band(eb));
  });
  for (std::size_t idx : by_target) {
    const auto& e = g.edges[idx];
    const auto db = dst_band(e);
    auto& r = ribbons[idx];
    r.x1 = geo.bands[db].x0;
    r.dst_y0 = in_cursor[db];
    r.dst_y1 = r.dst_y0 + unit[e.slice + 1] * e.mass;
    in_cursor[db] = r.dst_y1;
  }
  geo.ribbons = std::move(ribbons);
  return geo;
}

}  // namespace citemap
