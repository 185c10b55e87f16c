#pragma once

#include <string>
#include <vector>

#include "citemap/community.hpp"

namespace citemap {

struct CommunitySlice {
  int label = 0;
  std::vector<std::string> nodes;
  Partition partition;  // over `nodes`
};

struct CommunitySeries {
  std::vector<CommunitySlice> slices;
};

struct FlowEdge {
  std::size_t slice = 0;  // edge runs from `slice` to `slice + 1`
  int from = 0;
  int to = 0;
  int mass = 0;              // shared members
  double overlap = 0.0;      // mass / |from ∩ U|
  double back_overlap = 0.0; // mass / |to ∩ U|
  bool significant = false;
};

struct FlowGraph {
  std::vector<int> labels;
  std::vector<std::vector<int>> community_sizes;  // [slice][community]
  std::vector<std::vector<int>> carried;          // [slice][community]: members present in the next slice
  std::vector<FlowEdge> edges;
  std::vector<std::string> warnings;
  double min_overlap = 0.3;

  std::size_t n_slices() const { return labels.size(); }
};

enum class FlowEventKind { Split, Merge, Birth, Death, Continuation };

const char* to_string(FlowEventKind kind);

struct FlowEvent {
  FlowEventKind kind;
  std::size_t at = 0;              // slice boundary index (edge slice)
  std::vector<int> sources;        // communities in slice `at`
  std::vector<int> targets;        // communities in slice `at + 1`
};

/// Links communities of adjacent slices by shared members. An edge is
/// significant when the shared mass covers at least min_overlap of both
/// endpoint communities, measured within the nodes present in both slices.
FlowGraph align_communities(const CommunitySeries& series, double min_overlap);

std::vector<FlowEvent> detect_events(const FlowGraph& g);

struct EventCounts {
  int splits = 0, merges = 0, births = 0, deaths = 0, continuations = 0;
};
EventCounts count_events(const std::vector<FlowEvent>& events);

CommunitySeries reversed(const CommunitySeries& series);

struct Band {
  std::size_t slice = 0;
  int community = 0;
  int size = 0;
  double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;
};

struct Ribbon {
  std::size_t edge = 0;  // index into FlowGraph::edges
  double x0 = 0.0, x1 = 0.0;
  double src_y0 = 0.0, src_y1 = 0.0;
  double dst_y0 = 0.0, dst_y1 = 0.0;
};

struct AlluvialGeometry {
  std::vector<Band> bands;
  std::vector<Ribbon> ribbons;
  double gap = 0.02;
  double band_width = 0.04;
};

/// Unit-square geometry: per slice, bands stacked by descending size with a
/// gap of 0.02 between them; ribbon ends scale with edge mass.
AlluvialGeometry alluvial_layout(const FlowGraph& g);

}  // namespace citemap
