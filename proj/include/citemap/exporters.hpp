#pragma once

// Deterministic serializers (and the readers needed to round-trip them).
// All text output uses LF line endings and no BOM.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "citemap/community.hpp"
#include "citemap/corpus.hpp"
#include "citemap/factors.hpp"
#include "citemap/flow.hpp"
#include "citemap/layout.hpp"
#include "citemap/simnet.hpp"

namespace citemap {

// Pajek network: "*Vertices N", `<id> "<label>"` (1-based), "*Edges", `<u> <v> <w>` (4 decimals).
std::string write_pajek(const SimilarityNetwork& net);
void write_pajek(const SimilarityNetwork& net, const std::string& path);
SimilarityNetwork read_pajek(std::string_view text);

// Pajek partition: "*Vertices N" then one 1-based community id per line.
std::string write_clu(const Partition& p, const std::vector<std::string>& node_order);
void write_clu(const Partition& p, const std::vector<std::string>& node_order, const std::string& path);
Partition read_clu(std::string_view text);

std::string write_edge_list_csv(const SimilarityNetwork& net);
std::string write_partition_csv(const Partition& p, const std::vector<std::string>& node_order);

struct MetricsRow {
  int first_year = 0;
  int last_year = 0;
  std::int64_t n_documents = 0;
  std::int64_t n_cited_venues = 0;
  std::int64_t n_edge_endpoints = 0;
  std::int64_t n_communities = 0;
  double modularity = 0.0;
  double avg_clustering = 0.0;
  double density = 0.0;
};

struct ColumnStats {
  double mean = 0.0;
  double sd = 0.0;  // sample (n - 1); 0 for a single value
};

/// Streaming (Welford) mean and sample standard deviation.
ColumnStats column_stats(const std::vector<double>& values);
/// "x.xxx (±x.xxx)"
std::string format_mean_sd(const ColumnStats& s);

/// Table-shaped CSV: one row per window plus a footer with column sums
/// (documents, venues, endpoints) and mean (± sample sd) elsewhere.
std::string write_metrics_report(const std::vector<MetricsRow>& rows);
std::vector<MetricsRow> read_metrics_report(std::string_view text);

std::string write_loadings_report(const FactorSolution& sol, std::optional<std::string> highlight = std::nullopt);
std::string write_scree_csv(const FactorSolution& sol);

/// Standalone SVG 1.1: one rect per band, one cubic-Bezier path per ribbon.
/// Communities linked by a continuation keep their colour.
std::string render_alluvial_svg(const FlowGraph& g, const AlluvialGeometry& geo);

std::string write_flow_csv(const FlowGraph& g);
std::string write_events_csv(const FlowGraph& g, const std::vector<FlowEvent>& events);
std::string write_bands_csv(const FlowGraph& g, const AlluvialGeometry& geo);
std::string write_ribbons_csv(const FlowGraph& g, const AlluvialGeometry& geo);

std::string write_frame_csv(const Configuration& c);
Configuration read_frame_csv(std::string_view text);

// Occurrence matrix: triplets (doc_id, venue, count) plus a key/value sidecar
// carrying window metadata and the full row and column order.
std::string write_matrix_triplets(const OccurrenceMatrix& m);
std::string write_matrix_sidecar(const Window& w, const OccurrenceMatrix& m);
struct MatrixFiles {
  Window window;
  OccurrenceMatrix matrix;
};
MatrixFiles read_matrix(std::string_view triplets, std::string_view sidecar);

struct LineSeries {
  std::string name;
  std::vector<double> values;
};
/// Simple line chart over integer x labels.
std::string render_line_chart_svg(const std::string& title, const std::vector<int>& x,
                                  const std::vector<LineSeries>& series);

}  // namespace citemap
