#include "citemap/exporters.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

#include "citemap/common.hpp"

namespace citemap {

namespace {

std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> out;
  for (auto& l : split(text, '\n')) {
    if (!l.empty() && l.back() == '\r') l.pop_back();
    out.push_back(std::move(l));
  }
  while (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

long long to_int(const std::string& s, const char* what) {
  long long v = 0;
  const std::string t = trim(s);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) throw Error(std::string(what) + ": not an integer: '" + s + "'");
  return v;
}

double to_double(const std::string& s, const char* what) {
  const std::string t = trim(s);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size()) throw Error(std::string(what) + ": not a number: '" + s + "'");
  return v;
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[i])) != std::tolower(static_cast<unsigned char>(prefix[i]))) return false;
  }
  return true;
}

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                                "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string svg_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string write_pajek(const SimilarityNetwork& net) {
  if (net.nodes.empty()) throw Error("write_pajek: empty network");
  std::string out = "*Vertices " + std::to_string(net.nodes.size()) + "\n";
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    std::string label;
    for (char c : net.nodes[i]) {
      if (c == '"') label.push_back('"');
      label.push_back(c);
    }
    out += std::to_string(i + 1) + " \"" + label + "\"\n";
  }
  out += "*Edges\n";
  for (const auto& e : net.edges) {
    out += std::to_string(e.u + 1) + " " + std::to_string(e.v + 1) + " " + fixed(e.weight, 4) + "\n";
  }
  return out;
}

void write_pajek(const SimilarityNetwork& net, const std::string& path) { write_file_atomic(path, write_pajek(net)); }

SimilarityNetwork read_pajek(std::string_view text) {
  const auto lines = lines_of(text);
  std::size_t i = 0;
  while (i < lines.size() && trim(lines[i]).empty()) ++i;
  if (i == lines.size() || !starts_with_ci(lines[i], "*Vertices")) throw Error("read_pajek: missing *Vertices line");
  const auto n = static_cast<std::size_t>(to_int(trim(std::string_view(lines[i]).substr(9)), "read_pajek"));
  ++i;
  SimilarityNetwork net;
  net.nodes.resize(n);
  std::vector<char> seen(n, 0);
  for (; i < lines.size() && !starts_with_ci(trim(lines[i]), "*"); ++i) {
    const std::string line = trim(lines[i]);
    if (line.empty()) continue;
    const auto space = line.find(' ');
    if (space == std::string::npos) throw Error("read_pajek: bad vertex line: " + line);
    const auto id = static_cast<std::size_t>(to_int(line.substr(0, space), "read_pajek"));
    if (id < 1 || id > n) throw Error("read_pajek: vertex id out of range: " + line);
    std::string rest = trim(std::string_view(line).substr(space + 1));
    std::string label;
    if (!rest.empty() && rest[0] == '"') {
      std::size_t k = 1;
      bool closed = false;
      for (; k < rest.size(); ++k) {
        if (rest[k] == '"') {
          if (k + 1 < rest.size() && rest[k + 1] == '"') {
            label.push_back('"');
            ++k;
          } else {
            closed = true;
            break;
          }
        } else {
          label.push_back(rest[k]);
        }
      }
      if (!closed) throw Error("read_pajek: unterminated label: " + line);
    } else {
      label = rest.substr(0, rest.find(' '));
    }
    net.nodes[id - 1] = label;
    seen[id - 1] = 1;
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) throw Error("read_pajek: missing vertex lines");
  if (i < lines.size()) {
    if (!starts_with_ci(trim(lines[i]), "*Edges")) throw Error("read_pajek: expected *Edges, got " + lines[i]);
    for (++i; i < lines.size(); ++i) {
      const std::string line = trim(lines[i]);
      if (line.empty()) continue;
      std::istringstream ss(line);
      std::string a, b, w;
      ss >> a >> b >> w;
      auto u = static_cast<std::size_t>(to_int(a, "read_pajek"));
      auto v = static_cast<std::size_t>(to_int(b, "read_pajek"));
      if (u < 1 || v < 1 || u > n || v > n || u == v) throw Error("read_pajek: bad edge: " + line);
      if (u > v) std::swap(u, v);
      net.edges.push_back({u - 1, v - 1, w.empty() ? 1.0 : to_double(w, "read_pajek")});
    }
  }
  std::sort(net.edges.begin(), net.edges.end(),
            [](const auto& x, const auto& y) { return std::tie(x.u, x.v) < std::tie(y.u, y.v); });
  return net;
}

std::string write_clu(const Partition& p, const std::vector<std::string>& node_order) {
  if (p.n_nodes() != node_order.size()) {
    throw Error("write_clu: partition has " + std::to_string(p.n_nodes()) + " nodes, order has " +
                std::to_string(node_order.size()));
  }
  std::string out = "*Vertices " + std::to_string(p.n_nodes()) + "\n";
  for (int c : p.assignment) out += std::to_string(c + 1) + "\n";
  return out;
}

void write_clu(const Partition& p, const std::vector<std::string>& node_order, const std::string& path) {
  write_file_atomic(path, write_clu(p, node_order));
}

Partition read_clu(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty() || !starts_with_ci(lines[0], "*Vertices")) throw Error("read_clu: missing *Vertices line");
  const auto n = static_cast<std::size_t>(to_int(trim(std::string_view(lines[0]).substr(9)), "read_clu"));
  std::vector<int> labels;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    labels.push_back(static_cast<int>(to_int(lines[i], "read_clu")));
  }
  if (labels.size() != n) throw Error("read_clu: expected " + std::to_string(n) + " ids, found " + std::to_string(labels.size()));
  Partition p;
  for (int l : labels) {
    if (l < 1) throw Error("read_clu: community ids are 1-based");
    p.assignment.push_back(l - 1);
  }
  return p;
}

std::string write_edge_list_csv(const SimilarityNetwork& net) {
  std::string out = "u,v,weight\n";
  for (const auto& e : net.edges) out += csv_row({net.nodes[e.u], net.nodes[e.v], fixed(e.weight, 4)});
  return out;
}

std::string write_partition_csv(const Partition& p, const std::vector<std::string>& node_order) {
  if (p.n_nodes() != node_order.size()) throw Error("write_partition_csv: partition/order mismatch");
  std::string out = "venue,community\n";
  for (std::size_t i = 0; i < node_order.size(); ++i) out += csv_row({node_order[i], std::to_string(p.assignment[i] + 1)});
  return out;
}

ColumnStats column_stats(const std::vector<double>& values) {
  ColumnStats s;
  double m2 = 0.0;
  std::size_t n = 0;
  for (double x : values) {
    ++n;
    const double delta = x - s.mean;
    s.mean += delta / static_cast<double>(n);
    m2 += delta * (x - s.mean);
  }
  s.sd = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1)) : 0.0;
  return s;
}

std::string format_mean_sd(const ColumnStats& s) { return fixed(s.mean, 3) + " (±" + fixed(s.sd, 3) + ")"; }

std::string write_metrics_report(const std::vector<MetricsRow>& rows) {
  if (rows.empty()) throw Error("write_metrics_report: no rows");
  std::string out =
      "years,n_documents,n_cited_venues,n_edge_endpoints,n_communities,modularity,avg_clustering,density,n_edges\n";
  std::int64_t docs = 0, venues = 0, endpoints = 0;
  std::vector<double> comm, mod, clus, dens;
  for (const auto& r : rows) {
    out += csv_row({std::to_string(r.first_year) + "-" + std::to_string(r.last_year), std::to_string(r.n_documents),
                    std::to_string(r.n_cited_venues), std::to_string(r.n_edge_endpoints),
                    std::to_string(r.n_communities), fixed(r.modularity, 3), fixed(r.avg_clustering, 3),
                    fixed(r.density, 3), std::to_string(r.n_edge_endpoints / 2)});
    docs += r.n_documents;
    venues += r.n_cited_venues;
    endpoints += r.n_edge_endpoints;
    comm.push_back(static_cast<double>(r.n_communities));
    mod.push_back(r.modularity);
    clus.push_back(r.avg_clustering);
    dens.push_back(r.density);
  }
  out += csv_row({"Sum/Avg", std::to_string(docs), std::to_string(venues), std::to_string(endpoints),
                  format_mean_sd(column_stats(comm)), format_mean_sd(column_stats(mod)),
                  format_mean_sd(column_stats(clus)), format_mean_sd(column_stats(dens)), std::to_string(endpoints / 2)});
  return out;
}

std::vector<MetricsRow> read_metrics_report(std::string_view text) {
  std::vector<MetricsRow> rows;
  const auto table = csv_parse(text);
  for (std::size_t i = 1; i < table.size(); ++i) {
    const auto& f = table[i];
    if (f.empty() || f[0] == "Sum/Avg") continue;
    if (f.size() < 8) throw Error("read_metrics_report: short row " + std::to_string(i + 1));
    MetricsRow r;
    const auto dash = f[0].find('-');
    if (dash == std::string::npos) throw Error("read_metrics_report: bad year span " + f[0]);
    r.first_year = static_cast<int>(to_int(f[0].substr(0, dash), "years"));
    r.last_year = static_cast<int>(to_int(f[0].substr(dash + 1), "years"));
    r.n_documents = to_int(f[1], "n_documents");
    r.n_cited_venues = to_int(f[2], "n_cited_venues");
    r.n_edge_endpoints = to_int(f[3], "n_edge_endpoints");
    r.n_communities = to_int(f[4], "n_communities");
    r.modularity = to_double(f[5], "modularity");
    r.avg_clustering = to_double(f[6], "avg_clustering");
    r.density = to_double(f[7], "density");
    rows.push_back(r);
  }
  return rows;
}

std::string write_loadings_report(const FactorSolution& sol, std::optional<std::string> highlight) {
  const auto p = static_cast<Eigen::Index>(sol.p());
  const auto k = static_cast<Eigen::Index>(sol.k());
  std::string out = csv_row({"% variance explained", fixed(sol.pct_variance, 1)});
  out += csv_row({"rotation", sol.rotation == Rotation::Varimax ? "varimax" : "none"});
  out += "factor,eigenvalue,top_venue,top_loading,note\n";
  for (Eigen::Index j = 0; j < k; ++j) {
    Eigen::Index best = -1;
    bool tie = false;
    for (Eigen::Index i = 0; i < p; ++i) {
      if (best < 0) {
        best = i;
        continue;
      }
      const std::string a = fixed(sol.loadings(i, j), 3);
      const std::string b = fixed(sol.loadings(best, j), 3);
      if (sol.loadings(i, j) > sol.loadings(best, j) && a != b) {
        best = i;
        tie = false;
      } else if (a == b) {
        tie = true;
        if (sol.venues[static_cast<std::size_t>(i)] < sol.venues[static_cast<std::size_t>(best)]) best = i;
      }
    }
    const double eig = static_cast<std::size_t>(j) < sol.eigenvalues.size() ? sol.eigenvalues[static_cast<std::size_t>(j)] : 0.0;
    out += csv_row({std::to_string(j + 1), fixed(eig, 3), best >= 0 ? sol.venues[static_cast<std::size_t>(best)] : "",
                    best >= 0 ? fixed(sol.loadings(best, j), 3) : "", tie ? "tie" : ""});
  }
  out += "\n";
  std::vector<std::string> header{"venue"};
  for (Eigen::Index j = 0; j < k; ++j) header.push_back("F" + std::to_string(j + 1));
  header.push_back("highlight");
  out += csv_row(header);
  for (Eigen::Index i = 0; i < p; ++i) {
    const auto& venue = sol.venues[static_cast<std::size_t>(i)];
    std::vector<std::string> row{venue};
    for (Eigen::Index j = 0; j < k; ++j) row.push_back(fixed(sol.loadings(i, j), 3));
    row.push_back(highlight && *highlight == venue ? "*" : "");
    out += csv_row(row);
  }
  return out;
}

std::string write_scree_csv(const FactorSolution& sol) {
  std::string out = "component,eigenvalue,pct_variance,cumulative_pct\n";
  const double p = static_cast<double>(sol.p());
  double cum = 0.0;
  for (std::size_t i = 0; i < sol.all_eigenvalues.size(); ++i) {
    const double pct = 100.0 * sol.all_eigenvalues[i] / p;
    cum += pct;
    out += csv_row({std::to_string(i + 1), fixed(sol.all_eigenvalues[i], 6), fixed(pct, 3), fixed(cum, 3)});
  }
  return out;
}

std::string render_alluvial_svg(const FlowGraph& g, const AlluvialGeometry& geo) {
  constexpr double kWidth = 1000.0, kHeight = 600.0, kMargin = 40.0;
  auto sx = [&](double x) { return fixed(kMargin + x * (kWidth - 2 * kMargin), 2); };
  auto sy = [&](double y) { return fixed(kMargin + y * (kHeight - 2 * kMargin), 2); };

  // colour[slice][community]: inherited along continuation links.
  std::vector<std::vector<std::size_t>> colour(g.n_slices());
  for (std::size_t s = 0; s < g.n_slices(); ++s) colour[s].assign(g.community_sizes[s].size(), SIZE_MAX);
  std::map<std::pair<std::size_t, int>, int> continues_from;
  for (const auto& ev : detect_events(g)) {
    if (ev.kind == FlowEventKind::Continuation) continues_from[{ev.at + 1, ev.targets.front()}] = ev.sources.front();
  }
  std::size_t next_colour = 0;
  for (std::size_t s = 0; s < g.n_slices(); ++s) {
    for (const auto& b : geo.bands) {
      if (b.slice != s) continue;
      auto it = continues_from.find({s, b.community});
      auto& slot = colour[s][static_cast<std::size_t>(b.community)];
      slot = (s > 0 && it != continues_from.end()) ? colour[s - 1][static_cast<std::size_t>(it->second)] : next_colour++;
    }
  }

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fixed(kWidth, 0) + "\" height=\"" +
         fixed(kHeight, 0) + "\" viewBox=\"0 0 " + fixed(kWidth, 0) + " " + fixed(kHeight, 0) + "\">\n";
  out += "<g id=\"ribbons\" fill-opacity=\"0.45\">\n";
  for (const auto& r : geo.ribbons) {
    const auto& e = g.edges[r.edge];
    const double xm = 0.5 * (r.x0 + r.x1);
    const auto c = kPalette[colour[e.slice][static_cast<std::size_t>(e.from)] % kPaletteSize];
    out += "<path d=\"M " + sx(r.x0) + " " + sy(r.src_y0) + " C " + sx(xm) + " " + sy(r.src_y0) + " " + sx(xm) + " " +
           sy(r.dst_y0) + " " + sx(r.x1) + " " + sy(r.dst_y0) + " L " + sx(r.x1) + " " + sy(r.dst_y1) + " C " + sx(xm) +
           " " + sy(r.dst_y1) + " " + sx(xm) + " " + sy(r.src_y1) + " " + sx(r.x0) + " " + sy(r.src_y1) +
           " Z\" fill=\"" + c + "\"" + (e.significant ? "" : " fill-opacity=\"0.15\"") + "/>\n";
  }
  out += "</g>\n<g id=\"bands\">\n";
  for (const auto& b : geo.bands) {
    const auto c = kPalette[colour[b.slice][static_cast<std::size_t>(b.community)] % kPaletteSize];
    out += "<rect x=\"" + sx(b.x0) + "\" y=\"" + sy(b.y0) + "\" width=\"" + fixed((b.x1 - b.x0) * (kWidth - 2 * kMargin), 2) +
           "\" height=\"" + fixed((b.y1 - b.y0) * (kHeight - 2 * kMargin), 2) + "\" fill=\"" + c + "\"/>\n";
  }
  out += "</g>\n<g id=\"labels\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">\n";
  for (std::size_t s = 0; s < g.n_slices(); ++s) {
    const auto it = std::find_if(geo.bands.begin(), geo.bands.end(), [&](const Band& b) { return b.slice == s; });
    if (it == geo.bands.end()) continue;
    out += "<text x=\"" + sx(0.5 * (it->x0 + it->x1)) + "\" y=\"" + fixed(kHeight - kMargin / 3, 2) + "\">" +
           svg_escape(std::to_string(g.labels[s])) + "</text>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

std::string write_flow_csv(const FlowGraph& g) {
  std::string out = "slice_from,comm_from,slice_to,comm_to,mass,overlap,significant,back_overlap\n";
  for (const auto& e : g.edges) {
    out += csv_row({std::to_string(g.labels[e.slice]), std::to_string(e.from + 1), std::to_string(g.labels[e.slice + 1]),
                    std::to_string(e.to + 1), std::to_string(e.mass), fixed(e.overlap, 4), e.significant ? "1" : "0",
                    fixed(e.back_overlap, 4)});
  }
  return out;
}

std::string write_events_csv(const FlowGraph& g, const std::vector<FlowEvent>& events) {
  auto ids = [](const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i] + 1);
    return s;
  };
  std::string out = "kind,slice_from,slice_to,sources,targets\n";
  for (const auto& e : events) {
    out += csv_row({to_string(e.kind), std::to_string(g.labels[e.at]), std::to_string(g.labels[e.at + 1]), ids(e.sources),
                    ids(e.targets)});
  }
  return out;
}

std::string write_bands_csv(const FlowGraph& g, const AlluvialGeometry& geo) {
  std::string out = "slice,community,size,x0,x1,y0,y1\n";
  for (const auto& b : geo.bands) {
    out += csv_row({std::to_string(g.labels[b.slice]), std::to_string(b.community + 1), std::to_string(b.size),
                    fixed(b.x0, 6), fixed(b.x1, 6), fixed(b.y0, 6), fixed(b.y1, 6)});
  }
  return out;
}

std::string write_ribbons_csv(const FlowGraph& g, const AlluvialGeometry& geo) {
  std::string out = "slice_from,comm_from,comm_to,mass,x0,src_y0,src_y1,x1,dst_y0,dst_y1\n";
  for (const auto& r : geo.ribbons) {
    const auto& e = g.edges[r.edge];
    out += csv_row({std::to_string(g.labels[e.slice]), std::to_string(e.from + 1), std::to_string(e.to + 1),
                    std::to_string(e.mass), fixed(r.x0, 6), fixed(r.src_y0, 6), fixed(r.src_y1, 6), fixed(r.x1, 6),
                    fixed(r.dst_y0, 6), fixed(r.dst_y1, 6)});
  }
  return out;
}

std::string write_frame_csv(const Configuration& c) {
  std::string out = "venue,x,y\n";
  for (std::size_t i = 0; i < c.venues.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    out += csv_row({c.venues[i], fixed(c.positions(r, 0), 6), fixed(c.positions(r, 1), 6)});
  }
  return out;
}

Configuration read_frame_csv(std::string_view text) {
  const auto table = csv_parse(text);
  Configuration c;
  std::vector<std::pair<double, double>> xy;
  for (std::size_t i = 1; i < table.size(); ++i) {
    if (table[i].empty()) continue;
    if (table[i].size() < 3) throw Error("read_frame_csv: short row");
    c.venues.push_back(table[i][0]);
    xy.emplace_back(to_double(table[i][1], "x"), to_double(table[i][2], "y"));
  }
  c.positions.resize(static_cast<Eigen::Index>(xy.size()), 2);
  for (std::size_t i = 0; i < xy.size(); ++i) {
    c.positions(static_cast<Eigen::Index>(i), 0) = xy[i].first;
    c.positions(static_cast<Eigen::Index>(i), 1) = xy[i].second;
  }
  return c;
}

std::string write_matrix_triplets(const OccurrenceMatrix& m) {
  std::string out = "doc_id,venue,count\n";
  for (std::size_t j = 0; j < m.n_cols(); ++j) {
    for (const auto& e : m.column(j)) out += csv_row({m.rows()[e.row], m.cols()[j], std::to_string(e.count)});
  }
  return out;
}

std::string write_matrix_sidecar(const Window& w, const OccurrenceMatrix& m) {
  std::string out = "key,value\n";
  out += csv_row({"label", std::to_string(w.label)});
  out += csv_row({"first_year", std::to_string(w.first_year)});
  out += csv_row({"last_year", std::to_string(w.last_year)});
  out += csv_row({"n_documents", std::to_string(m.n_rows())});
  out += csv_row({"n_venues", std::to_string(m.n_cols())});
  out += csv_row({"total_count", std::to_string(m.total())});
  for (const auto& r : m.rows()) out += csv_row({"doc", r});
  for (const auto& c : m.cols()) out += csv_row({"venue", c});
  return out;
}

MatrixFiles read_matrix(std::string_view triplets, std::string_view sidecar) {
  MatrixFiles f;
  std::vector<std::string> rows, cols;
  for (const auto& kv : csv_parse(sidecar)) {
    if (kv.size() < 2 || kv[0] == "key") continue;
    if (kv[0] == "label") f.window.label = static_cast<int>(to_int(kv[1], "label"));
    else if (kv[0] == "first_year") f.window.first_year = static_cast<int>(to_int(kv[1], "first_year"));
    else if (kv[0] == "last_year") f.window.last_year = static_cast<int>(to_int(kv[1], "last_year"));
    else if (kv[0] == "doc") rows.push_back(kv[1]);
    else if (kv[0] == "venue") cols.push_back(kv[1]);
  }
  std::unordered_map<std::string, std::size_t> row_index, col_index;
  for (std::size_t i = 0; i < rows.size(); ++i) row_index.emplace(rows[i], i);
  for (std::size_t j = 0; j < cols.size(); ++j) col_index.emplace(cols[j], j);
  std::vector<std::vector<OccurrenceMatrix::Entry>> columns(cols.size());
  const auto table = csv_parse(triplets);
  for (std::size_t i = 1; i < table.size(); ++i) {
    const auto& t = table[i];
    if (t.empty()) continue;
    if (t.size() < 3) throw Error("read_matrix: short triplet row");
    auto r = row_index.find(t[0]);
    auto c = col_index.find(t[1]);
    if (r == row_index.end() || c == col_index.end()) throw Error("read_matrix: triplet references unknown row or venue");
    columns[c->second].push_back({r->second, to_int(t[2], "count")});
  }
  f.window.doc_ids = rows;
  f.matrix = OccurrenceMatrix(std::move(rows), std::move(cols), std::move(columns));
  return f;
}

std::string render_line_chart_svg(const std::string& title, const std::vector<int>& x,
                                  const std::vector<LineSeries>& series) {
  constexpr double kWidth = 800.0, kHeight = 400.0, kLeft = 60.0, kRight = 140.0, kTop = 40.0, kBottom = 40.0;
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (const auto& s : series) {
    for (double v : s.values) {
      if (first) {
        lo = hi = v;
        first = false;
      }
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  lo = std::min(lo, 0.0);
  if (hi <= lo) hi = lo + 1.0;
  const double plot_w = kWidth - kLeft - kRight, plot_h = kHeight - kTop - kBottom;
  auto px = [&](std::size_t i) {
    return kLeft + (x.size() > 1 ? plot_w * static_cast<double>(i) / static_cast<double>(x.size() - 1) : plot_w / 2);
  };
  auto py = [&](double v) { return kTop + plot_h * (1.0 - (v - lo) / (hi - lo)); };

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"400\" viewBox=\"0 0 800 400\">\n";
  out += "<text x=\"" + fixed(kWidth / 2, 1) + "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">" +
         svg_escape(title) + "</text>\n";
  out += "<line x1=\"" + fixed(kLeft, 1) + "\" y1=\"" + fixed(kTop + plot_h, 1) + "\" x2=\"" + fixed(kLeft + plot_w, 1) +
         "\" y2=\"" + fixed(kTop + plot_h, 1) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + fixed(kLeft, 1) + "\" y1=\"" + fixed(kTop, 1) + "\" x2=\"" + fixed(kLeft, 1) + "\" y2=\"" +
         fixed(kTop + plot_h, 1) + "\" stroke=\"black\"/>\n";
  out += "<g font-family=\"sans-serif\" font-size=\"10\">\n";
  out += "<text x=\"" + fixed(kLeft - 6, 1) + "\" y=\"" + fixed(py(hi), 1) + "\" text-anchor=\"end\">" + fixed(hi, 3) + "</text>\n";
  out += "<text x=\"" + fixed(kLeft - 6, 1) + "\" y=\"" + fixed(py(lo), 1) + "\" text-anchor=\"end\">" + fixed(lo, 3) + "</text>\n";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x.size() > 12 && i % 4 != 0 && i + 1 != x.size()) continue;
    out += "<text x=\"" + fixed(px(i), 1) + "\" y=\"" + fixed(kTop + plot_h + 16, 1) + "\" text-anchor=\"middle\">" +
           std::to_string(x[i]) + "</text>\n";
  }
  out += "</g>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto colour = kPalette[k % kPaletteSize];
    std::string points;
    for (std::size_t i = 0; i < series[k].values.size() && i < x.size(); ++i) {
      if (i) points.push_back(' ');
      points += fixed(px(i), 2) + "," + fixed(py(series[k].values[i]), 2);
    }
    out += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
    out += "<text x=\"" + fixed(kLeft + plot_w + 10, 1) + "\" y=\"" + fixed(kTop + 16.0 * static_cast<double>(k + 1), 1) +
           "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" + colour + "\">" + svg_escape(series[k].name) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace citemap
