#include "citemap/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_map>

#include "citemap/community.hpp"
#include "citemap/corpus.hpp"
#include "citemap/exporters.hpp"
#include "citemap/factors.hpp"
#include "citemap/flow.hpp"
#include "citemap/layout.hpp"
#include "citemap/simnet.hpp"
#include "citemap/wos_ingest.hpp"

namespace citemap {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Configuration

void RunConfig::validate() const {
  auto fail = [](const std::string& m) { throw ValidationError(m); };
  if (span < 1) fail("span must be >= 1");
  if (min_count < 0) fail("min-count must be >= 0");
  if (!(tau >= 0.0 && tau < 1.0)) fail("tau must lie in [0, 1)");
  if (k_factors < 1) fail("k must be >= 1");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) fail("alpha must be a finite value >= 0");
  if (smooth_span < 1) fail("smooth-span must be >= 1");
  if (!(min_overlap > 0.0 && min_overlap <= 1.0)) fail("min-overlap must lie in (0, 1]");
  if (!(load_threshold > 0.0)) fail("load-threshold must be > 0");
  if (workers < 1) fail("workers must be >= 1");
  if (out_dir.empty()) fail("out must not be empty");
}

json RunConfig::to_json() const {
  json j;
  j["inputs"] = inputs;
  j["rules"] = rules_path;
  j["span"] = span;
  j["min_count"] = min_count;
  j["tau"] = tau;
  j["k"] = k_factors;
  j["alpha"] = alpha;
  j["smooth_span"] = smooth_span;
  j["min_overlap"] = min_overlap;
  j["seed"] = seed;
  j["weighted"] = weighted;
  j["kaiser"] = kaiser;
  j["ragged_leading"] = ragged_leading;
  j["highlight"] = highlight;
  j["load_threshold"] = load_threshold;
  j["out"] = out_dir;
  return j;
}

namespace {

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T v{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ValidationError("config: bad value for " + key + ": '" + value + "'");
  }
  return v;
}

double parse_real(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size()) {
    throw ValidationError("config: bad value for " + key + ": '" + value + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "on" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "off" || value == "0" || value == "no") return false;
  throw ValidationError("config: bad boolean for " + key + ": '" + value + "'");
}

}  // namespace

void apply_config_text(RunConfig& cfg, std::string_view text) {
  std::size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError("config line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "input") cfg.inputs.push_back(value);
    else if (key == "rules") cfg.rules_path = value;
    else if (key == "span") cfg.span = parse_number<int>(key, value);
    else if (key == "min-count") cfg.min_count = parse_number<std::int64_t>(key, value);
    else if (key == "tau") cfg.tau = parse_real(key, value);
    else if (key == "k") cfg.k_factors = parse_number<int>(key, value);
    else if (key == "alpha") cfg.alpha = parse_real(key, value);
    else if (key == "smooth-span") cfg.smooth_span = parse_number<int>(key, value);
    else if (key == "min-overlap") cfg.min_overlap = parse_real(key, value);
    else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "weighted") cfg.weighted = parse_bool(key, value);
    else if (key == "kaiser") cfg.kaiser = parse_bool(key, value);
    else if (key == "ragged-leading") cfg.ragged_leading = parse_bool(key, value);
    else if (key == "highlight") cfg.highlight = value;
    else if (key == "load-threshold") cfg.load_threshold = parse_real(key, value);
    else if (key == "workers") cfg.workers = parse_number<int>(key, value);
    else if (key == "out") cfg.out_dir = value;
    else throw ValidationError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
}

// ---------------------------------------------------------------------------
// Stage plumbing

namespace {

struct Context {
  const RunConfig& cfg;
  fs::path root;

  std::string path(const std::string& rel) const { return (root / rel).string(); }
  std::string read(const std::string& rel) const {
    const auto p = path(rel);
    if (!fs::exists(p)) throw Error("missing input " + rel + " (run the earlier stages first)");
    return read_file(p);
  }
  void write(const std::string& rel, std::string_view content) const { write_file_atomic(path(rel), content); }
};

std::string window_file(const std::string& dir, int label, const std::string& suffix) {
  return dir + "/W" + std::to_string(label) + suffix;
}

/// Runs fn(i) for i in [0, n) on up to `workers` threads; rethrows the first failure.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::mutex mu;
  std::exception_ptr failure;
  std::size_t failed_at = n;
  std::size_t next = 0;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      while (true) {
        std::size_t i;
        {
          std::lock_guard lock(mu);
          if (next >= n) return;
          i = next++;
        }
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(mu);
          // Report the lowest failing index so errors are reproducible.
          if (i < failed_at) {
            failed_at = i;
            failure = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

std::string opt(const std::optional<std::string>& s) { return s ? *s : std::string(); }

std::optional<std::string> non_empty(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return s;
}

std::vector<std::vector<std::string>> csv_body(const std::string& text) {
  auto rows = csv_parse(text);
  if (!rows.empty()) rows.erase(rows.begin());
  rows.erase(std::remove_if(rows.begin(), rows.end(), [](const auto& r) { return r.empty(); }), rows.end());
  return rows;
}

int to_int(const std::string& s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw Error("expected an integer, got '" + s + "'");
  return v;
}

std::vector<DocumentRecord> load_documents(const Context& ctx) {
  std::vector<DocumentRecord> docs;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& r : csv_body(ctx.read("corpus/documents.csv"))) {
    if (r.size() < 2) throw Error("corpus/documents.csv: short row");
    index.emplace(r[0], docs.size());
    docs.push_back({r[0], to_int(r[1]), {}});
  }
  for (const auto& r : csv_body(ctx.read("corpus/references.csv"))) {
    if (r.size() < 7) throw Error("corpus/references.csv: short row");
    auto it = index.find(r[0]);
    if (it == index.end()) throw Error("corpus/references.csv: unknown document " + r[0]);
    CitedReference ref;
    ref.first_author = non_empty(r[2]);
    if (!r[3].empty()) ref.year = to_int(r[3]);
    ref.venue_raw = non_empty(r[4]);
    ref.volume = non_empty(r[5]);
    ref.page = non_empty(r[6]);
    docs[it->second].refs.push_back(std::move(ref));
  }
  return docs;
}

Corpus load_clean_corpus(const Context& ctx) {
  Corpus corpus;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& r : csv_body(ctx.read("corpus/documents.csv"))) {
    index.emplace(r[0], corpus.size());
    corpus.push_back({r[0], to_int(r[1]), {}});
  }
  for (const auto& r : csv_body(ctx.read("corpus/clean_references.csv"))) {
    if (r.size() < 2) throw Error("corpus/clean_references.csv: short row");
    auto it = index.find(r[0]);
    if (it == index.end()) throw Error("corpus/clean_references.csv: unknown document " + r[0]);
    CitedReference ref;
    ref.venue_raw = r[1];
    ref.venue = r[1];
    corpus[it->second].refs.push_back(std::move(ref));
  }
  return corpus;
}

struct WindowEntry {
  int label = 0;
  int first_year = 0;
  int last_year = 0;
  std::int64_t n_documents = 0;
  std::int64_t n_venues = 0;
  std::string status;  // "ok" or the reason the window has no matrix
};

std::vector<WindowEntry> load_windows(const Context& ctx) {
  std::vector<WindowEntry> out;
  for (const auto& r : csv_body(ctx.read("windows/windows.csv"))) {
    if (r.size() < 6) throw Error("windows/windows.csv: short row");
    out.push_back({to_int(r[0]), to_int(r[1]), to_int(r[2]), to_int(r[3]), to_int(r[4]), r[5]});
  }
  return out;
}

std::vector<WindowEntry> ok_windows(const Context& ctx) {
  auto all = load_windows(ctx);
  all.erase(std::remove_if(all.begin(), all.end(), [](const auto& w) { return w.status != "ok"; }), all.end());
  return all;
}

MatrixFiles load_matrix(const Context& ctx, int label) {
  return read_matrix(ctx.read(window_file("windows", label, ".triplets.csv")),
                     ctx.read(window_file("windows", label, ".meta.csv")));
}

bool has_network(const Context& ctx, int label) { return fs::exists(ctx.path(window_file("networks", label, ".net"))); }

// ---------------------------------------------------------------------------
// Stages

json stage_parse(const Context& ctx) {
  if (ctx.cfg.inputs.empty()) throw Error("no input files given");
  std::vector<FieldTaggedRecord> records;
  json files = json::array();
  for (const auto& in : ctx.cfg.inputs) {
    auto recs = parse_export(decode_export_bytes(read_file(in)));
    files.push_back({{"path", in}, {"records", recs.size()}});
    records.insert(records.end(), std::make_move_iterator(recs.begin()), std::make_move_iterator(recs.end()));
  }
  auto batch = to_documents(records);

  std::string docs = "doc_id,pub_year\n";
  std::string refs = "doc_id,ref_index,first_author,year,venue_raw,volume,page\n";
  std::size_t n_refs = 0;
  for (const auto& d : batch.docs) {
    docs += csv_row({d.id, std::to_string(d.pub_year)});
    for (std::size_t i = 0; i < d.refs.size(); ++i) {
      const auto& r = d.refs[i];
      refs += csv_row({d.id, std::to_string(i + 1), opt(r.first_author), r.year ? std::to_string(*r.year) : "",
                       opt(r.venue_raw), opt(r.volume), opt(r.page)});
      ++n_refs;
    }
  }
  ctx.write("corpus/documents.csv", docs);
  ctx.write("corpus/references.csv", refs);

  json s;
  s["files"] = files;
  s["records"] = records.size();
  s["documents"] = batch.docs.size();
  s["rejected"] = batch.rejected;
  s["references"] = n_refs;
  s["warnings"] = batch.warnings;
  return s;
}

json stage_clean(const Context& ctx) {
  const auto docs = load_documents(ctx);
  const NormalizationRules rules =
      ctx.cfg.rules_path.empty() ? NormalizationRules::defaults() : parse_rules_tsv(read_file(ctx.cfg.rules_path));
  const auto result = clean_corpus(docs, rules);
  const auto& rep = result.report;

  std::string out = "doc_id,venue\n";
  for (const auto& d : result.corpus) {
    for (const auto& r : d.refs) out += csv_row({d.id, *r.venue});
  }
  ctx.write("corpus/clean_references.csv", out);
  ctx.write("corpus/rules.tsv", rules_to_tsv(rules));

  std::string report = "key,value\n";
  report += csv_row({"refs_in", std::to_string(rep.refs_in)});
  report += csv_row({"refs_dropped_by_rule", std::to_string(rep.refs_dropped_by_rule)});
  report += csv_row({"refs_dropped_singleton", std::to_string(rep.refs_dropped_singleton)});
  report += csv_row({"refs_out", std::to_string(rep.refs_out)});
  report += csv_row({"pct_retained", fixed(rep.pct_retained(), 1)});
  report += csv_row({"refs_missing_venue", std::to_string(rep.refs_missing_venue)});
  report += csv_row({"refs_missing_year", std::to_string(rep.refs_missing_year)});
  report += csv_row({"singleton_venues", std::to_string(rep.singleton_venues)});
  ctx.write("corpus/cleaning_report.csv", report);

  json s;
  s["refs_in"] = rep.refs_in;
  s["refs_dropped_by_rule"] = rep.refs_dropped_by_rule;
  s["refs_dropped_singleton"] = rep.refs_dropped_singleton;
  s["refs_out"] = rep.refs_out;
  s["pct_retained"] = fixed(rep.pct_retained(), 1);
  s["refs_missing_year"] = rep.refs_missing_year;
  return s;
}

json stage_freq(const Context& ctx) {
  const auto corpus = load_clean_corpus(ctx);
  const auto table = venue_frequencies(corpus);
  const auto admitted = apply_threshold(table, ctx.cfg.min_count);

  std::vector<std::pair<std::string, std::int64_t>> sorted(table.begin(), table.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::string out = "venue,count,admitted\n";
  for (const auto& [v, n] : sorted) out += csv_row({v, std::to_string(n), admitted.count(v) ? "1" : "0"});
  ctx.write("freq/venue_frequencies.csv", out);

  std::string adm = "venue\n";
  for (const auto& v : admitted) adm += csv_row({v});
  ctx.write("freq/admitted_venues.csv", adm);

  json s;
  s["unique_venues"] = table.size();
  s["admitted_venues"] = admitted.size();
  s["min_count"] = ctx.cfg.min_count;
  if (table.size() >= 3) {
    const auto fit = loglog_fit(table);
    ctx.write("freq/loglog_fit.csv", "slope,intercept,r_squared,n_points\n" +
                                         csv_row({fixed(fit.slope, 6), fixed(fit.intercept, 6), fixed(fit.r_squared, 6),
                                                  std::to_string(fit.n_points)}));
    s["loglog_r_squared"] = fixed(fit.r_squared, 4);
  } else {
    s["loglog_r_squared"] = nullptr;
  }
  return s;
}

json stage_windows(const Context& ctx) {
  const auto corpus = load_clean_corpus(ctx);
  VenueSet admitted;
  for (const auto& r : csv_body(ctx.read("freq/admitted_venues.csv"))) admitted.insert(r[0]);

  fs::remove_all(ctx.path("windows"));
  const auto plan = moving_windows(corpus, ctx.cfg.span, ctx.cfg.ragged_leading);
  std::vector<WindowEntry> entries(plan.windows.size());
  parallel_for(plan.windows.size(), ctx.cfg.workers, [&](std::size_t i) {
    const auto& w = plan.windows[i];
    auto& e = entries[i];
    e = {w.label, w.first_year, w.last_year, static_cast<std::int64_t>(w.doc_ids.size()), 0, "ok"};
    if (w.doc_ids.empty()) {
      e.status = "no documents";
      return;
    }
    if (admitted.empty()) {
      e.status = "no admitted venues";
      return;
    }
    try {
      const auto m = build_matrix(corpus, w, admitted);
      e.n_venues = static_cast<std::int64_t>(m.n_cols());
      ctx.write(window_file("windows", w.label, ".triplets.csv"), write_matrix_triplets(m));
      ctx.write(window_file("windows", w.label, ".meta.csv"), write_matrix_sidecar(w, m));
    } catch (const Error&) {
      e.status = "no admitted venue cited";
    }
  });

  std::string out = "label,first_year,last_year,n_documents,n_venues,status\n";
  json skipped = json::array();
  std::int64_t docs = 0, venues = 0;
  for (const auto& e : entries) {
    out += csv_row({std::to_string(e.label), std::to_string(e.first_year), std::to_string(e.last_year),
                    std::to_string(e.n_documents), std::to_string(e.n_venues), e.status});
    if (e.status != "ok") skipped.push_back({{"label", e.label}, {"reason", e.status}});
    docs += e.n_documents;
    venues += e.n_venues;
  }
  ctx.write("windows/windows.csv", out);

  json s;
  s["windows"] = entries.size();
  s["first_label"] = entries.empty() ? 0 : entries.front().label;
  s["last_label"] = entries.empty() ? 0 : entries.back().label;
  s["document_occurrences"] = docs;
  s["venue_occurrences"] = venues;
  s["skipped"] = skipped;
  s["warnings"] = plan.warnings;
  return s;
}

json stage_net(const Context& ctx) {
  const auto windows = ok_windows(ctx);
  fs::remove_all(ctx.path("networks"));
  std::vector<std::size_t> edges(windows.size(), 0);
  std::vector<std::string> skipped(windows.size());
  parallel_for(windows.size(), ctx.cfg.workers, [&](std::size_t i) {
    const auto mf = load_matrix(ctx, windows[i].label);
    if (mf.matrix.n_cols() < 2) {
      skipped[i] = "fewer than 2 venues";
      return;
    }
    const auto net = threshold_network(cosine_matrix(mf.matrix), ctx.cfg.tau);
    edges[i] = net.n_edges();
    ctx.write(window_file("networks", windows[i].label, ".net"), write_pajek(net));
    ctx.write(window_file("networks", windows[i].label, ".edges.csv"), write_edge_list_csv(net));
  });
  json s;
  s["networks"] = 0;
  s["edges"] = 0;
  json skip = json::array();
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (!skipped[i].empty()) {
      skip.push_back({{"label", windows[i].label}, {"reason", skipped[i]}});
      continue;
    }
    s["networks"] = s["networks"].get<int>() + 1;
    s["edges"] = s["edges"].get<std::size_t>() + edges[i];
  }
  s["tau"] = ctx.cfg.tau;
  s["skipped"] = skip;
  return s;
}

json stage_communities(const Context& ctx) {
  const auto windows = ok_windows(ctx);
  fs::remove_all(ctx.path("communities"));
  std::vector<int> counts(windows.size(), -1);
  parallel_for(windows.size(), ctx.cfg.workers, [&](std::size_t i) {
    const int label = windows[i].label;
    if (!has_network(ctx, label)) return;
    const auto net = read_pajek(ctx.read(window_file("networks", label, ".net")));
    const auto p = louvain(net, derive_seed(ctx.cfg.seed, "communities", label), ctx.cfg.weighted);
    counts[i] = p.n_communities();
    ctx.write(window_file("communities", label, ".clu"), write_clu(p, net.nodes));
    ctx.write(window_file("communities", label, ".csv"), write_partition_csv(p, net.nodes));
  });
  json per = json::object();
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (counts[i] >= 0) per[std::to_string(windows[i].label)] = counts[i];
  }
  json s;
  s["partitions"] = per.size();
  s["weighted"] = ctx.cfg.weighted;
  s["communities"] = per;
  return s;
}

json stage_metrics(const Context& ctx) {
  const auto windows = ok_windows(ctx);
  std::vector<std::optional<MetricsRow>> rows(windows.size());
  parallel_for(windows.size(), ctx.cfg.workers, [&](std::size_t i) {
    const auto& w = windows[i];
    if (!has_network(ctx, w.label)) return;
    const auto net = read_pajek(ctx.read(window_file("networks", w.label, ".net")));
    const auto p = read_clu(ctx.read(window_file("communities", w.label, ".clu")));
    MetricsRow r;
    r.first_year = w.first_year;
    r.last_year = w.last_year;
    r.n_documents = w.n_documents;
    r.n_cited_venues = static_cast<std::int64_t>(net.n_nodes());
    r.n_edge_endpoints = static_cast<std::int64_t>(net.n_edge_endpoints());
    r.n_communities = p.n_communities();
    r.modularity = modularity(net, p, ctx.cfg.weighted);
    r.avg_clustering = avg_clustering(net);
    r.density = density(net);
    rows[i] = r;
  });
  std::vector<MetricsRow> present;
  for (const auto& r : rows) {
    if (r) present.push_back(*r);
  }
  json s;
  s["rows"] = present.size();
  if (present.empty()) {
    s["warnings"] = json::array({"no networks to report"});
    return s;
  }
  ctx.write("metrics/metrics.csv", write_metrics_report(present));
  std::vector<double> comm;
  for (const auto& r : present) comm.push_back(static_cast<double>(r.n_communities));
  s["communities"] = format_mean_sd(column_stats(comm));
  return s;
}

json stage_factors(const Context& ctx) {
  const auto windows = ok_windows(ctx);
  fs::remove_all(ctx.path("factors"));
  struct Outcome {
    std::string status = "ok";
    int k = 0;
    double pct = 0.0;
    std::vector<std::string> dropped;
    std::optional<int> complexity;
  };
  std::vector<Outcome> outcomes(windows.size());
  parallel_for(windows.size(), ctx.cfg.workers, [&](std::size_t i) {
    auto& o = outcomes[i];
    const int label = windows[i].label;
    const auto mf = load_matrix(ctx, label);
    const auto constant = constant_columns(mf.matrix);
    for (auto j : constant) o.dropped.push_back(mf.matrix.cols()[j]);
    const auto m = constant.empty() ? mf.matrix : drop_columns(mf.matrix, constant);
    if (m.n_rows() < 2 || m.n_cols() < 2) {
      o.status = "too few documents or venues";
      return;
    }
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(ctx.cfg.k_factors), m.n_cols());
    VarimaxOptions vo;
    vo.kaiser_normalize = ctx.cfg.kaiser;
    const auto unrotated = principal_components(correlation(m), k);
    const auto sol = rotate_varimax(unrotated, vo);
    o.k = static_cast<int>(k);
    o.pct = sol.pct_variance;
    std::optional<std::string> hl;
    if (!ctx.cfg.highlight.empty()) hl = ctx.cfg.highlight;
    ctx.write(window_file("factors", label, ".loadings.csv"), write_loadings_report(sol, hl));
    ctx.write(window_file("factors", label, ".scree.csv"), write_scree_csv(sol));
    if (hl && std::find(sol.venues.begin(), sol.venues.end(), *hl) != sol.venues.end()) {
      o.complexity = interfactorial_complexity(sol, *hl, ctx.cfg.load_threshold);
    }
  });

  std::string summary = "label,status,k,pct_variance,dropped_constant_venues,highlight_complexity\n";
  json per = json::array();
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const auto& o = outcomes[i];
    std::string dropped;
    for (std::size_t d = 0; d < o.dropped.size(); ++d) dropped += (d ? ";" : "") + o.dropped[d];
    summary += csv_row({std::to_string(windows[i].label), o.status, std::to_string(o.k), fixed(o.pct, 1), dropped,
                        o.complexity ? std::to_string(*o.complexity) : ""});
    per.push_back({{"label", windows[i].label}, {"status", o.status}, {"k", o.k}, {"pct_variance", fixed(o.pct, 1)}});
  }
  ctx.write("factors/summary.csv", summary);
  json s;
  s["windows"] = per;
  s["kaiser"] = ctx.cfg.kaiser;
  return s;
}

CommunitySeries load_series(const Context& ctx) {
  CommunitySeries series;
  for (const auto& w : ok_windows(ctx)) {
    if (!fs::exists(ctx.path(window_file("communities", w.label, ".clu")))) continue;
    const auto net = read_pajek(ctx.read(window_file("networks", w.label, ".net")));
    const auto p = read_clu(ctx.read(window_file("communities", w.label, ".clu")));
    series.slices.push_back({w.label, net.nodes, p});
  }
  return series;
}

json stage_flow(const Context& ctx) {
  fs::remove_all(ctx.path("flow"));
  const auto series = load_series(ctx);
  json s;
  s["slices"] = series.slices.size();
  if (series.slices.size() < 2) {
    s["warnings"] = json::array({"fewer than 2 slices; no flow graph"});
    return s;
  }
  const auto g = align_communities(series, ctx.cfg.min_overlap);
  const auto events = detect_events(g);
  const auto geo = alluvial_layout(g);
  ctx.write("flow/flow.csv", write_flow_csv(g));
  ctx.write("flow/events.csv", write_events_csv(g, events));
  ctx.write("flow/bands.csv", write_bands_csv(g, geo));
  ctx.write("flow/ribbons.csv", write_ribbons_csv(g, geo));
  const auto n = count_events(events);
  s["edges"] = g.edges.size();
  s["min_overlap"] = ctx.cfg.min_overlap;
  s["events"] = {{"split", n.splits}, {"merge", n.merges}, {"birth", n.births}, {"death", n.deaths},
                 {"continuation", n.continuations}};
  s["warnings"] = g.warnings;
  return s;
}

json stage_layout(const Context& ctx) {
  fs::remove_all(ctx.path("layout"));
  std::vector<DissimilarityMatrix> ds;
  std::vector<int> labels;
  for (const auto& w : ok_windows(ctx)) {
    const auto mf = load_matrix(ctx, w.label);
    if (mf.matrix.n_cols() < 2) continue;
    ds.push_back(dissimilarity_from_similarity(cosine_matrix(mf.matrix), ctx.cfg.tau));
    labels.push_back(w.label);
  }
  json s;
  s["frames"] = ds.size();
  if (ds.empty()) {
    s["warnings"] = json::array({"no windows with at least 2 venues"});
    return s;
  }
  DynamicLayoutOptions opts;
  opts.alpha = ctx.cfg.alpha;
  opts.smooth_span = ctx.cfg.smooth_span;
  opts.seed = derive_seed(ctx.cfg.seed, "layout");
  opts.stress.tol = 1e-6;
  opts.stress.max_iter = 300;
  const auto ls = dynamic_layout(ds, labels, opts);
  const double agg = aggregated_stress(ls, ds);

  json frames = json::array();
  for (const auto& f : ls.frames) {
    ctx.write(window_file("layout", f.label, ".csv"), write_frame_csv(f.config));
    frames.push_back({{"label", f.label}, {"seed", f.seed}, {"venues", f.config.venues.size()}, {"stress", fixed(f.stress, 6)}});
  }
  json manifest;
  manifest["alpha"] = ls.alpha;
  manifest["smooth_span"] = ls.smooth_span;
  manifest["base_seed"] = opts.seed;
  manifest["frames"] = frames;
  manifest["aggregated_stress"] = fixed(agg, 6);
  ctx.write("layout/manifest.json", manifest.dump(2) + "\n");
  s["aggregated_stress"] = fixed(agg, 6);
  s["alpha"] = ls.alpha;
  return s;
}

FlowGraph load_flow_graph(const Context& ctx) {
  FlowGraph g;
  g.min_overlap = ctx.cfg.min_overlap;
  std::map<int, std::map<int, int>> sizes;  // label -> community(0-based) -> size
  for (const auto& r : csv_body(ctx.read("flow/bands.csv"))) {
    sizes[to_int(r[0])][to_int(r[1]) - 1] = to_int(r[2]);
  }
  std::map<int, std::size_t> slice_of;
  for (const auto& [label, comms] : sizes) {
    slice_of[label] = g.labels.size();
    g.labels.push_back(label);
    std::vector<int> v(comms.size(), 0);
    for (const auto& [c, n] : comms) v.at(static_cast<std::size_t>(c)) = n;
    g.community_sizes.push_back(v);
    g.carried.emplace_back(v.size(), 0);
  }
  for (const auto& r : csv_body(ctx.read("flow/flow.csv"))) {
    FlowEdge e;
    e.slice = slice_of.at(to_int(r[0]));
    e.from = to_int(r[1]) - 1;
    e.to = to_int(r[3]) - 1;
    e.mass = to_int(r[4]);
    e.overlap = std::strtod(r[5].c_str(), nullptr);
    e.significant = r[6] == "1";
    e.back_overlap = std::strtod(r[7].c_str(), nullptr);
    g.carried[e.slice][static_cast<std::size_t>(e.from)] += e.mass;
    g.edges.push_back(e);
  }
  return g;
}

json stage_export(const Context& ctx) {
  json s;
  if (!fs::exists(ctx.path("flow/flow.csv"))) {
    s["warnings"] = json::array({"no flow graph to render"});
    return s;
  }
  const auto g = load_flow_graph(ctx);
  const auto geo = alluvial_layout(g);
  ctx.write("export/alluvial.svg", render_alluvial_svg(g, geo));
  s["alluvial_svg"] = "export/alluvial.svg";
  s["bands"] = geo.bands.size();
  s["ribbons"] = geo.ribbons.size();
  return s;
}

json stage_plot(const Context& ctx) {
  const auto rows = read_metrics_report(ctx.read("metrics/metrics.csv"));
  std::vector<int> x;
  LineSeries docs{"documents", {}}, venues{"cited venues", {}}, comm{"communities", {}};
  LineSeries mod{"modularity", {}}, clus{"clustering", {}}, dens{"density", {}};
  for (const auto& r : rows) {
    x.push_back(r.last_year);
    docs.values.push_back(static_cast<double>(r.n_documents));
    venues.values.push_back(static_cast<double>(r.n_cited_venues));
    comm.values.push_back(static_cast<double>(r.n_communities));
    mod.values.push_back(r.modularity);
    clus.values.push_back(r.avg_clustering);
    dens.values.push_back(r.density);
  }
  ctx.write("plot/documents_and_venues.svg", render_line_chart_svg("Citing documents and cited venues per window", x, {docs, venues}));
  ctx.write("plot/communities.svg", render_line_chart_svg("Number of communities", x, {comm}));
  ctx.write("plot/network_structure.svg",
            render_line_chart_svg("Modularity, clustering coefficient and density", x, {mod, clus, dens}));
  json s;
  s["charts"] = 3;
  return s;
}

using StageFn = json (*)(const Context&);

const std::vector<std::pair<std::string, StageFn>>& stage_table() {
  static const std::vector<std::pair<std::string, StageFn>> table = {
      {"parse", stage_parse},   {"clean", stage_clean},     {"freq", stage_freq},
      {"windows", stage_windows}, {"net", stage_net},       {"communities", stage_communities},
      {"metrics", stage_metrics}, {"factors", stage_factors}, {"flow", stage_flow},
      {"layout", stage_layout}, {"export", stage_export},   {"plot", stage_plot},
  };
  return table;
}

void write_manifest(const Context& ctx) {
  json m;
  m["tool"] = "citemap";
  m["version"] = kVersion;
  m["config"] = ctx.cfg.to_json();
  json stages = json::object();
  for (const auto& [name, fn] : stage_table()) {
    const auto p = ctx.path("stages/" + name + ".json");
    if (fs::exists(p)) stages[name] = json::parse(read_file(p));
  }
  m["stages"] = stages;
  ctx.write("manifest.json", m.dump(2) + "\n");
}

}  // namespace

const std::vector<std::string>& pipeline_stages() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : stage_table()) v.push_back(name);
    return v;
  }();
  return names;
}

json run_stage(const std::string& stage, const RunConfig& cfg) {
  cfg.validate();
  const auto& table = stage_table();
  const auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == stage; });
  if (it == table.end()) throw ValidationError("unknown stage '" + stage + "'");
  const Context ctx{cfg, fs::path(cfg.out_dir)};
  json summary;
  try {
    summary = it->second(ctx);
    ctx.write("stages/" + stage + ".json", summary.dump(2) + "\n");
    write_manifest(ctx);
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
  return summary;
}

json run_pipeline(const RunConfig& cfg) {
  cfg.validate();
  json times = json::object();
  for (const auto& name : pipeline_stages()) {
    const auto start = std::chrono::steady_clock::now();
    run_stage(name, cfg);
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    times[name] = std::round(ms * 1000.0) / 1000.0;
  }
  const Context ctx{cfg, fs::path(cfg.out_dir)};
  ctx.write("run_times.json", json{{"wall_time_ms", times}}.dump(2) + "\n");
  return json::parse(read_file(ctx.path("manifest.json")));
}

}  // namespace citemap
