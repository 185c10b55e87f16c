#include "citemap/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <unordered_map>

#include "citemap/common.hpp"

namespace citemap {

OccurrenceMatrix::OccurrenceMatrix(std::vector<std::string> rows, std::vector<std::string> cols,
                                   std::vector<std::vector<Entry>> columns)
    : rows_(std::move(rows)), cols_(std::move(cols)), columns_(std::move(columns)) {
  if (cols_.size() != columns_.size()) throw Error("OccurrenceMatrix: column count mismatch");
  for (auto& col : columns_) {
    std::sort(col.begin(), col.end(), [](const Entry& a, const Entry& b) { return a.row < b.row; });
    for (const auto& e : col) {
      if (e.row >= rows_.size() || e.count <= 0) throw Error("OccurrenceMatrix: bad entry");
    }
  }
}

std::int64_t OccurrenceMatrix::cell(std::size_t row, std::size_t col) const {
  const auto& c = columns_.at(col);
  auto it = std::lower_bound(c.begin(), c.end(), row, [](const Entry& e, std::size_t r) { return e.row < r; });
  return (it != c.end() && it->row == row) ? it->count : 0;
}

std::int64_t OccurrenceMatrix::column_total(std::size_t j) const {
  std::int64_t s = 0;
  for (const auto& e : columns_.at(j)) s += e.count;
  return s;
}

std::int64_t OccurrenceMatrix::total() const {
  std::int64_t s = 0;
  for (std::size_t j = 0; j < columns_.size(); ++j) s += column_total(j);
  return s;
}

VenueFrequencyTable venue_frequencies(const Corpus& corpus) {
  VenueFrequencyTable table;
  for (const auto& doc : corpus) {
    for (const auto& ref : doc.refs) {
      if (ref.venue) ++table[*ref.venue];
    }
  }
  return table;
}

VenueSet apply_threshold(const VenueFrequencyTable& table, std::int64_t min_count) {
  if (min_count < 0) throw Error("apply_threshold: min_count must be >= 0");
  VenueSet out;
  for (const auto& [venue, n] : table) {
    if (n > min_count) out.insert(venue);
  }
  return out;
}

WindowPlan moving_windows(const Corpus& corpus, int span, bool ragged_leading) {
  if (span < 1) throw Error("moving_windows: span must be >= 1");
  if (corpus.empty()) throw Error("moving_windows: corpus has no documents");

  const auto [lo_it, hi_it] = std::minmax_element(
      corpus.begin(), corpus.end(), [](const auto& a, const auto& b) { return a.pub_year < b.pub_year; });
  const int min_year = lo_it->pub_year;
  const int max_year = hi_it->pub_year;

  WindowPlan plan;
  auto make = [&](int first, int last) {
    Window w;
    w.label = last;
    w.first_year = first;
    w.last_year = last;
    for (const auto& doc : corpus) {
      if (doc.pub_year >= first && doc.pub_year <= last) w.doc_ids.push_back(doc.id);
    }
    plan.windows.push_back(std::move(w));
  };

  if (max_year - min_year + 1 < span) {
    plan.warnings.push_back("year range " + std::to_string(min_year) + "-" + std::to_string(max_year) +
                            " is shorter than the span " + std::to_string(span) + "; using a single window");
    make(min_year, max_year);
    return plan;
  }
  const int first_label = ragged_leading ? min_year : min_year + span - 1;
  for (int label = first_label; label <= max_year; ++label) {
    make(std::max(min_year, label - span + 1), label);
  }
  return plan;
}

OccurrenceMatrix build_matrix(const Corpus& corpus, const Window& window, const VenueSet& venues) {
  if (venues.empty()) throw Error("build_matrix: empty venue set");
  if (window.doc_ids.empty()) throw Error("build_matrix: window " + std::to_string(window.label) + " has no documents");

  std::unordered_map<std::string, const DocumentRecord*> by_id;
  for (const auto& doc : corpus) by_id.emplace(doc.id, &doc);

  std::map<std::string, std::map<std::size_t, std::int64_t>> cells;
  for (std::size_t r = 0; r < window.doc_ids.size(); ++r) {
    auto it = by_id.find(window.doc_ids[r]);
    if (it == by_id.end()) throw Error("build_matrix: unknown document " + window.doc_ids[r]);
    for (const auto& ref : it->second->refs) {
      if (ref.venue && venues.count(*ref.venue)) ++cells[*ref.venue][r];
    }
  }
  if (cells.empty()) {
    throw Error("build_matrix: no document in window " + std::to_string(window.label) + " cites an admitted venue");
  }

  std::vector<std::string> cols;
  std::vector<std::vector<OccurrenceMatrix::Entry>> columns;
  for (const auto& [venue, col] : cells) {
    cols.push_back(venue);
    auto& entries = columns.emplace_back();
    for (const auto& [row, n] : col) entries.push_back({row, n});
  }
  return OccurrenceMatrix(window.doc_ids, std::move(cols), std::move(columns));
}

LogLogFit loglog_fit(const VenueFrequencyTable& table) {
  std::vector<double> f;
  f.reserve(table.size());
  for (const auto& [venue, n] : table) f.push_back(static_cast<double>(n));
  return loglog_fit(std::move(f));
}

LogLogFit loglog_fit(std::vector<double> frequencies) {
  if (frequencies.size() < 3) throw Error("loglog_fit: need at least 3 points");
  for (double v : frequencies) {
    if (!(v > 0.0)) throw Error("loglog_fit: frequencies must be positive");
  }
  std::sort(frequencies.begin(), frequencies.end(), std::greater<>());

  const std::size_t n = frequencies.size();
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && frequencies[j] == frequencies[i]) ++j;
    const double mean_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks i+1..j
    for (std::size_t k = i; k < j; ++k) {
      x[k] = std::log10(mean_rank);
      y[k] = std::log10(frequencies[k]);
    }
    i = j;
  }

  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }

  LogLogFit fit;
  fit.n_points = n;
  if (sxx <= 0.0) {
    // All frequencies tie: a flat line with r^2 defined as 0.
    fit.slope = 0.0;
    fit.intercept = my;
    fit.r_squared = 0.0;
    return fit;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy <= 0.0 ? 0.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return fit;
}

}  // namespace citemap
