#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "citemap/wos_ingest.hpp"

namespace citemap {

using VenueFrequencyTable = std::map<std::string, std::int64_t>;
using VenueSet = std::set<std::string>;

struct Window {
  int label = 0;  // last year of the span
  int first_year = 0;
  int last_year = 0;
  std::vector<std::string> doc_ids;
};

/// Whole-count documents x venues matrix, stored column-compressed.
class OccurrenceMatrix {
 public:
  struct Entry {
    std::size_t row;
    std::int64_t count;
  };

  OccurrenceMatrix() = default;
  OccurrenceMatrix(std::vector<std::string> rows, std::vector<std::string> cols,
                   std::vector<std::vector<Entry>> columns);

  const std::vector<std::string>& rows() const { return rows_; }
  const std::vector<std::string>& cols() const { return cols_; }
  std::size_t n_rows() const { return rows_.size(); }
  std::size_t n_cols() const { return cols_.size(); }

  /// Non-zero entries of column j, sorted by row.
  const std::vector<Entry>& column(std::size_t j) const { return columns_.at(j); }
  std::int64_t cell(std::size_t row, std::size_t col) const;
  std::int64_t column_total(std::size_t j) const;
  std::int64_t total() const;

 private:
  std::vector<std::string> rows_;
  std::vector<std::string> cols_;
  std::vector<std::vector<Entry>> columns_;
};

VenueFrequencyTable venue_frequencies(const Corpus& corpus);

/// Venues with count strictly greater than min_count.
VenueSet apply_threshold(const VenueFrequencyTable& table, std::int64_t min_count);

struct WindowPlan {
  std::vector<Window> windows;
  std::vector<std::string> warnings;
};

/// Windows labelled by their last year. With ragged_leading, the first
/// span-1 labels get truncated windows instead of being skipped.
WindowPlan moving_windows(const Corpus& corpus, int span, bool ragged_leading = false);

OccurrenceMatrix build_matrix(const Corpus& corpus, const Window& window, const VenueSet& venues);

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t n_points = 0;
};

/// Least squares through (log10 rank, log10 frequency); tied frequencies share their mean rank.
LogLogFit loglog_fit(const VenueFrequencyTable& table);
LogLogFit loglog_fit(std::vector<double> frequencies);

}  // namespace citemap
