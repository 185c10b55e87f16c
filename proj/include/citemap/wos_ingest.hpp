#pragma once

// Reader for field-tagged citation-index exports (the "PT ... ER" layout)
// and the venue cleaning applied to their cited references.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace citemap {

struct FieldTaggedRecord {
  struct Field {
    std::string tag;                 // two characters, e.g. "CR"
    std::vector<std::string> lines;  // first line plus continuations
  };
  std::vector<Field> fields;

  /// First field with this tag, or nullptr.
  const Field* find(std::string_view tag) const;
};

struct CitedReference {
  std::optional<std::string> first_author;
  std::optional<int> year;
  std::optional<std::string> venue_raw;
  std::optional<std::string> volume;
  std::optional<std::string> page;
  // Filled in by clean_corpus; absent before cleaning or when dropped.
  std::optional<std::string> venue;

  bool operator==(const CitedReference&) const = default;
};

struct DocumentRecord {
  std::string id;
  int pub_year = 0;
  std::vector<CitedReference> refs;
};

using Corpus = std::vector<DocumentRecord>;

struct NormalizationRules {
  bool strip_sequence_numbers = true;
  // Patterns may contain '*' (any run of characters); first match wins.
  std::vector<std::pair<std::string, std::string>> merge_map;
  std::vector<std::string> drop_list;
  bool drop_singletons = true;

  static NormalizationRules defaults();
};

/// Byte-sniffs the export encoding: valid UTF-8 passes through (BOM
/// stripped), anything else is treated as Latin-1 and transcoded.
std::string decode_export_bytes(std::string_view bytes);

std::vector<FieldTaggedRecord> parse_export(std::string_view text);

/// Empty when the record has no usable publication year.
std::optional<DocumentRecord> to_document(const FieldTaggedRecord& rec);

struct DocumentBatch {
  std::vector<DocumentRecord> docs;
  std::size_t rejected = 0;
  std::vector<std::string> warnings;
};

DocumentBatch to_documents(const std::vector<FieldTaggedRecord>& records);

CitedReference parse_cited_reference(std::string_view line);

/// Canonical venue name, or nullopt when the rules drop it.
std::optional<std::string> normalize_venue(std::string_view venue_raw, const NormalizationRules& rules);

/// Rules as TSV lines: "strip_sequence_numbers\ton|off", "drop_singletons\ton|off",
/// "merge\t<pattern>\t<canonical>", "drop\t<name>". '#' starts a comment line.
NormalizationRules parse_rules_tsv(std::string_view text);
std::string rules_to_tsv(const NormalizationRules& rules);

struct CleaningReport {
  std::size_t refs_in = 0;
  std::size_t refs_dropped_by_rule = 0;
  std::size_t refs_dropped_singleton = 0;
  std::size_t refs_out = 0;
  // Sub-counts, informational.
  std::size_t refs_missing_venue = 0;  // included in refs_dropped_by_rule
  std::size_t refs_missing_year = 0;   // venue read from the second subfield
  std::size_t singleton_venues = 0;

  double pct_retained() const;
};

struct CleanResult {
  Corpus corpus;
  CleaningReport report;
};

CleanResult clean_corpus(const std::vector<DocumentRecord>& docs, const NormalizationRules& rules);

}  // namespace citemap
