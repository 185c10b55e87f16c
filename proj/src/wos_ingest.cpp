#include "citemap/wos_ingest.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

#include "citemap/common.hpp"

namespace citemap {

namespace {

bool is_valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len;
    if (c < 0x80) {
      len = 1;
    } else if ((c & 0xE0) == 0xC0 && c >= 0xC2) {
      len = 2;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
    } else if ((c & 0xF8) == 0xF0 && c <= 0xF4) {
      len = 4;
    } else {
      return false;
    }
    if (i + len > s.size()) return false;
    for (std::size_t k = 1; k < len; ++k) {
      if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return false;
    }
    i += len;
  }
  return true;
}

bool is_tag_char(char c) { return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'); }

std::optional<int> parse_year(std::string_view s) {
  const std::string t = trim(s);
  if (t.size() != 4 || !std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return std::nullopt;
  }
  int year = 0;
  std::from_chars(t.data(), t.data() + t.size(), year);
  return year;
}

// "V12" / "P275": the prefix letter followed by something starting with a digit.
std::optional<std::string> prefixed_number(std::string_view token, char prefix) {
  if (token.size() < 2 || token[0] != prefix) return std::nullopt;
  if (token[1] < '0' || token[1] > '9') return std::nullopt;
  if (token.find(' ') != std::string_view::npos) return std::nullopt;
  return std::string(token.substr(1));
}

bool is_ordinal_token(std::string_view t) {
  std::size_t digits = 0;
  while (digits < t.size() && t[digits] >= '0' && t[digits] <= '9') ++digits;
  if (digits == 0) return false;
  const std::string_view suffix = t.substr(digits);
  return suffix.empty() || suffix == "ST" || suffix == "ND" || suffix == "RD" || suffix == "TH";
}

bool glob_match(std::string_view pattern, std::string_view text) {
  std::size_t p = 0, t = 0, star = std::string_view::npos, mark = 0;
  while (t < text.size()) {
    if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = t;
    } else if (p < pattern.size() && pattern[p] == text[t]) {
      ++p;
      ++t;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

std::string canonical(std::string_view s) { return collapse_whitespace(to_upper(s)); }

std::string strip_sequence_numbers(const std::string& name) {
  auto tokens = split(name, ' ');
  // A leading "P" marks proceedings; its volume number follows it.
  const std::size_t first = (tokens.size() > 1 && tokens[0] == "P") ? 1 : 0;
  std::size_t drop = 0;
  while (first + drop + 1 < tokens.size() && is_ordinal_token(tokens[first + drop])) ++drop;
  if (drop == 0) return name;
  tokens.erase(tokens.begin() + static_cast<std::ptrdiff_t>(first),
               tokens.begin() + static_cast<std::ptrdiff_t>(first + drop));
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

std::string normalize_step(const std::string& name, const NormalizationRules& rules) {
  std::string s = rules.strip_sequence_numbers ? strip_sequence_numbers(name) : name;
  for (const auto& [pattern, replacement] : rules.merge_map) {
    if (glob_match(canonical(pattern), s)) return canonical(replacement);
  }
  return s;
}

}  // namespace

const FieldTaggedRecord::Field* FieldTaggedRecord::find(std::string_view tag) const {
  for (const auto& f : fields) {
    if (f.tag == tag) return &f;
  }
  return nullptr;
}

NormalizationRules NormalizationRules::defaults() {
  NormalizationRules r;
  r.merge_map = {
      {"ANN C COGN SCI", "ANN M COGN SCI"},
      {"P INT JOINT C AR*", "P INT JOINT C AR"},
  };
  r.drop_list = {"THESIS"};
  return r;
}

std::string decode_export_bytes(std::string_view bytes) {
  if (bytes.size() >= 3 && bytes.substr(0, 3) == "\xEF\xBB\xBF") bytes.remove_prefix(3);
  if (is_valid_utf8(bytes)) return std::string(bytes);
  std::string out;
  out.reserve(bytes.size() + bytes.size() / 8);
  for (char ch : bytes) {
    const auto c = static_cast<unsigned char>(ch);
    if (c < 0x80) {
      out.push_back(ch);
    } else {
      out.push_back(static_cast<char>(0xC0 | (c >> 6)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
  }
  return out;
}

std::vector<FieldTaggedRecord> parse_export(std::string_view text) {
  std::vector<FieldTaggedRecord> records;
  std::optional<FieldTaggedRecord> current;
  std::string last_tag = "(none)";
  std::size_t record_start = 0;

  auto fail = [&](std::size_t offset, const std::string& what) -> void {
    throw Error("export parse error at byte " + std::to_string(offset) + ": " + what +
                " (last good tag: " + last_tag + ")");
  };

  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    const std::size_t offset = pos;
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;

    if (line[0] == ' ' || line[0] == '\t') {
      if (!current || current->fields.empty()) fail(offset, "continuation line outside a record");
      current->fields.back().lines.push_back(trim(line));
      continue;
    }
    if (line.size() < 2 || !is_tag_char(line[0]) || !is_tag_char(line[1]) || (line.size() > 2 && line[2] != ' ')) {
      fail(offset, "malformed field tag");
    }
    const std::string tag(line.substr(0, 2));
    const std::string value = line.size() > 3 ? trim(line.substr(3)) : std::string();

    if (!current) {
      if (tag == "FN" || tag == "VR") {
        last_tag = tag;
      } else if (tag == "EF") {
        last_tag = tag;
        break;
      } else if (tag == "PT") {
        current.emplace();
        current->fields.push_back({tag, {value}});
        record_start = offset;
        last_tag = tag;
      } else {
        fail(offset, "tag " + tag + " outside a record");
      }
      continue;
    }
    if (tag == "ER") {
      records.push_back(std::move(*current));
      current.reset();
      last_tag = tag;
    } else if (tag == "PT" || tag == "EF") {
      fail(offset, "record starting at byte " + std::to_string(record_start) + " has no end tag");
    } else {
      current->fields.push_back({tag, {value}});
      last_tag = tag;
    }
  }
  if (current) fail(text.size(), "truncated record starting at byte " + std::to_string(record_start));
  return records;
}

std::optional<DocumentRecord> to_document(const FieldTaggedRecord& rec) {
  const auto* py = rec.find("PY");
  if (!py || py->lines.empty()) return std::nullopt;
  const auto year = parse_year(py->lines.front());
  if (!year) return std::nullopt;

  DocumentRecord doc;
  doc.pub_year = *year;
  if (const auto* ut = rec.find("UT"); ut && !ut->lines.empty() && !trim(ut->lines.front()).empty()) {
    doc.id = trim(ut->lines.front());
  } else {
    std::string canonical_text;
    for (const auto& f : rec.fields) {
      for (const auto& l : f.lines) canonical_text += f.tag + '\t' + l + '\n';
    }
    doc.id = "H" + hex64(fnv1a64(canonical_text));
  }
  if (const auto* cr = rec.find("CR")) {
    for (const auto& l : cr->lines) {
      if (!trim(l).empty()) doc.refs.push_back(parse_cited_reference(l));
    }
  }
  return doc;
}

DocumentBatch to_documents(const std::vector<FieldTaggedRecord>& records) {
  DocumentBatch batch;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto doc = to_document(records[i]);
    if (!doc) {
      ++batch.rejected;
      batch.warnings.push_back("record " + std::to_string(i + 1) + ": missing or unparseable publication year");
      continue;
    }
    if (!seen.insert(doc->id).second) {
      ++batch.rejected;
      batch.warnings.push_back("record " + std::to_string(i + 1) + ": duplicate id " + doc->id);
      continue;
    }
    batch.docs.push_back(std::move(*doc));
  }
  return batch;
}

CitedReference parse_cited_reference(std::string_view line) {
  std::vector<std::string> tokens;
  for (const auto& t : split(line, ',')) tokens.push_back(trim(t));

  CitedReference ref;
  auto non_empty = [](const std::string& s) -> std::optional<std::string> {
    if (s.empty()) return std::nullopt;
    return s;
  };

  if (tokens.size() < 3) {
    if (!tokens.empty()) ref.first_author = non_empty(tokens[0]);
    if (tokens.size() > 1) ref.year = parse_year(tokens[1]);
    return ref;
  }

  std::size_t venue_index = 2;
  if (auto y = parse_year(tokens[1])) {
    ref.first_author = non_empty(tokens[0]);
    ref.year = y;
  } else if (auto y0 = parse_year(tokens[0])) {
    ref.year = y0;  // author-less reference
    venue_index = 1;
  } else {
    ref.first_author = non_empty(tokens[0]);
    venue_index = 1;  // year missing: venue sits in the second subfield
  }

  std::size_t scan_from = venue_index;
  const std::string& venue_token = tokens[venue_index];
  if (!venue_token.empty() && !prefixed_number(venue_token, 'V') && !prefixed_number(venue_token, 'P')) {
    ref.venue_raw = to_upper(venue_token);
    scan_from = venue_index + 1;
  }
  for (std::size_t i = scan_from; i < tokens.size(); ++i) {
    if (!ref.volume) {
      if (auto v = prefixed_number(tokens[i], 'V')) {
        ref.volume = v;
        continue;
      }
    }
    if (!ref.page) {
      if (auto p = prefixed_number(tokens[i], 'P')) ref.page = p;
    }
  }
  return ref;
}

std::optional<std::string> normalize_venue(std::string_view venue_raw, const NormalizationRules& rules) {
  std::string s = canonical(venue_raw);
  // Merged names are re-normalized until stable so the result is a fixed point.
  for (int i = 0; i < 16; ++i) {
    std::string next = normalize_step(s, rules);
    if (next == s) break;
    s = std::move(next);
  }
  if (s.empty()) return std::nullopt;
  for (const auto& d : rules.drop_list) {
    if (canonical(d) == s) return std::nullopt;
  }
  return s;
}

NormalizationRules parse_rules_tsv(std::string_view text) {
  NormalizationRules rules;
  rules.merge_map.clear();
  rules.drop_list.clear();
  std::size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    const auto cols = split(line, '\t');
    const std::string action = trim(cols[0]);
    auto need = [&](std::size_t n) {
      if (cols.size() < n) throw Error("rules line " + std::to_string(line_no) + ": expected " + std::to_string(n) + " columns");
    };
    auto flag = [&]() {
      need(2);
      const std::string v = trim(cols[1]);
      if (v == "on" || v == "true" || v == "1") return true;
      if (v == "off" || v == "false" || v == "0") return false;
      throw Error("rules line " + std::to_string(line_no) + ": bad flag value '" + v + "'");
    };
    if (action == "merge") {
      need(3);
      rules.merge_map.emplace_back(trim(cols[1]), trim(cols[2]));
    } else if (action == "drop") {
      need(2);
      rules.drop_list.push_back(trim(cols[1]));
    } else if (action == "strip_sequence_numbers") {
      rules.strip_sequence_numbers = flag();
    } else if (action == "drop_singletons") {
      rules.drop_singletons = flag();
    } else {
      throw Error("rules line " + std::to_string(line_no) + ": unknown action '" + action + "'");
    }
  }
  return rules;
}

std::string rules_to_tsv(const NormalizationRules& rules) {
  std::string out;
  out += std::string("strip_sequence_numbers\t") + (rules.strip_sequence_numbers ? "on" : "off") + "\n";
  out += std::string("drop_singletons\t") + (rules.drop_singletons ? "on" : "off") + "\n";
  for (const auto& [p, c] : rules.merge_map) out += "merge\t" + p + "\t" + c + "\n";
  for (const auto& d : rules.drop_list) out += "drop\t" + d + "\n";
  return out;
}

double CleaningReport::pct_retained() const {
  return refs_in == 0 ? 0.0 : 100.0 * static_cast<double>(refs_out) / static_cast<double>(refs_in);
}

CleanResult clean_corpus(const std::vector<DocumentRecord>& docs, const NormalizationRules& rules) {
  if (docs.empty()) throw Error("clean_corpus: no documents to clean");

  CleanResult result;
  auto& report = result.report;
  result.corpus = docs;
  std::map<std::string, std::size_t> counts;

  for (auto& doc : result.corpus) {
    for (auto& ref : doc.refs) {
      ++report.refs_in;
      ref.venue.reset();
      if (!ref.venue_raw || trim(*ref.venue_raw).empty()) {
        ++report.refs_missing_venue;
        ++report.refs_dropped_by_rule;
        continue;
      }
      if (!ref.year) ++report.refs_missing_year;
      ref.venue = normalize_venue(*ref.venue_raw, rules);
      if (!ref.venue) {
        ++report.refs_dropped_by_rule;
        continue;
      }
      ++counts[*ref.venue];
    }
  }

  std::set<std::string> singletons;
  if (rules.drop_singletons) {
    for (const auto& [venue, n] : counts) {
      if (n == 1) singletons.insert(venue);
    }
  }
  report.singleton_venues = singletons.size();

  for (auto& doc : result.corpus) {
    std::vector<CitedReference> kept;
    kept.reserve(doc.refs.size());
    for (auto& ref : doc.refs) {
      if (!ref.venue) continue;
      if (singletons.count(*ref.venue)) {
        ++report.refs_dropped_singleton;
        continue;
      }
      kept.push_back(std::move(ref));
    }
    doc.refs = std::move(kept);
    report.refs_out += doc.refs.size();
  }
  return result;
}

}  // namespace citemap
