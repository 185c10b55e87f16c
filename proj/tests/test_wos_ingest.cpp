#include <doctest.h>

#include "citemap/common.hpp"
#include "citemap/wos_ingest.hpp"

using namespace citemap;

namespace {

const char* kTwoRecords =
    "FN Thomson Reuters Web of Science\n"
    "VR 1.0\n"
    "PT J\n"
    "AU Smith, J\n"
    "PY 1999\n"
    "UT WOS:000001\n"
    "CR Hertwig R, 1999, J BEHAV DECIS MAKING, V12, P275\n"
    "   Anderson J, 1983, ARCHITECTURE COGNITI\n"
    "   NEWELL A, 1990, UNIFIED THEORIES COGN\n"
    "   5TH ANN M COGN SCI, 1983, P12\n"
    "ER\n"
    "\n"
    "PT J\n"
    "PY 2001\n"
    "UT WOS:000002\n"
    "CR Hertwig R, 1999, J BEHAV DECIS MAKING, V12, P275\n"
    "ER\n"
    "\n"
    "EF\n";

CitedReference ref_with_venue(const std::string& v) {
  CitedReference r;
  r.first_author = "X Y";
  r.year = 2000;
  r.venue_raw = v;
  return r;
}

}  // namespace

TEST_CASE("parse_export splits records and keeps continuations") {
  const auto recs = parse_export(kTwoRecords);
  REQUIRE(recs.size() == 2);
  const auto* cr = recs[0].find("CR");
  REQUIRE(cr);
  CHECK(cr->lines.size() == 4);
  CHECK(cr->lines[1] == "Anderson J, 1983, ARCHITECTURE COGNITI");
  CHECK(recs[0].fields.front().tag == "PT");
  CHECK(recs[1].find("PY")->lines.front() == "2001");
}

TEST_CASE("parse_export on a header-only file is empty") {
  CHECK(parse_export("FN Thomson Reuters Web of Science\nVR 1.0\nEF\n").empty());
  CHECK(parse_export("").empty());
}

TEST_CASE("parse_export accepts CRLF line ends") {
  std::string crlf;
  for (char c : std::string(kTwoRecords)) {
    if (c == '\n') crlf += '\r';
    crlf += c;
  }
  CHECK(parse_export(crlf).size() == 2);
}

TEST_CASE("parse_export errors name the offset and last tag") {
  const std::string truncated = "FN x\nVR 1.0\nPT J\nPY 1999\nCR A B, 1999, J X\n";
  try {
    parse_export(truncated);
    FAIL("expected an error");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("byte") != std::string::npos);
    CHECK(msg.find("CR") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_export("FN x\nPT J\nPY 1999\nPT J\nER\n"), Error);
  CHECK_THROWS_AS(parse_export("FN x\nxx bad\n"), Error);
  CHECK_THROWS_AS(parse_export("   orphan continuation\n"), Error);
  CHECK_THROWS_AS(parse_export("FN x\nPY 1999\n"), Error);
}

TEST_CASE("decode_export_bytes handles utf-8, latin-1 and BOM") {
  CHECK(decode_export_bytes("\xEF\xBB\xBFPT J") == "PT J");
  CHECK(decode_export_bytes("caf\xC3\xA9") == "caf\xC3\xA9");
  CHECK(decode_export_bytes("caf\xE9") == "caf\xC3\xA9");
}

TEST_CASE("to_document reads year, id and references") {
  const auto recs = parse_export(kTwoRecords);
  const auto d = to_document(recs[1]);
  REQUIRE(d);
  CHECK(d->pub_year == 2001);
  CHECK(d->id == "WOS:000002");
  CHECK(d->refs.size() == 1);

  const auto none = parse_export("PT J\nPY 1999\nER\n");
  const auto d2 = to_document(none[0]);
  REQUIRE(d2);
  CHECK(d2->refs.empty());
  CHECK(d2->id.size() == 17);
  CHECK(d2->id[0] == 'H');
  CHECK(to_document(none[0])->id == d2->id);
}

TEST_CASE("records without a year are rejected with a warning") {
  const auto recs = parse_export("PT J\nUT A\nER\nPT J\nPY 19x9\nUT B\nER\nPT J\nPY 2000\nUT C\nER\n");
  CHECK_FALSE(to_document(recs[0]));
  const auto batch = to_documents(recs);
  CHECK(batch.docs.size() == 1);
  CHECK(batch.rejected == 2);
  CHECK(batch.warnings.size() == 2);
}

TEST_CASE("duplicate ids are rejected") {
  const auto recs = parse_export("PT J\nPY 2000\nUT A\nER\nPT J\nPY 2001\nUT A\nER\n");
  const auto batch = to_documents(recs);
  CHECK(batch.docs.size() == 1);
  CHECK(batch.rejected == 1);
}

TEST_CASE("parse_cited_reference: canonical five-part line") {
  const auto r = parse_cited_reference("Hertwig R, 1999, J BEHAV DECIS MAKING, V12, P275");
  CHECK(r.first_author == "Hertwig R");
  CHECK(r.year == 1999);
  CHECK(r.venue_raw == "J BEHAV DECIS MAKING");
  CHECK(r.volume == "12");
  CHECK(r.page == "275");
}

TEST_CASE("parse_cited_reference: short and partial lines") {
  const auto a = parse_cited_reference("SMITH J, 2001");
  CHECK_FALSE(a.venue_raw);
  CHECK(a.year == 2001);
  const auto b = parse_cited_reference("Anderson J, 1983, ARCHITECTURE COGNITI");
  CHECK(b.venue_raw == "ARCHITECTURE COGNITI");
  CHECK_FALSE(b.volume);
  CHECK_FALSE(b.page);
  const auto c = parse_cited_reference("smith j, 1990, cogn sci, P33");
  CHECK(c.venue_raw == "COGN SCI");
  CHECK_FALSE(c.volume);
  CHECK(c.page == "33");
  CHECK_FALSE(parse_cited_reference("").venue_raw);
}

TEST_CASE("parse_cited_reference: venue in the second subfield") {
  const auto noyear = parse_cited_reference("SMITH J, COGN PSYCHOL, V5, P1");
  CHECK(noyear.first_author == "SMITH J");
  CHECK_FALSE(noyear.year);
  CHECK(noyear.venue_raw == "COGN PSYCHOL");
  CHECK(noyear.volume == "5");
  const auto anon = parse_cited_reference("1987, CHICAGO MANUAL STYLE, P10");
  CHECK_FALSE(anon.first_author);
  CHECK(anon.year == 1987);
  CHECK(anon.venue_raw == "CHICAGO MANUAL STYLE");
}

TEST_CASE("parse_cited_reference is total on junk") {
  Rng rng(5);
  const std::string alphabet = "AZ09 ,VP.-\t\"";
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    const auto n = rng.below(40);
    for (std::size_t j = 0; j < n; ++j) s += alphabet[rng.below(alphabet.size())];
    CHECK_NOTHROW(parse_cited_reference(s));
  }
}

TEST_CASE("normalize_venue: shipped rules") {
  const auto rules = NormalizationRules::defaults();
  CHECK(normalize_venue("5TH ANN M COGN SCI", rules) == "ANN M COGN SCI");
  CHECK(normalize_venue("7th Ann M Cogn Sci", rules) == "ANN M COGN SCI");
  CHECK(normalize_venue("ANN C COGN SCI", rules) == "ANN M COGN SCI");
  CHECK_FALSE(normalize_venue("THESIS", rules));
  CHECK_FALSE(normalize_venue("thesis", rules));
  CHECK(normalize_venue("  j   behav  decis making ", rules) == "J BEHAV DECIS MAKING");
  CHECK(normalize_venue("Q J EXP PSYCHOL", rules) != normalize_venue("Q J EXP PSYCHOL-A", rules));
}

TEST_CASE("normalize_venue: sequence numbers only stripped when enabled") {
  auto rules = NormalizationRules::defaults();
  rules.strip_sequence_numbers = false;
  CHECK(normalize_venue("5TH ANN M COGN SCI", rules) == "5TH ANN M COGN SCI");
}

TEST_CASE("normalize_venue: variants differing by sequence prefix coincide") {
  const auto rules = NormalizationRules::defaults();
  const auto base = normalize_venue("ANN M COGN SCI", rules);
  for (const char* v : {"1ST ANN M COGN SCI", "2ND ANN M COGN SCI", "3RD ANN M COGN SCI", "12TH ANN M COGN SCI",
                        "14 ANN M COGN SCI"}) {
    CHECK(normalize_venue(v, rules) == base);
  }
}

TEST_CASE("normalize_venue is idempotent") {
  const auto rules = NormalizationRules::defaults();
  Rng rng(9);
  const std::vector<std::string> words{"5TH", "ANN", "M", "C", "COGN", "SCI", "P", "INT", "JOINT", "AR", "7TH", "J", "12"};
  for (int i = 0; i < 3000; ++i) {
    std::string v;
    const auto n = 1 + rng.below(6);
    for (std::size_t j = 0; j < n; ++j) v += (j ? " " : "") + words[rng.below(words.size())];
    const auto once = normalize_venue(v, rules);
    if (once) CHECK(normalize_venue(*once, rules) == once);
  }
}

TEST_CASE("rules TSV round trip and errors") {
  const auto rules = NormalizationRules::defaults();
  const auto back = parse_rules_tsv(rules_to_tsv(rules));
  CHECK(back.merge_map == rules.merge_map);
  CHECK(back.drop_list == rules.drop_list);
  CHECK(back.strip_sequence_numbers == rules.strip_sequence_numbers);
  CHECK(back.drop_singletons == rules.drop_singletons);
  CHECK(rules.drop_list == std::vector<std::string>{"THESIS"});
  CHECK(rules.merge_map.size() == 2);
  CHECK_THROWS_AS(parse_rules_tsv("rename\tA\tB\n"), Error);
  CHECK_THROWS_AS(parse_rules_tsv("merge\tA\n"), Error);
  const auto custom = parse_rules_tsv("# comment\ndrop\tFOO\ndrop_singletons\toff\n");
  CHECK(custom.drop_list == std::vector<std::string>{"FOO"});
  CHECK_FALSE(custom.drop_singletons);
}

TEST_CASE("clean_corpus removes the lone singleton venue") {
  std::vector<DocumentRecord> docs;
  for (int i = 0; i < 10; ++i) {
    DocumentRecord d{"D" + std::to_string(i), 2000, {}};
    d.refs.push_back(ref_with_venue("COGN SCI"));
    if (i == 3) d.refs.push_back(ref_with_venue("TYPO JOURNL"));
    docs.push_back(d);
  }
  const auto res = clean_corpus(docs, NormalizationRules::defaults());
  CHECK(res.report.refs_in == 11);
  CHECK(res.report.refs_out == res.report.refs_in - 1);
  CHECK(res.report.refs_dropped_singleton == 1);
  CHECK(res.report.singleton_venues == 1);
  for (const auto& d : res.corpus) {
    for (const auto& r : d.refs) CHECK(*r.venue != "TYPO JOURNL");
  }
}

TEST_CASE("clean_corpus: no singletons, drop rules and conservation") {
  std::vector<DocumentRecord> docs;
  for (int i = 0; i < 4; ++i) {
    DocumentRecord d{"D" + std::to_string(i), 2000, {}};
    d.refs.push_back(ref_with_venue("COGN SCI"));
    d.refs.push_back(ref_with_venue(i % 2 ? "5TH ANN M COGN SCI" : "ANN C COGN SCI"));
    d.refs.push_back(ref_with_venue("THESIS"));
    d.refs.push_back(parse_cited_reference("SMITH J, 2001"));
    docs.push_back(d);
  }
  const auto res = clean_corpus(docs, NormalizationRules::defaults());
  const auto& r = res.report;
  CHECK(r.refs_dropped_singleton == 0);
  CHECK(r.refs_dropped_by_rule == 8);
  CHECK(r.refs_missing_venue == 4);
  CHECK(r.refs_in == r.refs_out + r.refs_dropped_by_rule + r.refs_dropped_singleton);
  CHECK(r.pct_retained() == doctest::Approx(50.0));
  CHECK(res.corpus.size() == 4);
  for (const auto& d : res.corpus) {
    REQUIRE(d.refs.size() == 2);
    CHECK(*d.refs[1].venue == "ANN M COGN SCI");
  }
}

TEST_CASE("merging can lift a variant above the singleton cutoff") {
  std::vector<DocumentRecord> docs{{"A", 2000, {ref_with_venue("ANN C COGN SCI")}},
                                   {"B", 2000, {ref_with_venue("ANN M COGN SCI")}}};
  const auto res = clean_corpus(docs, NormalizationRules::defaults());
  CHECK(res.report.refs_out == 2);
}

TEST_CASE("cleaning percentage format") {
  CleaningReport r;
  r.refs_in = 43952;
  r.refs_out = 24105;
  CHECK(fixed(r.pct_retained(), 1) == "54.8");
}

TEST_CASE("clean_corpus rejects an empty corpus") {
  CHECK_THROWS_AS(clean_corpus({}, NormalizationRules::defaults()), Error);
}
