#include <doctest.h>

#include <filesystem>
#include <set>

#include "citemap/common.hpp"

using namespace citemap;

TEST_CASE("rng streams are reproducible per seed") {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    if (x != c.next()) differs = true;
  }
  CHECK(differs);
}

TEST_CASE("rng uniform and below stay in range") {
  Rng r(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double v = r.uniform(-2.0, 3.0);
    CHECK(v >= -2.0);
    CHECK(v < 3.0);
    CHECK(r.below(7) < 7u);
  }
}

TEST_CASE("below is roughly uniform") {
  Rng r(11);
  int hist[5] = {0, 0, 0, 0, 0};
  for (int i = 0; i < 50000; ++i) ++hist[r.below(5)];
  for (int h : hist) CHECK(std::abs(h - 10000) < 500);
}

TEST_CASE("shuffle is a permutation") {
  Rng r(3);
  std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  r.shuffle(v);
  CHECK(std::set<int>(v.begin(), v.end()).size() == 10);
}

TEST_CASE("derive_seed separates stages and keys") {
  CHECK(derive_seed(1, "communities", 1983) == derive_seed(1, "communities", 1983));
  CHECK(derive_seed(1, "communities", 1983) != derive_seed(1, "communities", 1984));
  CHECK(derive_seed(1, "communities") != derive_seed(1, "layout"));
  CHECK(derive_seed(1, "layout") != derive_seed(2, "layout"));
}

TEST_CASE("fnv1a64 known values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("text helpers") {
  CHECK(trim("  a b \t") == "a b");
  CHECK(trim("") == "");
  CHECK(to_upper("Ann m Cogn") == "ANN M COGN");
  CHECK(collapse_whitespace("  J   BEHAV\tDECIS  ") == "J BEHAV DECIS");
  CHECK(split("a,,b", ',') == std::vector<std::string>{"a", "", "b"});
  CHECK(split("", ',') == std::vector<std::string>{""});
  CHECK(fixed(0.2256, 3) == "0.226");
  CHECK(fixed(-0.0001, 3) == "0.000");
  CHECK(fixed(5.0, 1) == "5.0");
  CHECK(hex64(255) == "00000000000000ff");
}

TEST_CASE("csv escaping and parsing round trip") {
  const std::vector<std::string> fields{"plain", "with,comma", "with \"quote\"", "", "multi\nline"};
  const std::string row = csv_row(fields);
  CHECK(row.back() == '\n');
  CHECK(row.find('\r') == std::string::npos);
  const auto parsed = csv_parse(row);
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0] == fields);
  CHECK(csv_escape("x") == "x");
  CHECK(csv_escape("a\"b") == "\"a\"\"b\"");
  CHECK(csv_parse_line("a,\"b,c\",d") == std::vector<std::string>{"a", "b,c", "d"});
}

TEST_CASE("atomic write creates parents and replaces content") {
  const auto dir = std::filesystem::temp_directory_path() / "citemap_common_test";
  std::filesystem::remove_all(dir);
  const auto p = (dir / "a" / "b.txt").string();
  write_file_atomic(p, "one");
  CHECK(read_file(p) == "one");
  write_file_atomic(p, "two");
  CHECK(read_file(p) == "two");
  CHECK_FALSE(std::filesystem::exists(p + ".tmp"));
  CHECK_THROWS_AS(read_file((dir / "missing").string()), Error);
  std::filesystem::remove_all(dir);
}
