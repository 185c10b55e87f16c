#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace citemap {

/// Raised for any failed precondition or malformed input inside the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a run configuration violates its invariants before any work starts.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// xoshiro256** seeded through splitmix64. The standard distributions are
// implementation-defined, so sampling is done by hand to keep runs portable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  double uniform();                             // [0, 1)
  double uniform(double lo, double hi);         // [lo, hi)
  std::size_t below(std::size_t n);             // [0, n), n > 0
  bool bernoulli(double p) { return uniform() < p; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::uint64_t state_[4];
};

std::uint64_t fnv1a64(std::string_view data);
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for a named stage (and optional sub-key such as a window label).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stage, std::int64_t key = 0);

// Text helpers.
std::string trim(std::string_view s);
std::string to_upper(std::string_view s);
std::string collapse_whitespace(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string fixed(double value, int decimals);
std::string hex64(std::uint64_t v);

// CSV (RFC 4180 quoting, LF terminators).
std::string csv_escape(std::string_view field);
std::string csv_row(const std::vector<std::string>& fields);
std::vector<std::string> csv_parse_line(std::string_view line);
std::vector<std::vector<std::string>> csv_parse(std::string_view text);

// Files.
std::string read_file(const std::string& path);
/// Write through a temporary sibling and rename, so a failed write never clobbers the old file.
void write_file_atomic(const std::string& path, std::string_view content);

}  // namespace citemap
