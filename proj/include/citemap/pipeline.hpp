#pragma once

// Batch pipeline. Every stage reads the previous stages' files from the
// output directory and writes its own, so stages can be run one at a time
// or all together with identical results.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "citemap/common.hpp"

namespace citemap {

struct RunConfig {
  std::vector<std::string> inputs;
  std::string rules_path;  // empty: built-in normalization rules
  int span = 4;
  std::int64_t min_count = 20;
  double tau = 0.2;
  int k_factors = 5;
  double alpha = 1.0;
  int smooth_span = 4;
  double min_overlap = 0.3;
  std::uint64_t seed = 1;
  bool weighted = true;
  bool kaiser = true;
  bool ragged_leading = false;
  std::string highlight;       // venue whose loadings are flagged
  double load_threshold = 0.1; // for interfactorial complexity
  int workers = 1;
  std::string out_dir = "out";

  /// Throws ValidationError on the first violated invariant.
  void validate() const;
  nlohmann::ordered_json to_json() const;
};

/// Applies "key = value" lines (keys as the long CLI flags without dashes).
void apply_config_text(RunConfig& cfg, std::string_view text);

class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error("stage '" + stage + "' failed: " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

/// Stage names in execution order.
const std::vector<std::string>& pipeline_stages();

/// Runs one stage; returns its summary (also written to stages/<name>.json)
/// and refreshes manifest.json.
nlohmann::ordered_json run_stage(const std::string& stage, const RunConfig& cfg);

/// Runs every stage in order and returns the manifest. Wall times go to
/// run_times.json, the only non-deterministic output.
nlohmann::ordered_json run_pipeline(const RunConfig& cfg);

inline constexpr const char* kVersion = "1.0.0";

}  // namespace citemap
