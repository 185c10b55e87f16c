#pragma once

#include <cstdint>
#include <string>

namespace citemap {

/// Synthetic citing corpus with two planted groups of co-cited venues
/// (A1..An and B1..Bn). Each document belongs to one group, cites each of
/// its group's venues with probability cite_prob (one or two works), and
/// redirects each reference to the other group with probability cross.
/// Rare noise venues and unpublished-thesis references exercise cleaning.
struct SynthSpec {
  int first_year = 2000;
  int n_years = 12;
  int n_documents = 300;
  int venues_per_group = 10;
  double cite_prob = 0.8;
  double cross = 0.05;
  int noise_venues = 200;
  double noise_prob = 0.3;
  double thesis_prob = 0.05;
  std::uint64_t seed = 7;
};

/// Field-tagged export text (FN/VR header, PT..ER records, EF trailer).
std::string generate_synthetic_export(const SynthSpec& spec);

}  // namespace citemap
