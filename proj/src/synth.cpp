#include "citemap/synth.hpp"

#include <cstdio>
#include <vector>

#include "citemap/common.hpp"

namespace citemap {

std::string generate_synthetic_export(const SynthSpec& spec) {
  if (spec.n_years < 1 || spec.n_documents < 1 || spec.venues_per_group < 1) throw Error("synthetic corpus: bad spec");
  Rng rng(spec.seed);
  auto venue = [](char group, int i) { return std::string(1, group) + std::to_string(i + 1); };

  std::string out = "FN Synthetic citation index export\nVR 1.0\n";
  for (int d = 0; d < spec.n_documents; ++d) {
    const int year = spec.first_year + static_cast<int>(static_cast<long long>(d) * spec.n_years / spec.n_documents);
    const char own = d % 2 == 0 ? 'A' : 'B';
    const char other = own == 'A' ? 'B' : 'A';

    std::vector<std::string> refs;
    auto cite = [&](const std::string& v) {
      const int cited_year = year - 1 - static_cast<int>(rng.below(15));
      refs.push_back("Author" + std::to_string(rng.below(500)) + " X, " + std::to_string(cited_year) + ", " + v + ", V" +
                     std::to_string(1 + rng.below(40)) + ", P" + std::to_string(1 + rng.below(900)));
    };
    for (int i = 0; i < spec.venues_per_group; ++i) {
      if (!rng.bernoulli(spec.cite_prob)) continue;
      const int works = 1 + static_cast<int>(rng.below(2));
      for (int w = 0; w < works; ++w) {
        if (rng.bernoulli(spec.cross)) {
          cite(venue(other, static_cast<int>(rng.below(static_cast<std::size_t>(spec.venues_per_group)))));
        } else {
          cite(venue(own, i));
        }
      }
    }
    if (spec.noise_venues > 0 && rng.bernoulli(spec.noise_prob)) {
      cite("NOISE J " + std::to_string(1 + rng.below(static_cast<std::size_t>(spec.noise_venues))));
    }
    if (rng.bernoulli(spec.thesis_prob)) cite("THESIS");

    out += "PT J\n";
    out += "AU Synthetic, A\n";
    out += "TI Synthetic document " + std::to_string(d + 1) + "\n";
    out += "SO SYNTHETIC JOURNAL\n";
    out += "PY " + std::to_string(year) + "\n";
    for (std::size_t r = 0; r < refs.size(); ++r) out += (r == 0 ? "CR " : "   ") + refs[r] + "\n";
    char id[32];
    std::snprintf(id, sizeof id, "SYN:%06d", d + 1);
    out += std::string("UT ") + id + "\n";
    out += "ER\n\n";
  }
  out += "EF\n";
  return out;
}

}  // namespace citemap
