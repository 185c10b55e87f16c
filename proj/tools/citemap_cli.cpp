// citemap command line front end.
#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "citemap/common.hpp"
#include "citemap/pipeline.hpp"
#include "citemap/synth.hpp"

namespace {

struct Flags {
  std::vector<std::string> inputs;
  std::string rules;
  std::string config;
  int span = 0;
  std::int64_t min_count = 0;
  double tau = 0;
  int k = 0;
  double alpha = 0;
  int smooth_span = 0;
  double min_overlap = 0;
  std::uint64_t seed = 0;
  bool weighted = true;
  bool kaiser = true;
  bool ragged = false;
  std::string highlight;
  double load_threshold = 0;
  int workers = 0;
  std::string out;
};

struct Bound {
  std::vector<std::pair<CLI::Option*, std::function<void(citemap::RunConfig&)>>> opts;
};

// Registers the shared run flags on `app`; values are applied over the config file after parsing.
void add_run_flags(CLI::App* app, Flags& f, Bound& b) {
  auto bind = [&](CLI::Option* o, std::function<void(citemap::RunConfig&)> fn) { b.opts.emplace_back(o, std::move(fn)); };
  app->add_option("--config", f.config, "key = value configuration file (flags override it)");
  bind(app->add_option("-i,--input", f.inputs, "field-tagged export file(s)"),
       [&](auto& c) { c.inputs = f.inputs; });
  bind(app->add_option("--rules", f.rules, "venue normalization rules (TSV)"), [&](auto& c) { c.rules_path = f.rules; });
  bind(app->add_option("--span", f.span, "moving-window span in years"), [&](auto& c) { c.span = f.span; });
  bind(app->add_option("--min-count", f.min_count, "venues must be cited more than this"),
       [&](auto& c) { c.min_count = f.min_count; });
  bind(app->add_option("--tau", f.tau, "cosine threshold, in [0, 1)"), [&](auto& c) { c.tau = f.tau; });
  bind(app->add_option("--k", f.k, "number of factors"), [&](auto& c) { c.k_factors = f.k; });
  bind(app->add_option("--alpha", f.alpha, "temporal smoothing strength for the layout"),
       [&](auto& c) { c.alpha = f.alpha; });
  bind(app->add_option("--smooth-span", f.smooth_span, "frames averaged into the layout anchor"),
       [&](auto& c) { c.smooth_span = f.smooth_span; });
  bind(app->add_option("--min-overlap", f.min_overlap, "flow significance threshold"),
       [&](auto& c) { c.min_overlap = f.min_overlap; });
  bind(app->add_option("--seed", f.seed, "base seed"), [&](auto& c) { c.seed = f.seed; });
  bind(app->add_flag("--weighted,!--unweighted", f.weighted, "weighted modularity (default) or unweighted"),
       [&](auto& c) { c.weighted = f.weighted; });
  bind(app->add_flag("--kaiser,!--no-kaiser", f.kaiser, "Kaiser normalization in varimax"),
       [&](auto& c) { c.kaiser = f.kaiser; });
  bind(app->add_flag("--ragged-leading", f.ragged, "emit shorter windows at the start of the range"),
       [&](auto& c) { c.ragged_leading = f.ragged; });
  bind(app->add_option("--highlight", f.highlight, "venue flagged in the loadings report"),
       [&](auto& c) { c.highlight = f.highlight; });
  bind(app->add_option("--load-threshold", f.load_threshold, "loading cutoff for interfactorial complexity"),
       [&](auto& c) { c.load_threshold = f.load_threshold; });
  bind(app->add_option("--workers", f.workers, "window-parallel worker count"), [&](auto& c) { c.workers = f.workers; });
  bind(app->add_option("-o,--out", f.out, "output directory"), [&](auto& c) { c.out_dir = f.out; });
}

citemap::RunConfig resolve(const Flags& f, const Bound& b) {
  citemap::RunConfig cfg;
  if (!f.config.empty()) {
    std::string text;
    try {
      text = citemap::read_file(f.config);
    } catch (const citemap::Error& e) {
      throw citemap::ValidationError(e.what());
    }
    citemap::apply_config_text(cfg, text);
  }
  for (const auto& [opt, apply] : b.opts) {
    if (opt->count() > 0) apply(cfg);
  }
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"citemap: map the structure of a field from its cited venues"};
  app.set_version_flag("--version", citemap::kVersion);
  app.require_subcommand(1);

  Flags flags;
  Bound bound;
  std::string chosen;

  auto* run = app.add_subcommand("run", "run every stage in order");
  add_run_flags(run, flags, bound);
  // Each subcommand gets its own flag set; they share storage since only one runs.
  std::vector<Bound> per_stage(citemap::pipeline_stages().size());
  std::vector<CLI::App*> stage_apps;
  for (std::size_t i = 0; i < citemap::pipeline_stages().size(); ++i) {
    const auto& name = citemap::pipeline_stages()[i];
    auto* sub = app.add_subcommand(name, "run the '" + name + "' stage on earlier outputs");
    add_run_flags(sub, flags, per_stage[i]);
    stage_apps.push_back(sub);
  }

  citemap::SynthSpec synth;
  std::string synth_out = "synthetic.txt";
  auto* syn = app.add_subcommand("synth", "write a synthetic field-tagged export with two planted communities");
  syn->add_option("--first-year", synth.first_year);
  syn->add_option("--years", synth.n_years);
  syn->add_option("--documents", synth.n_documents);
  syn->add_option("--venues-per-group", synth.venues_per_group);
  syn->add_option("--cross", synth.cross, "cross-citation probability");
  syn->add_option("--seed", synth.seed);
  syn->add_option("-o,--out", synth_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (syn->parsed()) {
      citemap::write_file_atomic(synth_out, citemap::generate_synthetic_export(synth));
      std::cout << "wrote " << synth_out << "\n";
      return 0;
    }
    if (run->parsed()) {
      const auto cfg = resolve(flags, bound);
      const auto manifest = citemap::run_pipeline(cfg);
      std::cout << "done: " << manifest["stages"].size() << " stages, outputs in " << cfg.out_dir << "\n";
      return 0;
    }
    for (std::size_t i = 0; i < stage_apps.size(); ++i) {
      if (!stage_apps[i]->parsed()) continue;
      const auto cfg = resolve(flags, per_stage[i]);
      const auto summary = citemap::run_stage(citemap::pipeline_stages()[i], cfg);
      std::cout << summary.dump() << "\n";
      return 0;
    }
  } catch (const citemap::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
