#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "voltrip/error.hpp"
#include "voltrip/pipeline.hpp"

using voltrip::RunConfig;

namespace {

struct CommonFlags {
  std::string config_path;
  std::string cycles, trips, vehicles, persons, outdir, format;
  int min_returns = -1;
  int bootstrap_b = -1;
  int threads = -1;
  long long seed = -1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file");
    cmd->add_option("--cycles", cycles, "cycles.csv path");
    cmd->add_option("--trips", trips, "trips.csv path");
    cmd->add_option("--vehicles", vehicles, "vehicles.csv path");
    cmd->add_option("--persons", persons, "persons.csv path");
    cmd->add_option("--out", outdir, "output directory");
    cmd->add_option("--format", format, "report format: text|csv|json");
    cmd->add_option("--min-returns", min_returns, "minimum returns per trip");
    cmd->add_option("--bootstrap-b", bootstrap_b, "bootstrap resamples");
    cmd->add_option("--seed", seed, "random seed");
    cmd->add_option("--threads", threads, "thread limit (0 = default)");
  }

  // config file first, then flags override
  RunConfig resolve() const {
    RunConfig c;
    if (!config_path.empty()) c = RunConfig::from_file(config_path);
    if (!cycles.empty()) c.cycles_path = cycles;
    if (!trips.empty()) c.trips_path = trips;
    if (!vehicles.empty()) c.vehicles_path = vehicles;
    if (!persons.empty()) c.persons_path = persons;
    if (!outdir.empty()) c.output_dir = outdir;
    if (!format.empty()) c.format = format;
    if (min_returns >= 0) c.min_returns = min_returns;
    if (bootstrap_b >= 0) c.bootstrap_b = bootstrap_b;
    if (seed >= 0) c.seed = static_cast<std::uint64_t>(seed);
    if (threads >= 0) c.threads = threads;
    return c;
  }
};

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"per-trip driving volatility and its OLS / quantile-regression correlates"};
  app.require_subcommand(1);

  CommonFlags volat_flags, describe_flags, fit_flags, profile_flags, synth_flags,
      pipeline_flags;
  int synth_n = -1;
  long long synth_seed = -1;

  volat_flags.attach(app.add_subcommand("volatility", "per-trip volatility from cycles"));
  describe_flags.attach(app.add_subcommand("describe", "descriptive statistics report"));
  fit_flags.attach(app.add_subcommand("fit", "OLS and quantile fits"));
  profile_flags.attach(app.add_subcommand("profile", "coefficient-vs-quantile sweep"));
  auto* synth_cmd = app.add_subcommand("synth", "generate a seeded synthetic dataset");
  synth_flags.attach(synth_cmd);
  synth_cmd->add_option("--n-trips", synth_n, "number of trips to generate");
  synth_cmd->add_option("--synth-seed", synth_seed, "generator seed");
  pipeline_flags.attach(app.add_subcommand("pipeline", "all stages in order"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("volatility")) {
      voltrip::run_volatility(volat_flags.resolve());
    } else if (app.got_subcommand("describe")) {
      voltrip::run_describe(describe_flags.resolve());
    } else if (app.got_subcommand("fit")) {
      voltrip::run_fit(fit_flags.resolve());
    } else if (app.got_subcommand("profile")) {
      voltrip::run_profile(profile_flags.resolve());
    } else if (app.got_subcommand("synth")) {
      RunConfig c = synth_flags.resolve();
      if (synth_n >= 0) c.synth.n_trips = synth_n;
      if (synth_seed >= 0) c.synth.seed = static_cast<std::uint64_t>(synth_seed);
      voltrip::run_synth(c);
    } else if (app.got_subcommand("pipeline")) {
      voltrip::run_pipeline(pipeline_flags.resolve());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
