// Command line front end: four subcommands over one shared option set.
// Exit codes: 0 ok, 1 violated bound, 2 bad configuration, 3 numerical failure.

#include <CLI11.hpp>
#include <optional>
#include <string>

#include "ufd/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for ultrafast diffusion toward weighted equilibria"};
  app.require_subcommand(1);

  ufd::CommandOptions opts;
  unsigned long long seed = 0;

  const struct {
    const char* name;
    const char* help;
  } commands[] = {
      {"simulate", "march initial data to t_end and record the decay diagnostics"},
      {"poincare", "spectral gap of the weighted Dirichlet form on a refinement ladder"},
      {"verify", "seeded sweep of random fields through every inequality check"},
      {"localize", "build and compare the ladder of localized problems"},
  };
  for (const auto& cmd : commands) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->add_option("-c,--config", opts.config_path, "experiment description file")
        ->required();
    sub->add_option("-o,--out", opts.out_dir, "output directory (default: out)");
    sub->add_option("-s,--seed", seed, "override the config seed");
    sub->add_option("-j,--jobs", opts.jobs, "worker count for ladder runs");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ufd::exit_config;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--seed")) opts.seed = seed;
  return ufd::run_command(sub->get_name(), opts);
}
