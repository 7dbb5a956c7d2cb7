#include "csck/cli.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"csck-lab: toric stability, energies, geodesic rays, continuity path and the torus appendix"};
  app.require_subcommand(1);
  csck::cli::RunConfig cfg;
  std::string config, out;
  app.add_option("--jobs", cfg.jobs, "worker threads (0 = all cores)");
  app.add_option("--seed", cfg.seed, "seed for randomized suites");
  app.add_flag("--quiet", cfg.quiet, "do not echo the log to stderr");
  app.add_option("--out", out, "output directory (default $CSCK_LAB_OUT/<command>)");
  app.add_option("--config", config, "TOML config file");
  for (const auto& name : csck::cli::commands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "TOML config file");
    sub->add_option("--jobs", cfg.jobs, "worker threads (0 = all cores)");
    sub->add_option("--seed", cfg.seed, "seed for randomized suites");
    sub->add_flag("--quiet", cfg.quiet, "do not echo the log to stderr");
    sub->add_option("--out", out, "output directory");
    sub->callback([&cfg, name] { cfg.command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : csck::cli::kValidation;
  }
  cfg.config_path = config;
  cfg.output_dir = out;
  const auto outcome = csck::cli::run(cfg);
  if (!cfg.quiet)
    std::cerr << outcome.report.value("status", "") << " (exit " << outcome.exit_code << "), artifacts in "
              << outcome.output_dir.string() << '\n';
  return outcome.exit_code;
}
