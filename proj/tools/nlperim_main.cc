#include <iostream>

#include "CLI11.hpp"
#include "cli/commands.h"

int main(int argc, char** argv) {
  CLI::App app{"Non-local perimeters and their limits"};
  app.require_subcommand(1);

  nlperim::cli::RunOptions ro;
  std::string out, csv, script;
  unsigned long long seed = 0;
  int threads = 0;
  auto* run = app.add_subcommand("run", "Run the command described by a config file");
  run->add_option("--config", ro.config_path, "INI config file")->required();
  run->add_option("--set", ro.overrides, "Override section.key=value");
  auto* out_opt = run->add_option("--out", out, "Output directory");
  auto* seed_opt = run->add_option("--seed", seed, "RNG seed");
  auto* threads_opt = run->add_option("--threads", threads, "Worker threads, 0 for all cores");

  auto* plot = app.add_subcommand("plot", "Write a gnuplot script for a series.csv");
  plot->add_option("--csv", csv, "series.csv from a sweep")->required();
  plot->add_option("--out", script, "Script path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "nlperim: error kind=usage exit=2: " << e.what() << "\n";
    return 2;
  }

  if (*run) {
    if (*out_opt) ro.out_dir = out;
    if (*seed_opt) ro.seed = seed;
    if (*threads_opt) ro.threads = threads;
    return nlperim::cli::run(ro);
  }
  return nlperim::cli::plot(csv, script);
}
