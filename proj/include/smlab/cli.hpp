#pragma once

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smlab/experiment.hpp"

namespace smlab {

/// Parses argv, runs the chosen subcommand and writes its records.
/// Returns 0 on success, 1 when the run found violations, 2 on usage errors.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"split-merge chain laboratory"};
  app.set_config("--config", "", "TOML/INI file supplying any flag; command-line flags win");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::int64_t t_max = -1, trials = -1, stride = -1;
  std::uint64_t seed = 0;
  int n = 0, n_max = 0, j = -1;
  app.add_option("--n", n, "single n");
  app.add_option("--n-grid", cfg.n_grid, "list of n")->delimiter(',');
  app.add_option("--n-max", n_max, "largest n for exhaustive checks");
  app.add_option("--t-max", t_max, "last time step");
  app.add_option("--trials", trials, "Monte Carlo trials");
  auto* seed_opt = app.add_option("--seed", seed, "master seed");
  auto* eps_opt = app.add_option("--eps", cfg.eps, "tau_mix threshold (exact-tv) or schedule epsilon (schramm)");
  app.add_option("--delta", cfg.delta, "schedule delta");
  app.add_option("--j", j, "schedule start level");
  app.add_option("--k", cfg.k, "PD(1) coordinates compared");
  app.add_option("--stride", stride, "trajectory sampling stride");
  app.add_option("--threads", cfg.threads, "worker threads")->check(CLI::Range(1, 256));
  app.add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", cfg.out, "output file (default stdout)");
  app.add_flag("--record-wall-time", cfg.record_wall_time, "fill the wall_ms column");

  const std::map<std::string, CommandResult (*)(const ExperimentConfig&)> commands{
      {"exact-tv", cmd_exact_tv},   {"verify-coupling", cmd_verify_coupling}, {"lemma-grid", cmd_lemma_grid},
      {"meeting", cmd_meeting},     {"schramm", cmd_schramm},
  };
  for (const auto& [name, fn] : commands) app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  if (n > 0) cfg.n_grid.insert(cfg.n_grid.begin(), n);
  if (t_max >= 0) cfg.t_max = t_max;
  if (trials >= 0) cfg.trials = trials;
  if (stride >= 0) cfg.stride = stride;
  if (n_max > 0) cfg.n_max = n_max;
  if (j >= 0) cfg.j = j;
  if (seed_opt->count() > 0) cfg.seed = seed;
  cfg.eps_set = eps_opt->count() > 0;

  CommandResult result;
  try {
    result = commands.at(cfg.command)(cfg);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidInput& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const ResourceGuard& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  std::ofstream file;
  std::ostream* dest = &out;
  if (!cfg.out.empty()) {
    file.open(cfg.out, std::ios::binary);
    if (!file) {
      err << "cannot open " << cfg.out << '\n';
      return 2;
    }
    dest = &file;
  }
  if (cfg.format == "json")
    write_json(*dest, result.records);
  else
    write_csv(*dest, result.records);
  if (result.violations > 0) err << result.violations << " violation(s)\n";
  return result.exit_code();
}

}  // namespace smlab
