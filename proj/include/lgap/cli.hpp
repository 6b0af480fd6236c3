#pragma once

// Argument handling for the `lgap` executable, kept in a header so tests can
// drive it in-process.

#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "lgap/checks.hpp"
#include "lgap/config.hpp"
#include "lgap/runner.hpp"

namespace lgap {

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"Liouvillian gap solver"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> workers;
  std::optional<double> delta_e;
  std::optional<std::string> axis;
  std::optional<std::string> values;
  std::vector<std::string> sets;

  auto common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "config file")->check(CLI::ExistingFile);
    sub->add_option("--set", sets, "override a config key, key=value (repeatable)");
    sub->add_option("--seed", seed, "RNG seed");
  };

  CLI::App* gap = app.add_subcommand("gap", "two-stage gap solve");
  CLI::App* degenerate = app.add_subcommand("gap-degenerate", "energy-offset scan for degenerate steady states");
  CLI::App* sweep = app.add_subcommand("sweep", "gap over a list of gamma or N values");
  CLI::App* ed = app.add_subcommand("ed", "exact spectrum as CSV on stdout");
  CLI::App* check = app.add_subcommand("check", "run the invariant self-check suite");
  for (CLI::App* sub : {gap, degenerate, sweep, ed}) common(sub);
  for (CLI::App* sub : {gap, degenerate, sweep}) sub->add_option("-o,--out", out_dir, "output directory");
  degenerate->add_option("--delta-e", delta_e, "energy offset step");
  sweep->add_option("--workers", workers, "worker threads (0 = hardware)");
  sweep->add_option("--axis", axis, "gamma | N");
  sweep->add_option("--values", values, "comma-separated values");
  std::uint64_t check_seed = CheckOptions{}.seed;
  check->add_option("--seed", check_seed, "seed for random instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  if (check->parsed()) {
    CheckOptions opts;
    opts.seed = check_seed;
    return cmd_check(out, opts);
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos)
        throw config_error("--set '" + s + "': expected key=value", 0, s);
      apply_setting(cfg, detail::trim(s.substr(0, eq)), detail::trim(s.substr(eq + 1)));
    }
    if (seed) cfg.optimizer.seed = *seed;
    if (out_dir) cfg.out = *out_dir;
    if (workers) apply_setting(cfg, "workers", std::to_string(*workers));
    if (delta_e) cfg.delta_e = *delta_e;
    if (axis) apply_setting(cfg, "sweep.axis", *axis);
    if (values) apply_setting(cfg, "sweep.values", *values);

    if (gap->parsed()) return cmd_gap(cfg, out);
    if (degenerate->parsed()) return cmd_gap_degenerate(cfg, out);
    if (sweep->parsed()) return cmd_sweep(cfg, out);
    return cmd_ed(cfg, out);
  } catch (const config_error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {  // dimension and parse errors in model text
    err << "invalid model: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    err << "invalid model: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "run failed: " << e.what() << '\n';
    return kExitNotConverged;
  }
}

}  // namespace lgap
