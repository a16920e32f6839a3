#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "swapent/errors.hpp"
#include "swapent/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Entanglement swapping between two critical spin chains"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::map<std::string, std::optional<std::string>> flags;
  const std::pair<const char*, const char*> options[] = {
      {"model", "xxz or tfim"},
      {"delta", "XXZ anisotropy in (-1, 1]"},
      {"length", "sites per chain"},
      {"pairs", "measured pairs: 4, 2..30 or 2..30:2"},
      {"mode", "uniform:MU, fixed:BITS, sample or enumerate"},
      {"chi", "maximum bond dimension"},
      {"cutoff", "relative discarded-weight cutoff"},
      {"sweeps", "maximum DMRG sweeps"},
      {"energy_tol", "DMRG energy convergence tolerance"},
      {"seed", "random seed"},
      {"samples", "Born-sampled trajectories per l"},
      {"threads", "worker threads (0 = default)"},
      {"exclude", "fit points dropped per edge"},
      {"k", "Luttinger parameter for the fit"},
      {"state", "MPS1 state file"},
      {"in", "input CSV"},
      {"out", "output file"},
  };
  for (const auto& [name, help] : options) flags[name];
  app.add_option("--config", config_path, "key = value config file");
  for (auto& [name, slot] : flags) {
    std::string flag = "--" + name;
    if (name == "energy_tol") flag += ",--energy-tol";
    std::string help;
    for (const auto& [n, h] : options)
      if (name == n) help = h;
    app.add_option(flag, slot, help);
  }

  const char* commands[][2] = {
      {"ground", "DMRG ground state; writes --state and a JSON report"},
      {"swap", "one measurement run per l; CSV rows"},
      {"sweep", "swap over a range of l (default 0..L)"},
      {"average", "Born-sampled mean and standard error per l"},
      {"enumerate", "all 4^l outcomes for small l; CSV rows"},
      {"oracle", "compare against the dense statevector pipeline"},
      {"fit", "fit a CSV of entropies to the scaling form"},
      {"predict", "closed-form predictions for the model"},
  };
  for (const auto& c : commands) app.add_subcommand(c[0], c[1]);

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    swapent::ExperimentConfig config;
    if (!config_path.empty()) config = swapent::ExperimentConfig::load(config_path);
    for (const auto& [name, value] : flags)
      if (value) config.set(name, *value);
    swapent::run_command(command, config, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << swapent::error_record(e) << '\n';
    return 2;
  }
  return 0;
}
