#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using confdim::cli::Invocation;

  CLI::App app{"Dimensions, pressure and measures of conformal iterated function systems"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  Invocation inv;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string config_path;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"bowen", "Solve Bowen's equation P(t) = 0"},
      {"scan", "Dimensions h_n of the truncations of an infinite family"},
      {"converge", "Setwise, weak and total variation discrepancies of a measure sequence"},
      {"dimension", "Correlation, density and Young estimates for a measure"},
      {"gibbs", "Transfer-operator eigenmeasure, Gibbs state, entropy and Lyapunov exponent"},
      {"gallery-list", "List the named measure sequences"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "Configuration file (key = value lines)")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Sampling seed (overrides sample.seed)");
    sub->add_option("--out", out_dir, "Directory for report files (default: standard output)");
    sub->add_option("--format", inv.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--set", inv.overrides, "Override a configuration key, KEY=VALUE")->take_all();
    sub->callback([&inv, name = name] { inv.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : confdim::cli::kConfigError;
  }
  const CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--config")) inv.config_path = config_path;
  if (sub->count("--seed")) inv.seed = seed;
  if (sub->count("--out")) inv.out_dir = out_dir;
  return confdim::cli::run(inv, std::cout, std::cerr);
}
