// exdyn: command-line front end for the exemplar dynamics library.
//
//   exdyn <subcommand> --config <path> [--seed S] [--out DIR]
//
// Exit codes: 0 success, 1 usage/config error, 2 runtime error,
// 3 property failure.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "exdyn/commands.hpp"
#include "exdyn/config.hpp"
#include "exdyn/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Exemplar dynamics with decaying weights: simulations and AR(1) tables"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";

  const std::map<std::string, std::string> help = {
      {"trajectory", "Record means, weights and the boundary along one run"},
      {"variance-curve", "Ensemble variance of the boundary against the AR(1) prediction"},
      {"snapshot", "Exemplars, means and cell boundaries of a 2-D run"},
      {"properties", "Run the property checks; exit 3 if any fails"},
      {"ar1-table", "Closed-form K, sigma and stationary variance per lambda"},
  };
  for (const auto& name : exdyn::subcommands()) {
    auto* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("--config", config_path, "Run configuration file")->required();
    sub->add_option("--seed", seed, "Override the configured seed");
    sub->add_option("--out", out_dir, "Output directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(exdyn::ExitCode::usage);
  }
  const std::string subcommand = app.get_subcommands().front()->get_name();

  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "exdyn: cannot read " << config_path << '\n';
    return static_cast<int>(exdyn::ExitCode::usage);
  }
  std::stringstream text;
  text << in.rdbuf();

  exdyn::RunSpec spec;
  try {
    spec = exdyn::parse_config(text.str(), subcommand);
  } catch (const exdyn::ConfigError& e) {
    std::cerr << "exdyn: " << config_path << ": " << e.what() << '\n';
    return static_cast<int>(exdyn::ExitCode::usage);
  }
  if (seed) {
    spec.seed = *seed;
    spec.model.seed = *seed;
  }
  return static_cast<int>(exdyn::run(subcommand, spec, out_dir, std::cerr));
}
