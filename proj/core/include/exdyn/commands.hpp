#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>

#include "exdyn/config.hpp"

namespace exdyn {

enum class ExitCode : int {
  ok = 0,
  usage = 1,
  runtime = 2,
  property_failure = 3,
};

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"trajectory", "variance-curve", "snapshot",
                                              "properties", "ar1-table"};
  return names;
}

struct CommandResult {
  ExitCode code = ExitCode::ok;
  std::string csv;
  std::string message;  // one-line reason when code != ok
};

// Runs a subcommand and returns the CSV text. Property failures yield
// ExitCode::property_failure with the CSV still filled in. Library errors
// propagate as exceptions.
CommandResult execute(std::string_view subcommand, const RunSpec& spec);

// execute() plus writing <out_dir>/<output>. Reports errors on `err` and maps
// them to exit codes.
ExitCode run(std::string_view subcommand, const RunSpec& spec,
             const std::filesystem::path& out_dir, std::ostream& err);

}  // namespace exdyn
