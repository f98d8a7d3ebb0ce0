#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "exdyn/ar1.hpp"
#include "exdyn/harness.hpp"
#include "exdyn/model.hpp"

namespace exdyn {

// Run configuration file
// ----------------------
// Plain text, one `key = value` per line. Blank lines and lines starting
// with `#` are ignored. Lists are comma separated; points in init_means are
// separated by `;` and their coordinates by `,`. `preset = <name>` loads a
// complete configuration first; other keys then override it.
//
// Keys: experiment seed k lambda lower upper distribution init_means
// init_weights n_steps stride replicas lambda_grid n_list window burn_in
// check_stride cell_samples v0_fraction q0 late_fraction jump_epsilon
// variance_floor cvt_max_ratio negative_control cloud_per_category cloud_sigma
// prune_threshold grid output preset

struct RunSpec {
  std::string experiment;  // empty: decided by the subcommand
  std::uint64_t seed = 1;  // the only entropy source; copied into model.seed
  bool has_model = false;
  ModelConfig model;
  std::uint64_t n_steps = 10'000;
  std::uint64_t stride = 1;
  std::size_t replicas = 10'000;
  std::vector<double> lambda_grid;
  std::vector<Horizon> n_list;
  PropertyOptions properties;
  bool negative_control = false;
  SnapshotOptions snapshot;
  std::string output;  // empty: <experiment>.csv
};

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig1", "fig3-left", "fig3-right", "fig4",
                                              "theorem-suite"};
  return names;
}

// Throws ConfigError for unknown names.
RunSpec expand_preset(std::string_view name);

// Parses configuration text. When `subcommand` is given, keys it needs are
// required and a conflicting `experiment` key is rejected. Throws ConfigError
// carrying the line number (syntax) or key name (semantics).
RunSpec parse_config(std::string_view text,
                     std::optional<std::string_view> subcommand = std::nullopt);

// Canonical, fully explicit key/value list for a spec. Feeding these lines
// back to parse_config yields the same spec.
std::vector<std::pair<std::string, std::string>> config_entries(const RunSpec& spec);
std::string render_config(const RunSpec& spec);

// Recovers the run configuration from the `# key=value` header block of an output CSV.
RunSpec parse_echoed_header(std::string_view csv_text);

}  // namespace exdyn
