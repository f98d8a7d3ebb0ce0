#include "exdyn/commands.hpp"

#include <fstream>
#include <sstream>

#include "exdyn/ar1.hpp"
#include "exdyn/csv.hpp"
#include "exdyn/errors.hpp"
#include "exdyn/harness.hpp"

namespace exdyn {

namespace {

void require_model(const RunSpec& spec) {
  if (!spec.has_model) throw ConfigError("this experiment needs a model configuration");
}

void write_trajectory(CsvWriter& csv, const RunSpec& spec) {
  require_model(spec);
  const TrajectoryRecord record = run_trajectory(spec.model, spec.n_steps, spec.stride);
  const std::size_t k = spec.model.k;
  const std::size_t dim = record.dim;
  const bool boundary = dim == 1 && k == 2;

  std::vector<std::string> cols{"n"};
  for (std::size_t j = 1; j <= k; ++j)
    for (std::size_t d = 1; d <= dim; ++d)
      cols.push_back("x" + std::to_string(j) + (dim > 1 ? "_" + std::to_string(d) : ""));
  if (boundary) cols.emplace_back("b");
  for (std::size_t j = 1; j <= k; ++j) cols.push_back("w" + std::to_string(j));
  csv.columns(cols);

  for (const auto& p : record.points) {
    csv.cell(static_cast<unsigned long long>(p.n));
    for (double x : p.means) csv.cell(x);
    if (boundary) {
      if (p.boundary)
        csv.cell(*p.boundary);
      else
        csv.cell(std::string_view("nan"));
    }
    for (double w : p.weights) csv.cell(w);
    csv.end();
  }
}

void write_variance_curve(CsvWriter& csv, const RunSpec& spec) {
  VarianceCurveSpec vc;
  vc.lambdas = spec.lambda_grid;
  vc.n_list = spec.n_list;
  vc.replicas = spec.replicas;
  vc.master_seed = spec.seed;
  const auto estimates = boundary_variance_curve(vc);
  csv.columns({"lambda", "n", "var_b", "stderr", "var_Y_pred"});
  for (const auto& e : estimates) {
    csv.cell(e.lambda)
        .cell(static_cast<unsigned long long>(e.n))
        .cell(e.variance)
        .cell(e.std_error)
        .cell(e.predicted)
        .end();
  }
}

void write_snapshot(CsvWriter& csv, const RunSpec& spec) {
  require_model(spec);
  const Snapshot snap = figure1_snapshot(spec.model, spec.n_steps, spec.snapshot);
  csv.columns({"kind", "category", "x", "y", "weight"});
  for (const auto& e : snap.exemplars)
    csv.cell("exemplar")
        .cell(static_cast<unsigned long long>(e.category + 1))
        .cell(e.location[0])
        .cell(e.location[1])
        .cell(e.weight)
        .end();
  for (std::size_t j = 0; j < snap.weights.size(); ++j)
    csv.cell("mean")
        .cell(static_cast<unsigned long long>(j + 1))
        .cell(snap.means[2 * j])
        .cell(snap.means[2 * j + 1])
        .cell(snap.weights[j])
        .end();
  for (const auto& p : snap.boundary)
    csv.cell("boundary").cell("").cell(p[0]).cell(p[1]).cell("").end();
}

void write_report(CsvWriter& csv, const PropertyReport& r, std::string_view name, bool pass) {
  for (const auto& [key, value] : r.statistics)
    csv.cell(name).cell(pass ? 1 : 0).cell("statistic").cell(key).cell(value).end();
  for (const auto& [key, value] : r.thresholds)
    csv.cell(name).cell(pass ? 1 : 0).cell("threshold").cell(key).cell(value).end();
}

// Returns the names of failed properties.
std::vector<std::string> write_properties(CsvWriter& csv, const RunSpec& spec) {
  require_model(spec);
  const ModelConfig& m = spec.model;
  const PropertyOptions& opts = spec.properties;
  std::vector<PropertyReport> reports;
  if (m.lambda > 0.0) {
    reports.push_back(property_non_extinction(m, spec.n_steps, opts));
    reports.push_back(property_non_collapse(m, spec.n_steps, opts));
    reports.push_back(property_non_convergence(m, spec.n_steps, opts));
  } else {
    reports.push_back(property_non_collapse(m, spec.n_steps, opts));
    reports.push_back(property_macqueen_cvt(m, spec.n_steps, opts));
  }

  csv.columns({"property", "pass", "kind", "name", "value"});
  std::vector<std::string> failed;
  for (const auto& r : reports) {
    write_report(csv, r, r.name, r.pass);
    if (!r.pass) failed.push_back(r.name);
  }
  if (spec.negative_control) {
    ModelConfig control = m;
    control.lambda = 0.0;
    const PropertyReport r = property_non_convergence(control, spec.n_steps, opts);
    // The control passes when the check correctly rejects lambda = 0.
    const bool pass = !r.pass;
    write_report(csv, r, "negative-control:non-convergence", pass);
    if (!pass) failed.push_back("negative-control:non-convergence");
  }
  return failed;
}

void write_ar1_table(CsvWriter& csv, const RunSpec& spec) {
  csv.columns({"lambda", "K", "sigma", "stationary_variance"});
  for (double lambda : spec.lambda_grid) {
    const BoundaryParams bp = boundary_params(lambda);
    csv.cell(lambda).cell(bp.K).cell(bp.sigma).cell(stationary_variance(lambda)).end();
  }
}

}  // namespace

CommandResult execute(std::string_view subcommand, const RunSpec& input) {
  const auto& subs = subcommands();
  if (std::find(subs.begin(), subs.end(), subcommand) == subs.end())
    throw ConfigError("unknown subcommand '" + std::string(subcommand) + "'");

  RunSpec spec = input;
  spec.experiment = subcommand;
  spec.model.seed = spec.seed;

  std::ostringstream out;
  CsvWriter csv(out);
  csv.header(config_entries(spec));

  CommandResult result;
  if (subcommand == "trajectory") {
    write_trajectory(csv, spec);
  } else if (subcommand == "variance-curve") {
    write_variance_curve(csv, spec);
  } else if (subcommand == "snapshot") {
    write_snapshot(csv, spec);
  } else if (subcommand == "properties") {
    const auto failed = write_properties(csv, spec);
    if (!failed.empty()) {
      result.code = ExitCode::property_failure;
      result.message = "property check failed:";
      for (const auto& name : failed) result.message += " " + name;
    }
  } else {
    write_ar1_table(csv, spec);
  }
  result.csv = out.str();
  return result;
}

ExitCode run(std::string_view subcommand, const RunSpec& spec,
             const std::filesystem::path& out_dir, std::ostream& err) {
  CommandResult result;
  try {
    result = execute(subcommand, spec);
  } catch (const ConfigError& e) {
    err << "exdyn: " << e.what() << '\n';
    return ExitCode::usage;
  } catch (const std::exception& e) {
    err << "exdyn: " << e.what() << '\n';
    return ExitCode::runtime;
  }

  const std::string name = spec.output.empty() ? std::string(subcommand) + ".csv" : spec.output;
  const std::filesystem::path path = out_dir / name;
  std::error_code ec;
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir, ec);
  std::ofstream file(path, std::ios::binary);
  if (!file || !(file << result.csv) || !file.flush()) {
    err << "exdyn: cannot write " << path.string() << '\n';
    return ExitCode::runtime;
  }
  if (result.code != ExitCode::ok) err << "exdyn: " << result.message << '\n';
  return result.code;
}

}  // namespace exdyn
