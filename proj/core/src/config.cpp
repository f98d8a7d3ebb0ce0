#include "exdyn/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "exdyn/commands.hpp"
#include "exdyn/csv.hpp"
#include "exdyn/errors.hpp"

namespace exdyn {

namespace {

constexpr std::string_view kModelKeys[] = {"k", "lambda", "lower", "upper", "init_means",
                                           "init_weights"};

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

// Parsing helpers throw std::invalid_argument; the caller attaches the key.
double to_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw std::invalid_argument("expected a number, got '" + std::string(s) + "'");
  return v;
}

std::uint64_t to_uint(std::string_view s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw std::invalid_argument("expected a non-negative integer, got '" + std::string(s) + "'");
  return v;
}

std::vector<double> to_doubles(std::string_view s) {
  std::vector<double> out;
  for (auto part : split(s, ',')) out.push_back(to_double(part));
  return out;
}

bool to_bool(std::string_view s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw std::invalid_argument("expected true or false, got '" + std::string(s) + "'");
}

template <class Range, class Fmt>
std::string join(const Range& r, std::string_view sep, Fmt fmt) {
  std::string out;
  bool first = true;
  for (const auto& v : r) {
    if (!first) out += sep;
    out += fmt(v);
    first = false;
  }
  return out;
}

std::string fmt_uint(std::uint64_t v) { return std::to_string(v); }

ModelConfig two_category(double lambda, double w) {
  ModelConfig m;
  m.k = 2;
  m.lambda = lambda;
  m.init_means = {0.25, 0.75};
  m.init_weights = {w, w};
  return m;
}

struct Parser {
  RunSpec spec;
  std::vector<double> lower, upper;

  void apply(std::string_view key, std::string_view value);
};

void Parser::apply(std::string_view key, std::string_view value) {
  RunSpec& s = spec;
  PropertyOptions& p = s.properties;
  if (key == "experiment") {
    const auto& subs = subcommands();
    if (std::find(subs.begin(), subs.end(), value) == subs.end())
      throw std::invalid_argument("unknown experiment '" + std::string(value) + "'");
    s.experiment = value;
  } else if (key == "seed") {
    s.seed = to_uint(value);
  } else if (key == "k") {
    s.model.k = to_uint(value);
  } else if (key == "lambda") {
    s.model.lambda = to_double(value);
  } else if (key == "lower") {
    lower = to_doubles(value);
  } else if (key == "upper") {
    upper = to_doubles(value);
  } else if (key == "distribution") {
    if (value != "uniform")
      throw std::invalid_argument("only 'uniform' is available from configuration files");
    s.model.dist = DistributionSpec::uniform();
  } else if (key == "init_means") {
    s.model.init_means.clear();
    for (auto point : split(value, ';'))
      for (double c : to_doubles(point)) s.model.init_means.push_back(c);
  } else if (key == "init_weights") {
    s.model.init_weights = to_doubles(value);
  } else if (key == "n_steps") {
    s.n_steps = to_uint(value);
  } else if (key == "stride") {
    s.stride = to_uint(value);
  } else if (key == "replicas") {
    s.replicas = to_uint(value);
  } else if (key == "lambda_grid") {
    s.lambda_grid = to_doubles(value);
  } else if (key == "n_list") {
    s.n_list.clear();
    for (auto tok : split(value, ','))
      s.n_list.push_back(tok == "inf" ? Horizon::infinite() : Horizon::steps(to_uint(tok)));
  } else if (key == "window") {
    p.window = to_uint(value);
  } else if (key == "burn_in") {
    p.burn_in = value == "auto" ? std::nullopt : std::optional(to_uint(value));
  } else if (key == "check_stride") {
    p.check_stride = to_uint(value);
  } else if (key == "cell_samples") {
    p.cell_samples = to_uint(value);
  } else if (key == "v0_fraction") {
    p.v0_fraction = to_double(value);
  } else if (key == "q0") {
    p.q0 = to_double(value);
  } else if (key == "late_fraction") {
    p.late_fraction = to_double(value);
  } else if (key == "jump_epsilon") {
    p.jump_epsilon = to_double(value);
  } else if (key == "cvt_max_ratio") {
    p.cvt_max_ratio = to_double(value);
  } else if (key == "variance_floor") {
    p.variance_floor = value == "auto" ? std::nullopt : std::optional(to_double(value));
  } else if (key == "negative_control") {
    s.negative_control = to_bool(value);
  } else if (key == "cloud_per_category") {
    s.snapshot.per_category = to_uint(value);
  } else if (key == "cloud_sigma") {
    s.snapshot.sigma = to_double(value);
  } else if (key == "prune_threshold") {
    s.snapshot.prune_threshold = to_double(value);
  } else if (key == "grid") {
    s.snapshot.grid = to_uint(value);
  } else if (key == "output") {
    if (value.empty() || value.find('/') != std::string_view::npos)
      throw std::invalid_argument("output must be a plain file name");
    s.output = value;
  } else {
    throw std::out_of_range("unknown key");
  }
}

bool is_model_key(std::string_view key) {
  return std::find(std::begin(kModelKeys), std::end(kModelKeys), key) != std::end(kModelKeys);
}

std::string field_in_message(const std::string& message) {
  for (auto key : {"init_means", "init_weights", "lambda", "domain", "k "})
    if (message.find(key) != std::string::npos) {
      std::string k(key);
      if (k == "domain") return "lower";
      if (k == "k ") return "k";
      return k;
    }
  return {};
}

}  // namespace

RunSpec expand_preset(std::string_view name) {
  RunSpec s;
  if (name == "fig3-left") {
    s.experiment = "trajectory";
    s.has_model = true;
    s.model = two_category(0.01, 0.5 * limit_weight(0.01));
    s.n_steps = 10'000;
    s.stride = 10;
  } else if (name == "fig3-right") {
    s.experiment = "trajectory";
    s.has_model = true;
    s.model = two_category(0.0, 10.0);
    s.n_steps = 10'000;
    s.stride = 10;
  } else if (name == "fig4") {
    s.experiment = "variance-curve";
    s.lambda_grid = {0.005, 0.01, 0.02, 0.05, 0.1, 0.2};
    s.n_list = {Horizon::steps(10), Horizon::steps(100), Horizon::steps(1000),
                Horizon::infinite()};
    s.replicas = 10'000;
  } else if (name == "fig1") {
    s.experiment = "snapshot";
    s.has_model = true;
    s.model.k = 4;
    s.model.lambda = 0.05;
    s.model.domain = Domain::square(100.0);
    s.model.init_means = {20.0, 20.0, 30.0, 70.0, 60.0, 40.0, 80.0, 80.0};
    s.model.init_weights = {100.0, 100.0, 100.0, 100.0};
    s.n_steps = 10'000;
  } else if (name == "theorem-suite") {
    s.experiment = "properties";
    s.has_model = true;
    s.model = two_category(0.05, 0.5 * limit_weight(0.05));
    s.n_steps = 1'000'000;
    s.negative_control = true;
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'", 0, "preset");
  }
  return s;
}

RunSpec parse_config(std::string_view text, std::optional<std::string_view> subcommand) {
  struct Line {
    int number;
    std::string key;
    std::string value;
  };
  std::vector<Line> lines;
  std::set<std::string> keys;
  std::optional<Line> preset;

  int number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    const auto raw = text.substr(start, end == std::string_view::npos ? text.npos : end - start);
    ++number;
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(number) + ": expected 'key = value'", number);
    Line entry{number, std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1)))};
    if (entry.key.empty())
      throw ConfigError("line " + std::to_string(number) + ": missing key", number);
    if (!keys.insert(entry.key).second)
      throw ConfigError("line " + std::to_string(number) + ": duplicate key '" + entry.key + "'",
                        number, entry.key);
    if (entry.key == "preset")
      preset = entry;
    else
      lines.push_back(std::move(entry));
  }

  Parser parser;
  if (preset) parser.spec = expand_preset(preset->value);
  if (parser.spec.has_model) {
    parser.lower = parser.spec.model.domain.lower();
    parser.upper = parser.spec.model.domain.upper();
  }
  const bool preset_model = parser.spec.has_model;

  bool any_model_key = false;
  for (const auto& l : lines) {
    try {
      parser.apply(l.key, l.value);
    } catch (const std::out_of_range&) {
      throw ConfigError("line " + std::to_string(l.number) + ": unknown key '" + l.key + "'",
                        l.number, l.key);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("line " + std::to_string(l.number) + ": " + l.key + ": " + e.what(),
                        l.number, l.key);
    }
    if (is_model_key(l.key)) any_model_key = true;
  }

  RunSpec spec = std::move(parser.spec);
  if (subcommand) {
    if (keys.count("experiment") && spec.experiment != *subcommand)
      throw ConfigError("experiment '" + spec.experiment + "' does not match subcommand '" +
                            std::string(*subcommand) + "'",
                        0, "experiment");
    spec.experiment = *subcommand;
  }

  const std::string& exp = spec.experiment;
  const bool needs_model = exp == "trajectory" || exp == "snapshot" || exp == "properties";
  if (any_model_key || needs_model) {
    if (!preset_model) {
      for (auto key : kModelKeys)
        if (!keys.count(std::string(key)))
          throw ConfigError("missing required key '" + std::string(key) + "'", 0,
                            std::string(key));
    }
    try {
      spec.model.domain = Domain(parser.lower, parser.upper);
    } catch (const Error& e) {
      throw ConfigError(std::string("lower/upper: ") + e.what(), 0, "lower");
    }
    const std::size_t dim = spec.model.dim();
    const auto& means = spec.model.init_means;
    for (std::size_t i = 0; dim && i < means.size() / dim; ++i)
      for (std::size_t j = i + 1; j < means.size() / dim; ++j)
        if (std::equal(means.begin() + i * dim, means.begin() + (i + 1) * dim,
                       means.begin() + j * dim))
          throw ConfigError("init_means: categories " + std::to_string(i + 1) + " and " +
                                std::to_string(j + 1) + " share a mean",
                            0, "init_means");
    try {
      spec.model.validate();
    } catch (const Error& e) {
      const std::string field = field_in_message(e.what());
      throw ConfigError((field.empty() ? "" : field + ": ") + e.what(), 0, field);
    }
    spec.has_model = true;
  }
  if (exp == "ar1-table" || exp == "variance-curve") {
    if (spec.lambda_grid.empty())
      throw ConfigError("missing required key 'lambda_grid'", 0, "lambda_grid");
    for (double l : spec.lambda_grid)
      if (!(l > 0.0)) throw ConfigError("lambda_grid: values must be > 0", 0, "lambda_grid");
  }
  if (exp == "variance-curve") {
    if (spec.n_list.empty()) throw ConfigError("missing required key 'n_list'", 0, "n_list");
    if (spec.replicas < 2) throw ConfigError("replicas: need at least 2", 0, "replicas");
  }
  if (spec.stride == 0) throw ConfigError("stride: must be at least 1", 0, "stride");
  spec.model.seed = spec.seed;
  return spec;
}

std::vector<std::pair<std::string, std::string>> config_entries(const RunSpec& spec) {
  std::vector<std::pair<std::string, std::string>> e;
  e.emplace_back("experiment", spec.experiment);
  e.emplace_back("seed", fmt_uint(spec.seed));
  if (spec.has_model) {
    const ModelConfig& m = spec.model;
    e.emplace_back("k", fmt_uint(m.k));
    e.emplace_back("lambda", format_double(m.lambda));
    e.emplace_back("lower", join(m.domain.lower(), ",", format_double));
    e.emplace_back("upper", join(m.domain.upper(), ",", format_double));
    e.emplace_back("distribution", m.dist.is_uniform() ? "uniform" : "density");
    std::string means;
    const std::size_t dim = m.dim();
    for (std::size_t j = 0; j * dim < m.init_means.size(); ++j) {
      if (j) means += ';';
      means += join(std::span<const double>(m.init_means).subspan(j * dim, dim), ",",
                    format_double);
    }
    e.emplace_back("init_means", means);
    e.emplace_back("init_weights", join(m.init_weights, ",", format_double));
  }
  e.emplace_back("n_steps", fmt_uint(spec.n_steps));
  e.emplace_back("stride", fmt_uint(spec.stride));
  e.emplace_back("replicas", fmt_uint(spec.replicas));
  if (!spec.lambda_grid.empty())
    e.emplace_back("lambda_grid", join(spec.lambda_grid, ",", format_double));
  if (!spec.n_list.empty())
    e.emplace_back("n_list", join(spec.n_list, ",", [](const Horizon& h) {
                     return h.is_infinite() ? std::string("inf") : std::to_string(h.value());
                   }));
  const PropertyOptions& p = spec.properties;
  e.emplace_back("window", fmt_uint(p.window));
  e.emplace_back("burn_in", p.burn_in ? fmt_uint(*p.burn_in) : "auto");
  e.emplace_back("check_stride", fmt_uint(p.check_stride));
  e.emplace_back("cell_samples", fmt_uint(p.cell_samples));
  e.emplace_back("v0_fraction", format_double(p.v0_fraction));
  e.emplace_back("q0", format_double(p.q0));
  e.emplace_back("late_fraction", format_double(p.late_fraction));
  e.emplace_back("jump_epsilon", format_double(p.jump_epsilon));
  e.emplace_back("cvt_max_ratio", format_double(p.cvt_max_ratio));
  e.emplace_back("variance_floor", p.variance_floor ? format_double(*p.variance_floor) : "auto");
  e.emplace_back("negative_control", spec.negative_control ? "true" : "false");
  e.emplace_back("cloud_per_category", fmt_uint(spec.snapshot.per_category));
  e.emplace_back("cloud_sigma", format_double(spec.snapshot.sigma));
  e.emplace_back("prune_threshold", format_double(spec.snapshot.prune_threshold));
  e.emplace_back("grid", fmt_uint(spec.snapshot.grid));
  if (!spec.output.empty()) e.emplace_back("output", spec.output);
  return e;
}

std::string render_config(const RunSpec& spec) {
  std::string out;
  for (const auto& [key, value] : config_entries(spec)) out += key + " = " + value + "\n";
  return out;
}

RunSpec parse_echoed_header(std::string_view csv_text) {
  std::string text;
  std::size_t start = 0;
  while (start < csv_text.size()) {
    const auto end = csv_text.find('\n', start);
    const auto line = csv_text.substr(start, end == std::string_view::npos ? csv_text.npos
                                                                           : end - start);
    if (line.size() < 2 || line.substr(0, 2) != "# ") break;
    text += line.substr(2);
    text += '\n';
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return parse_config(text);
}

}  // namespace exdyn
