#include <cmath>
#include <cstring>
#include <limits>

#include "doctest.h"
#include "exdyn/config.hpp"
#include "exdyn/csv.hpp"
#include "exdyn/errors.hpp"

using namespace exdyn;

namespace {

ConfigError config_error(std::string_view text, std::optional<std::string_view> sub = {}) {
  try {
    parse_config(text, sub);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected a ConfigError");
  return ConfigError("unreachable");
}

}  // namespace

TEST_CASE("format_double round-trips") {
  Rng rng(1);
  for (int i = 0; i < 20'000; ++i) {
    double v;
    const std::uint64_t bits = rng.next_u64();
    std::memcpy(&v, &bits, sizeof v);
    if (!std::isfinite(v)) continue;
    const std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_double(0.25) == "0.25");
  CHECK(format_double(1e-300) == "1e-300");
  CHECK(format_double(10000) == "10000");
}

TEST_CASE("presets") {
  SUBCASE("fig3-left") {
    const RunSpec s = parse_config("preset = fig3-left\n", "trajectory");
    CHECK(s.model.lambda == 0.01);
    CHECK(s.model.k == 2);
    CHECK(s.model.domain == Domain::unit_interval());
    CHECK(s.model.dist.is_uniform());
    CHECK(s.model.init_means == std::vector<double>{0.25, 0.75});
    CHECK(s.model.init_weights[0] == doctest::Approx(0.5 / (1 - std::exp(-0.01))));
    CHECK(s.model.init_weights[0] == doctest::Approx(50.0).epsilon(0.01));
  }
  SUBCASE("fig3-right") {
    const RunSpec s = parse_config("preset = fig3-right\n", "trajectory");
    CHECK(s.model.lambda == 0.0);
    CHECK(s.model.init_weights == std::vector<double>{10.0, 10.0});
  }
  SUBCASE("fig4") {
    const RunSpec s = parse_config("preset = fig4\n", "variance-curve");
    CHECK(s.lambda_grid.front() == 0.005);
    CHECK(s.lambda_grid.back() == 0.2);
    CHECK(std::find(s.n_list.begin(), s.n_list.end(), Horizon::infinite()) != s.n_list.end());
    CHECK(s.replicas == 10'000);
  }
  SUBCASE("fig1 and theorem-suite") {
    const RunSpec f = parse_config("preset = fig1\n", "snapshot");
    CHECK(f.model.dim() == 2);
    CHECK(f.model.k == 4);
    CHECK(f.snapshot.prune_threshold == 0.01);
    const RunSpec t = parse_config("preset = theorem-suite\n", "properties");
    CHECK(t.n_steps == 1'000'000);
    CHECK(t.model.lambda == 0.05);
    CHECK(t.negative_control);
  }
  SUBCASE("explicit keys override the preset") {
    const RunSpec s = parse_config("n_steps = 5\npreset = fig3-left\nseed = 9\n", "trajectory");
    CHECK(s.n_steps == 5);
    CHECK(s.seed == 9);
    CHECK(s.model.seed == 9);
  }
  CHECK(config_error("preset = fig9\n").field() == "preset");
}

TEST_CASE("explicit configuration") {
  const RunSpec s = parse_config(R"(
# two categories in a square
k = 2
lambda = 0.1
lower = 0, 0
upper = 2, 1
init_means = 0.5,0.5 ; 1.5,0.5
init_weights = 1, 2.5
n_steps = 100
n_list = 10, inf
lambda_grid = 0.1
burn_in = 7
)",
                                 "trajectory");
  CHECK(s.model.dim() == 2);
  CHECK(s.model.init_means == std::vector<double>{0.5, 0.5, 1.5, 0.5});
  CHECK(s.model.init_weights == std::vector<double>{1.0, 2.5});
  CHECK(s.n_list == std::vector<Horizon>{Horizon::steps(10), Horizon::infinite()});
  CHECK(s.properties.burn_in == 7);
}

TEST_CASE("configuration errors") {
  SUBCASE("duplicate init means name the field") {
    const auto e = config_error(
        "k = 2\nlambda = 0.1\nlower = 0\nupper = 1\ninit_means = 0.5;0.5\ninit_weights = 1,1\n",
        "trajectory");
    CHECK(e.field() == "init_means");
  }
  SUBCASE("missing key") {
    const auto e = config_error("k = 2\nlambda = 0.1\nlower = 0\nupper = 1\n", "trajectory");
    CHECK(e.field() == "init_means");
    CHECK(std::string(e.what()).find("init_means") != std::string::npos);
    CHECK(config_error("seed = 3\n", "ar1-table").field() == "lambda_grid");
  }
  SUBCASE("syntax error carries the line") {
    const auto e = config_error("k = 2\n\nthis line has no equals sign\n");
    CHECK(e.line() == 3);
  }
  SUBCASE("unknown key") {
    const auto e = config_error("preset = fig3-left\ncolour = blue\n", "trajectory");
    CHECK(e.field() == "colour");
    CHECK(e.line() == 2);
  }
  SUBCASE("duplicate key") {
    CHECK(config_error("seed = 1\nseed = 2\n").line() == 2);
  }
  SUBCASE("bad values") {
    CHECK(config_error("preset = fig3-left\nlambda = fast\n", "trajectory").field() == "lambda");
    CHECK(config_error("preset = fig3-left\nlambda = -1\n", "trajectory").field() == "lambda");
    CHECK(config_error("preset = fig3-left\ninit_weights = 1, 0\n", "trajectory").field() ==
          "init_weights");
    CHECK(config_error("preset = fig3-left\ninit_means = 0.2, 1.5\n", "trajectory").field() ==
          "init_means");
    CHECK(config_error("preset = fig3-left\nlower = 1\n", "trajectory").field() == "lower");
  }
  SUBCASE("experiment must match the subcommand") {
    CHECK(config_error("preset = fig3-left\nexperiment = snapshot\n", "trajectory").field() ==
          "experiment");
  }
}

TEST_CASE("echoed configuration re-parses to the same run") {
  for (const auto& name : preset_names()) {
    RunSpec spec = expand_preset(name);
    spec.seed = 123456789012345ULL;
    if (spec.has_model) spec.model.seed = spec.seed;
    const std::string once = render_config(spec);
    const RunSpec again = parse_config(once);
    CHECK(render_config(again) == once);
    CHECK(again.model.init_weights == spec.model.init_weights);
    CHECK(again.lambda_grid == spec.lambda_grid);
    CHECK(again.n_list == spec.n_list);
    CHECK(again.seed == spec.seed);
  }
  // Awkward doubles survive the trip.
  RunSpec spec = expand_preset("fig3-left");
  spec.model.lambda = 0.1 + 0.2;
  spec.model.init_weights = {1.0 / 3.0, std::nextafter(2.0, 3.0)};
  spec.properties.variance_floor = 1e-17;
  const RunSpec again = parse_config(render_config(spec));
  CHECK(again.model.lambda == spec.model.lambda);
  CHECK(again.model.init_weights == spec.model.init_weights);
  CHECK(again.properties.variance_floor == 1e-17);
}
