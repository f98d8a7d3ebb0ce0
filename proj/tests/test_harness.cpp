#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "exdyn/errors.hpp"
#include "exdyn/harness.hpp"
#include "support.hpp"

using namespace exdyn;
using exdyn::testing::at_fixed_point;
using exdyn::testing::two_category;

TEST_CASE("trajectory recording") {
  const ModelConfig config = at_fixed_point(0.01, 3);
  const TrajectoryRecord empty = run_trajectory(config, 0, 5);
  REQUIRE(empty.points.size() == 1);
  CHECK(empty.points[0].n == 0);
  CHECK(empty.points[0].boundary == 0.5);

  const TrajectoryRecord rec = run_trajectory(config, 1000, 7);
  CHECK(rec.points.size() == 1 + 1000 / 7);
  for (std::size_t i = 1; i < rec.points.size(); ++i) {
    CHECK(rec.points[i].n % 7 == 0);
    CHECK(rec.points[i].n > rec.points[i - 1].n);
  }
  CHECK_THROWS_AS(run_trajectory(config, 10, 0), ParameterError);
}

TEST_CASE("fig3 style runs: fluctuation with decay, convergence without") {
  const TrajectoryRecord left = run_trajectory(at_fixed_point(0.01, 4), 20'000, 10);
  double mean_b = 0.0;
  for (const auto& p : left.points) mean_b += *p.boundary;
  mean_b /= static_cast<double>(left.points.size());
  CHECK(std::abs(mean_b - 0.5) < 0.05);

  const TrajectoryRecord right =
      run_trajectory(two_category(0.0, 10.0, 10.0, {0.25, 0.75}, 4), 200'000, 1000);
  const auto& last = right.points.back();
  CHECK(std::abs(last.means[0] - 0.25) < 0.02);
  CHECK(std::abs(last.means[1] - 0.75) < 0.02);
}

TEST_CASE("estimators") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const SampleMoments m = sample_moments(v);
  CHECK(m.mean == 2.5);
  CHECK(m.variance == doctest::Approx(5.0 / 3.0));
  CHECK(m.mean_se == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK_THROWS_AS(sample_moments(std::vector<double>{1.0}), ParameterError);
  CHECK(sample_autocovariance(v, 0) == doctest::Approx(1.25));
  CHECK(sample_autocovariance(v, 1) == doctest::Approx((-1.5 * -0.5 + -0.5 * 0.5 + 0.5 * 1.5) / 3));
}

TEST_CASE("variance curve basics") {
  VarianceCurveSpec spec;
  spec.lambdas = {0.2};
  spec.n_list = {Horizon::steps(0), Horizon::steps(5), Horizon::steps(50)};
  spec.replicas = 200;
  spec.master_seed = 9;
  const auto est = boundary_variance_curve(spec);
  REQUIRE(est.size() == 3);
  CHECK(est[0].variance == 0.0);
  CHECK(est[0].mean == 0.5);
  CHECK(est[1].variance > 0.0);
  CHECK(est[2].n == 50);
  CHECK(est[2].predicted == variance_of_Y(0.2, Horizon::steps(50)));

  spec.replicas = 1;
  CHECK_THROWS_AS(boundary_variance_curve(spec), ParameterError);
  spec.replicas = 10;
  spec.lambdas = {0.0};
  CHECK_THROWS_AS(boundary_variance_curve(spec), ParameterError);
}

TEST_CASE("variance curve is independent of scheduling and replicas reproduce alone") {
  VarianceCurveSpec spec;
  spec.lambdas = {0.3, 0.1};
  spec.n_list = {Horizon::steps(20), Horizon::infinite(), Horizon::steps(3)};
  spec.replicas = 64;
  spec.master_seed = 77;
  spec.threads = 1;
  const auto serial = boundary_variance_curve(spec);
  spec.threads = 5;
  const auto parallel = boundary_variance_curve(spec);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].variance == parallel[i].variance);
    CHECK(serial[i].mean == parallel[i].mean);
  }
  CHECK(serial[1].equilibrium);
  CHECK(serial[1].n == equilibrium_steps(0.3));

  // Replica 10 of lambda index 1, run on its own.
  const std::uint64_t steps[] = {20, equilibrium_steps(0.1), 3};
  const auto a = replica_boundaries(0.1, steps, replica_rng(77, 1, 10));
  const auto b = replica_boundaries(0.1, steps, replica_rng(77, 1, 10));
  CHECK(a == b);
  CHECK(a != replica_boundaries(0.1, steps, replica_rng(77, 1, 11)));
}

TEST_CASE("replica fast path matches the generic simulator bit for bit") {
  for (double lambda : {0.01, 0.4}) {
    const std::uint64_t steps[] = {0, 1, 17, 3000};
    const auto fast = replica_boundaries(lambda, steps, replica_rng(5, 0, 3));
    Simulator sim(at_fixed_point(lambda), replica_rng(5, 0, 3));
    std::uint64_t done = 0;
    for (std::size_t i = 0; i < 4; ++i) {
      sim.run(steps[i] - done);
      done = steps[i];
      CHECK(fast[i] == 0.5 * (sim.state().means[0] + sim.state().means[1]));
    }
  }
}

// Plain re-implementation of the two-category map on [0, 1].
static double reference_boundary(double lambda, int steps, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double e = std::exp(-lambda);
  const double w0 = 0.5 / (1.0 - e);
  double x[2] = {0.25, 0.75}, w[2] = {w0, w0};
  for (int n = 0; n < steps; ++n) {
    const double z = u(gen);
    const int i = std::abs(z - x[1]) < std::abs(z - x[0]) ? 1 : 0;
    for (int j = 0; j < 2; ++j) w[j] *= e;
    x[i] = (x[i] * w[i] + z) / (w[i] + 1.0);
    w[i] += 1.0;
  }
  return 0.5 * (x[0] + x[1]);
}

TEST_CASE("equilibrium variance at lambda = ln 2 matches a reference simulation") {
  const double lambda = std::numbers::ln2;
  VarianceCurveSpec spec;
  spec.lambdas = {lambda};
  spec.n_list = {Horizon::steps(10), Horizon::steps(100), Horizon::infinite()};
  spec.replicas = 10'000;
  spec.master_seed = 31;
  const auto est = boundary_variance_curve(spec);

  std::mt19937_64 gen(2024);
  std::vector<double> ref(10'000);
  for (double& b : ref) b = reference_boundary(lambda, static_cast<int>(est[2].n), gen);
  const SampleMoments m = sample_moments(ref);
  CHECK(std::abs(est[2].variance - m.variance) <
        3.0 * std::hypot(est[2].std_error, m.variance_se));

  // Symmetric start: the mean boundary stays at 1/2.
  for (const auto& e : est) CHECK(std::abs(e.mean - 0.5) < 3.0 * e.mean_se + 1e-15);
  CHECK(est[1].variance > est[0].variance - est[0].std_error);
}

TEST_CASE("non-extinction") {
  SUBCASE("two categories, lambda = 0.05") {
    const PropertyReport r = property_non_extinction(at_fixed_point(0.05, 8), 1'000'000);
    CHECK(r.pass);
    CHECK(r.statistic("longest_unassigned_run") < 10'000);
    CHECK(r.statistic("burn_in") == 200);
  }
  SUBCASE("single category") {
    ModelConfig c;
    c.k = 1;
    c.lambda = 0.1;
    c.init_means = {0.3};
    c.init_weights = {1.0};
    CHECK(property_non_extinction(c, 50'000).pass);
  }
  SUBCASE("negative control: category 2 is pinned onto category 1") {
    const StepHook pin = [](SystemState& s) { s.means[1] = s.means[0]; };
    const PropertyReport r = property_non_extinction(at_fixed_point(0.05, 8), 100'000, {}, pin);
    CHECK_FALSE(r.pass);
    CHECK(r.statistic("min_assignments") == 0);
  }
}

TEST_CASE("non-collapse") {
  PropertyOptions opts;
  opts.check_stride = 20'000;
  const PropertyReport r = property_non_collapse(at_fixed_point(0.05, 12), 1'000'000, opts);
  CHECK(r.pass);
  CHECK(r.statistic("fraction_above_v0") > 0.99);
  CHECK(r.statistic("min_pairwise_distance") > 1e-3);
  CHECK(r.statistic("v0") == doctest::Approx(0.025));

  const PropertyReport macqueen = property_non_collapse(
      two_category(0.0, 10.0, 10.0, {0.25, 0.75}, 12), 200'000, opts);
  CHECK(macqueen.pass);
}

TEST_CASE("non-convergence and its negative control") {
  const PropertyReport pos = property_non_convergence(at_fixed_point(0.01, 5), 1'000'000);
  CHECK(pos.pass);
  const PropertyReport neg =
      property_non_convergence(two_category(0.0, 10.0, 10.0, {0.25, 0.75}, 5), 1'000'000);
  CHECK_FALSE(neg.pass);
  CHECK(neg.statistic("min_jump_frequency") == 0.0);

  // Larger decay -> larger late-window boundary variance, as the closed form predicts.
  const PropertyReport fast = property_non_convergence(at_fixed_point(0.1, 6), 1'000'000);
  CHECK(stationary_variance(0.1) > stationary_variance(0.01));
  CHECK(fast.statistic("late_boundary_variance") > pos.statistic("late_boundary_variance"));
}

TEST_CASE("MacQueen limit reaches the centroidal configuration") {
  const PropertyReport generic =
      property_macqueen_cvt(two_category(0.0, 1.0, 1.0, {0.05, 0.15}, 21), 1'000'000);
  CHECK(generic.statistic("deviation_final") < 0.02);
  CHECK(generic.statistic("empty_cell") == 0.0);
  Simulator sim(two_category(0.0, 1.0, 1.0, {0.05, 0.15}, 21));
  sim.run(1'000'000);
  CHECK(std::abs(sim.state().means[0] - 0.25) < 0.02);
  CHECK(std::abs(sim.state().means[1] - 0.75) < 0.02);

  PropertyOptions loose;
  loose.cvt_max_ratio = 1.5;
  CHECK(property_macqueen_cvt(two_category(0.0, 1.0, 1.0, {0.05, 0.15}, 21), 1'000'000, loose)
            .pass);

  const PropertyReport centred =
      property_macqueen_cvt(two_category(0.0, 10.0, 10.0, {0.25, 0.75}, 21), 100'000);
  CHECK(centred.statistic("deviation_final") < 0.01);

  CHECK_THROWS_AS(property_macqueen_cvt(at_fixed_point(0.1), 1000), ParameterError);
}

TEST_CASE("property reports are reproducible") {
  PropertyOptions opts;
  opts.check_stride = 5000;
  opts.cell_samples = 2000;
  const ModelConfig c = at_fixed_point(0.05, 99);
  CHECK(property_non_collapse(c, 50'000, opts) == property_non_collapse(c, 50'000, opts));
  CHECK(property_non_convergence(c, 50'000, opts) == property_non_convergence(c, 50'000, opts));
}

namespace {

ModelConfig square_config(double lambda) {
  ModelConfig c;
  c.k = 4;
  c.lambda = lambda;
  c.domain = Domain::square(100.0);
  c.init_means = {20.0, 20.0, 30.0, 70.0, 60.0, 40.0, 80.0, 80.0};
  c.init_weights = {100.0, 100.0, 100.0, 100.0};
  c.seed = 3;
  return c;
}

}  // namespace

TEST_CASE("snapshot exemplar counts") {
  SnapshotOptions opts;
  opts.grid = 64;
  SUBCASE("no decay keeps everything") {
    const Snapshot s = figure1_snapshot(square_config(0.0), 2000, opts);
    CHECK(s.exemplars.size() == 400 + 2000);
  }
  SUBCASE("decay with a 0.01 threshold keeps the last ln(100)/lambda arrivals") {
    // weight e^{-0.05 a} > 0.01 <=> age a <= 92: ages 0..92.
    const Snapshot s = figure1_snapshot(square_config(0.05), 3000, opts);
    CHECK(s.exemplars.size() == 93);
    const Snapshot later = figure1_snapshot(square_config(0.05), 6000, opts);
    CHECK(later.exemplars.size() == 93);
  }
  SUBCASE("threshold 0 emits all") {
    opts.prune_threshold = 0.0;
    const Snapshot s = figure1_snapshot(square_config(0.05), 1500, opts);
    CHECK(s.exemplars.size() == 400 + 1500);
  }
  SUBCASE("boundary points separate cells") {
    const Snapshot s = figure1_snapshot(square_config(0.05), 500, opts);
    CHECK_FALSE(s.boundary.empty());
    CHECK(s.means.size() == 8);
  }
}

TEST_CASE("initial cloud is clamped and defines the starting means") {
  ModelConfig c = square_config(0.05);
  c.init_means[0] = 1.0;  // close to the corner: many draws fall outside
  c.init_means[1] = 1.0;
  Rng rng(1);
  SnapshotOptions opts;
  auto [state, cloud] = cloud_start(c, opts, rng);
  CHECK(cloud.size() == 400);
  for (std::size_t j = 0; j < 4; ++j) {
    for (const auto& e : cloud.category(j)) CHECK(c.domain.contains(e.location));
    double m[2];
    cloud.weighted_mean(j, 0, m);
    CHECK(m[0] == state.means[2 * j]);
    CHECK(state.weights[j] == 100.0);
  }
  CHECK_THROWS_AS(figure1_snapshot(at_fixed_point(0.1), 10), ContractError);
}
