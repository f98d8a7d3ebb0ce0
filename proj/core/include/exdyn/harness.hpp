#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "exdyn/ar1.hpp"
#include "exdyn/geometry.hpp"
#include "exdyn/model.hpp"
#include "exdyn/rng.hpp"

namespace exdyn {

// ---------------------------------------------------------------------------
// Trajectories

struct TrajectoryPoint {
  std::uint64_t n = 0;
  std::vector<double> means;
  std::vector<double> weights;
  std::optional<double> boundary;  // 1-D, k = 2 only
};

struct TrajectoryRecord {
  std::uint64_t stride = 1;
  std::size_t dim = 1;
  std::vector<TrajectoryPoint> points;
};

// Records the initial state and then every stride-th state.
TrajectoryRecord run_trajectory(const ModelConfig& config, std::uint64_t n_steps,
                                std::uint64_t stride);

// ---------------------------------------------------------------------------
// Estimators

struct SampleMoments {
  double mean = 0.0;
  double mean_se = 0.0;
  double variance = 0.0;     // unbiased
  double variance_se = 0.0;  // sd of squared deviations / sqrt(N)
  std::size_t count = 0;
};

// Requires at least two values (ParameterError otherwise).
SampleMoments sample_moments(std::span<const double> values);

// Lag-r sample autocovariance of a series about its own mean.
double sample_autocovariance(std::span<const double> series, std::size_t lag);

// Batch-means standard error of the mean of `values` (batches of
// `batch_size` consecutive values).
double batch_means_se(std::span<const double> values, std::size_t batch_size);

// ---------------------------------------------------------------------------
// Boundary variance ensembles

// Steps used for the "n = infinity" column: ceil(400 / lambda).
std::uint64_t equilibrium_steps(double lambda);

struct EnsembleEstimate {
  std::string quantity = "b";
  double lambda = 0.0;
  std::uint64_t n = 0;
  bool equilibrium = false;  // the n = infinity column
  double mean = 0.0;
  double mean_se = 0.0;
  double variance = 0.0;
  double std_error = 0.0;  // of the variance
  std::size_t replicas = 0;
  double predicted = 0.0;  // AR(1) Var[Y^n] (stationary value for equilibrium)
};

struct VarianceCurveSpec {
  std::vector<double> lambdas;
  std::vector<Horizon> n_list;  // Horizon::infinite() -> equilibrium_steps
  std::size_t replicas = 10'000;
  std::uint64_t master_seed = 0;
  std::size_t threads = 0;  // 0 = hardware concurrency
};

// Stream for replica `replica` of the lambda at position `lambda_index`.
Rng replica_rng(std::uint64_t master_seed, std::size_t lambda_index, std::size_t replica);

// One replica: starts at Z*, runs to max(steps), returns b^n at each of the
// requested step counts (in the given order).
std::vector<double> replica_boundaries(double lambda, std::span<const std::uint64_t> steps,
                                       Rng rng);

// Estimates per (lambda, n) in lambda-major, n_list order. Results depend only
// on the spec, never on thread scheduling. Throws ParameterError for
// replicas < 2 or lambda <= 0.
std::vector<EnsembleEstimate> boundary_variance_curve(const VarianceCurveSpec& spec);

// ---------------------------------------------------------------------------
// Property suites

struct PropertyReport {
  std::string name;
  bool pass = false;
  std::vector<std::pair<std::string, double>> statistics;
  std::vector<std::pair<std::string, double>> thresholds;
  std::uint64_t seed = 0;

  double statistic(const std::string& key) const;
  friend bool operator==(const PropertyReport&, const PropertyReport&) = default;
};

struct PropertyOptions {
  std::uint64_t window = 10'000;
  std::optional<std::uint64_t> burn_in;  // default 10 * ceil(1 / lambda)
  std::uint64_t check_stride = 10'000;
  std::uint64_t cell_samples = kDefaultCellSamples;
  double v0_fraction = 0.05;  // v0 = v0_fraction * |E| / k
  double q0 = 0.5;
  double late_fraction = 0.25;
  double jump_epsilon = 1e-4;
  double cvt_max_ratio = 0.25;  // deviation(n) / deviation(n / 10)
  // Per-coordinate variance floor. Default: 0.1 sigma^2 / (1 - K^2) for the
  // 1-D k = 2 uniform [0, 1] case (0 at lambda = 0), else 0.
  std::optional<double> variance_floor;
};

std::uint64_t default_burn_in(double lambda);

// Applied to the state after each step; lets tests doctor the dynamics.
using StepHook = std::function<void(SystemState&)>;

// Passes iff, after burn-in, no category goes `window` consecutive steps
// without being assigned an exemplar.
PropertyReport property_non_extinction(const ModelConfig& config, std::uint64_t n_steps,
                                       const PropertyOptions& options = {},
                                       const StepHook& hook = {});

// Checks the smallest estimated cell volume every check_stride steps; passes
// iff the fraction of checks with min volume > v0 exceeds q0.
PropertyReport property_non_collapse(const ModelConfig& config, std::uint64_t n_steps,
                                     const PropertyOptions& options = {});

// Passes iff, over the last late_fraction of steps, every mean coordinate has
// variance above the floor and every mean moves by more than jump_epsilon at
// least once.
PropertyReport property_non_convergence(const ModelConfig& config, std::uint64_t n_steps,
                                        const PropertyOptions& options = {});

// lambda = 0 only. Passes iff the centroidal deviation at n_steps is below a
// quarter of that at n_steps / 10 and below 0.05 diam(E).
PropertyReport property_macqueen_cvt(const ModelConfig& config, std::uint64_t n_steps,
                                     const PropertyOptions& options = {});

// ---------------------------------------------------------------------------
// Exemplar-cloud snapshots

struct SnapshotOptions {
  std::size_t per_category = 100;  // initial exemplars per category (0: one per mean)
  double sigma = 3.0;              // spread of the initial exemplars
  double prune_threshold = 0.01;
  std::size_t grid = 512;
};

struct SnapshotExemplar {
  std::size_t category;
  std::vector<double> location;
  double weight;
};

struct Snapshot {
  std::uint64_t step = 0;
  std::size_t dim = 2;
  std::vector<SnapshotExemplar> exemplars;  // weight > prune threshold
  std::vector<double> means;
  std::vector<double> weights;
  std::vector<std::array<double, 2>> boundary;  // points on Voronoi edges
};

// Builds the initial exemplar cloud around config.init_means (Gaussian,
// clamped to E), starts the dynamics from the cloud's means and weights and
// returns the state after n_steps. Requires a 2-D domain.
Snapshot figure1_snapshot(const ModelConfig& config, std::uint64_t n_steps,
                          const SnapshotOptions& options = {});

// Initial cloud and matching state; exposed for tests.
std::pair<SystemState, ExemplarCloud> cloud_start(const ModelConfig& config,
                                                  const SnapshotOptions& options, Rng& rng);

}  // namespace exdyn
