#include "exdyn/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "exdyn/errors.hpp"

namespace exdyn {

namespace {

bool is_unit_two_category(const ModelConfig& config) {
  return config.k == 2 && config.dim() == 1 && config.dist.is_uniform() &&
         config.domain == Domain::unit_interval();
}

std::optional<double> boundary_if_defined(const SystemState& state) {
  if (state.dim == 1 && state.k() == 2 && state.means[0] < state.means[1])
    return 0.5 * (state.means[0] + state.means[1]);
  return std::nullopt;
}

// Separate stream for the geometry estimates so they never perturb the
// exemplar sequence.
Rng geometry_rng(std::uint64_t seed) { return Rng::for_stream(seed, 0x6e6f6e2d636f6cULL); }

}  // namespace

TrajectoryRecord run_trajectory(const ModelConfig& config, std::uint64_t n_steps,
                                std::uint64_t stride) {
  if (stride == 0) throw ParameterError("stride must be at least 1");
  Simulator sim(config);
  TrajectoryRecord record;
  record.stride = stride;
  record.dim = config.dim();
  auto push = [&](const SystemState& s) {
    record.points.push_back({s.step, s.means, s.weights, boundary_if_defined(s)});
  };
  push(sim.state());
  for (std::uint64_t n = 1; n <= n_steps; ++n) {
    sim.advance();
    if (n % stride == 0) push(sim.state());
  }
  return record;
}

// ---------------------------------------------------------------------------

SampleMoments sample_moments(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw ParameterError("sample moments need at least two values");
  const double dn = static_cast<double>(n);
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / dn;
  double ss = 0.0;
  double sq_mean = 0.0;
  for (double v : values) {
    const double d2 = (v - mean) * (v - mean);
    ss += d2;
    sq_mean += d2;
  }
  sq_mean /= dn;
  double sq_ss = 0.0;
  for (double v : values) {
    const double d2 = (v - mean) * (v - mean);
    sq_ss += (d2 - sq_mean) * (d2 - sq_mean);
  }
  SampleMoments m;
  m.count = n;
  m.mean = mean;
  m.variance = ss / (dn - 1.0);
  m.mean_se = std::sqrt(m.variance / dn);
  m.variance_se = std::sqrt(sq_ss / (dn - 1.0)) / std::sqrt(dn);
  return m;
}

double sample_autocovariance(std::span<const double> series, std::size_t lag) {
  const std::size_t n = series.size();
  if (lag >= n) throw ParameterError("lag exceeds the series length");
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
  double acc = 0.0;
  for (std::size_t i = 0; i + lag < n; ++i) acc += (series[i] - mean) * (series[i + lag] - mean);
  return acc / static_cast<double>(n - lag);
}

double batch_means_se(std::span<const double> values, std::size_t batch_size) {
  if (batch_size == 0) throw ParameterError("batch size must be positive");
  const std::size_t batches = values.size() / batch_size;
  if (batches < 2) throw ParameterError("batch means need at least two batches");
  std::vector<double> means(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    const auto first = values.begin() + static_cast<std::ptrdiff_t>(b * batch_size);
    means[b] = std::accumulate(first, first + static_cast<std::ptrdiff_t>(batch_size), 0.0) /
               static_cast<double>(batch_size);
  }
  return sample_moments(means).mean_se;
}

// ---------------------------------------------------------------------------

std::uint64_t equilibrium_steps(double lambda) {
  if (!(lambda > 0.0)) throw ParameterError("equilibrium steps need lambda > 0");
  return static_cast<std::uint64_t>(std::ceil(400.0 / lambda));
}

Rng replica_rng(std::uint64_t master_seed, std::size_t lambda_index, std::size_t replica) {
  return Rng::for_stream(splitmix64(master_seed) ^ splitmix64(0xa5a5a5a5ULL + lambda_index),
                         replica);
}

std::vector<double> replica_boundaries(double lambda, std::span<const std::uint64_t> steps,
                                       Rng rng) {
  const Vec4 zstar = fixed_point(lambda);
  const double decay = std::exp(-lambda);

  std::vector<std::size_t> order(steps.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return steps[a] < steps[b]; });

  // Same draws and arithmetic as Simulator::advance on the unit interval,
  // unrolled for two categories.
  double x1 = zstar[0], x2 = zstar[1], w1 = zstar[2], w2 = zstar[3];
  std::vector<double> out(steps.size());
  std::uint64_t n = 0;
  for (std::size_t idx : order) {
    for (; n < steps[idx]; ++n) {
      const double z = 0.0 + (1.0 - 0.0) * rng.uniform();
      const double d1 = z - x1, d2 = z - x2;
      const double a1 = w1 * decay, a2 = w2 * decay;
      if (d2 * d2 < d1 * d1) {
        x2 = (x2 * a2 + z) / (a2 + 1.0);
        w1 = a1;
        w2 = a2 + 1.0;
      } else {
        x1 = (x1 * a1 + z) / (a1 + 1.0);
        w1 = a1 + 1.0;
        w2 = a2;
      }
    }
    out[idx] = 0.5 * (x1 + x2);
  }
  return out;
}

std::vector<EnsembleEstimate> boundary_variance_curve(const VarianceCurveSpec& spec) {
  if (spec.replicas < 2) throw ParameterError("variance estimates need at least two replicas");
  for (double lambda : spec.lambdas)
    if (!(lambda > 0.0)) throw ParameterError("variance curve needs lambda > 0");

  std::size_t threads = spec.threads ? spec.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, spec.replicas);

  std::vector<EnsembleEstimate> estimates;
  for (std::size_t l = 0; l < spec.lambdas.size(); ++l) {
    const double lambda = spec.lambdas[l];
    std::vector<std::uint64_t> steps;
    for (const Horizon& h : spec.n_list)
      steps.push_back(h.is_infinite() ? equilibrium_steps(lambda) : h.value());

    // results[i * replicas + r]: b at steps[i] for replica r
    std::vector<double> results(steps.size() * spec.replicas);
    auto work = [&](std::size_t first, std::size_t last) {
      for (std::size_t r = first; r < last; ++r) {
        const auto b = replica_boundaries(lambda, steps, replica_rng(spec.master_seed, l, r));
        for (std::size_t i = 0; i < steps.size(); ++i) results[i * spec.replicas + r] = b[i];
      }
    };
    if (threads == 1) {
      work(0, spec.replicas);
    } else {
      std::vector<std::jthread> pool;
      const std::size_t chunk = (spec.replicas + threads - 1) / threads;
      for (std::size_t t = 0; t < threads; ++t) {
        const std::size_t first = t * chunk;
        const std::size_t last = std::min(spec.replicas, first + chunk);
        if (first < last) pool.emplace_back(work, first, last);
      }
    }

    for (std::size_t i = 0; i < steps.size(); ++i) {
      const SampleMoments m = sample_moments(
          std::span<const double>(results).subspan(i * spec.replicas, spec.replicas));
      EnsembleEstimate e;
      e.lambda = lambda;
      e.n = steps[i];
      e.equilibrium = spec.n_list[i].is_infinite();
      e.mean = m.mean;
      e.mean_se = m.mean_se;
      e.variance = m.variance;
      e.std_error = m.variance_se;
      e.replicas = spec.replicas;
      e.predicted = e.equilibrium ? stationary_variance(lambda)
                                  : variance_of_Y(lambda, Horizon::steps(steps[i]));
      estimates.push_back(e);
    }
  }
  return estimates;
}

// ---------------------------------------------------------------------------

double PropertyReport::statistic(const std::string& key) const {
  for (const auto& [name, value] : statistics)
    if (name == key) return value;
  for (const auto& [name, value] : thresholds)
    if (name == key) return value;
  throw ParameterError("report has no statistic named " + key);
}

std::uint64_t default_burn_in(double lambda) {
  if (!(lambda > 0.0)) return 0;
  return 10 * static_cast<std::uint64_t>(std::ceil(1.0 / lambda));
}

PropertyReport property_non_extinction(const ModelConfig& config, std::uint64_t n_steps,
                                       const PropertyOptions& options, const StepHook& hook) {
  if (options.window == 0) throw ParameterError("window must be positive");
  const std::uint64_t burn_in = options.burn_in.value_or(default_burn_in(config.lambda));

  Simulator sim(config);
  std::vector<std::uint64_t> last(config.k, burn_in);
  std::vector<std::uint64_t> longest(config.k, 0);
  std::vector<std::uint64_t> assigned(config.k, 0);
  for (std::uint64_t n = 1; n <= n_steps; ++n) {
    const std::size_t winner = sim.advance();
    if (hook) hook(sim.mutable_state());
    if (n <= burn_in) continue;
    ++assigned[winner];
    longest[winner] = std::max(longest[winner], n - last[winner] - 1);
    last[winner] = n;
  }
  const std::uint64_t end = std::max(n_steps, burn_in);
  for (std::size_t j = 0; j < config.k; ++j)
    longest[j] = std::max(longest[j], end - last[j]);

  const std::uint64_t max_gap = *std::max_element(longest.begin(), longest.end());
  const std::uint64_t min_assigned = *std::min_element(assigned.begin(), assigned.end());

  PropertyReport report;
  report.name = "non-extinction";
  report.seed = config.seed;
  report.pass = max_gap < options.window;
  report.statistics = {{"longest_unassigned_run", static_cast<double>(max_gap)},
                       {"min_assignments", static_cast<double>(min_assigned)},
                       {"steps", static_cast<double>(n_steps)}};
  report.thresholds = {{"window", static_cast<double>(options.window)},
                       {"burn_in", static_cast<double>(burn_in)}};
  return report;
}

PropertyReport property_non_collapse(const ModelConfig& config, std::uint64_t n_steps,
                                     const PropertyOptions& options) {
  if (options.check_stride == 0) throw ParameterError("check_stride must be positive");
  const std::uint64_t burn_in = options.burn_in.value_or(default_burn_in(config.lambda));
  const double v0 =
      options.v0_fraction * config.domain.volume() / static_cast<double>(config.k);

  Simulator sim(config);
  Rng geo = geometry_rng(config.seed);
  const std::size_t dim = config.dim();
  double min_distance = min_pairwise_distance(sim.state().means, dim);
  double min_volume = std::numeric_limits<double>::infinity();
  std::uint64_t checks = 0;
  std::uint64_t above = 0;
  for (std::uint64_t n = 1; n <= n_steps; ++n) {
    sim.advance();
    min_distance = std::min(min_distance, min_pairwise_distance(sim.state().means, dim));
    if (n % options.check_stride != 0 || n <= burn_in) continue;
    const double v = min_cell_volume(sim.state().means, config.domain, options.cell_samples, geo);
    min_volume = std::min(min_volume, v);
    ++checks;
    if (v > v0) ++above;
  }
  const double fraction =
      checks ? static_cast<double>(above) / static_cast<double>(checks) : 0.0;

  PropertyReport report;
  report.name = "non-collapse";
  report.seed = config.seed;
  report.pass = checks > 0 && fraction > options.q0;
  report.statistics = {{"fraction_above_v0", fraction},
                       {"min_cell_volume", checks ? min_volume : 0.0},
                       {"min_pairwise_distance", min_distance},
                       {"checks", static_cast<double>(checks)}};
  report.thresholds = {{"v0", v0},
                       {"q0", options.q0},
                       {"check_stride", static_cast<double>(options.check_stride)},
                       {"cell_samples", static_cast<double>(options.cell_samples)},
                       {"burn_in", static_cast<double>(burn_in)}};
  return report;
}

PropertyReport property_non_convergence(const ModelConfig& config, std::uint64_t n_steps,
                                        const PropertyOptions& options) {
  if (!(options.late_fraction > 0.0 && options.late_fraction <= 1.0))
    throw ParameterError("late_fraction must lie in (0, 1]");
  double floor = 0.0;
  if (options.variance_floor) {
    floor = *options.variance_floor;
  } else if (is_unit_two_category(config) && config.lambda > 0.0) {
    floor = 0.1 * stationary_variance(config.lambda);
  }

  const auto late = static_cast<std::uint64_t>(
      std::floor(options.late_fraction * static_cast<double>(n_steps)));
  const std::uint64_t late_start = n_steps - late;
  const std::size_t dim = config.dim();
  const std::size_t coords = config.k * dim;

  Simulator sim(config);
  // Welford accumulators per mean coordinate, plus the 1-D boundary.
  std::vector<double> mean(coords + 1, 0.0), m2(coords + 1, 0.0);
  std::vector<std::uint64_t> jumps(config.k, 0);
  std::uint64_t count = 0;
  std::vector<double> previous = sim.state().means;
  const bool has_boundary = is_unit_two_category(config);

  auto accumulate = [&](const SystemState& s) {
    ++count;
    const double c = static_cast<double>(count);
    for (std::size_t i = 0; i <= coords; ++i) {
      double v;
      if (i < coords)
        v = s.means[i];
      else if (has_boundary)
        v = 0.5 * (s.means[0] + s.means[1]);
      else
        continue;
      const double delta = v - mean[i];
      mean[i] += delta / c;
      m2[i] += delta * (v - mean[i]);
    }
  };

  if (late_start == 0) accumulate(sim.state());
  for (std::uint64_t n = 1; n <= n_steps; ++n) {
    sim.advance();
    const SystemState& s = sim.state();
    if (n > late_start) {
      accumulate(s);
      for (std::size_t j = 0; j < config.k; ++j) {
        double d2 = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
          const double diff = s.means[j * dim + d] - previous[j * dim + d];
          d2 += diff * diff;
        }
        if (std::sqrt(d2) > options.jump_epsilon) ++jumps[j];
      }
    }
    if (n >= late_start) previous = s.means;
  }

  const double denom = count > 1 ? static_cast<double>(count - 1) : 1.0;
  double min_var = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < coords; ++i) min_var = std::min(min_var, m2[i] / denom);
  if (coords == 0 || count < 2) min_var = 0.0;
  const std::uint64_t min_jumps = *std::min_element(jumps.begin(), jumps.end());
  const double jump_freq =
      late ? static_cast<double>(min_jumps) / static_cast<double>(late) : 0.0;

  PropertyReport report;
  report.name = "non-convergence";
  report.seed = config.seed;
  report.pass = min_var > floor && min_jumps > 0;
  report.statistics = {{"min_late_variance", min_var}, {"min_jump_frequency", jump_freq}};
  if (has_boundary) report.statistics.emplace_back("late_boundary_variance", m2[coords] / denom);
  report.thresholds = {{"variance_floor", floor},
                       {"jump_epsilon", options.jump_epsilon},
                       {"late_fraction", options.late_fraction}};
  return report;
}

PropertyReport property_macqueen_cvt(const ModelConfig& config, std::uint64_t n_steps,
                                     const PropertyOptions& options) {
  if (config.lambda != 0.0) throw ParameterError("the MacQueen check needs lambda = 0");
  if (n_steps < 10) throw ParameterError("the MacQueen check needs at least 10 steps");
  Simulator sim(config);
  Rng geo = geometry_rng(config.seed);
  const std::uint64_t early = n_steps / 10;
  sim.run(early);
  const CentroidalDeviation d_early =
      centroidal_deviation(sim.state().means, config.domain, options.cell_samples, geo);
  sim.run(n_steps - early);
  const CentroidalDeviation d_final =
      centroidal_deviation(sim.state().means, config.domain, options.cell_samples, geo);
  const double diam_limit = 0.05 * config.domain.diameter();

  PropertyReport report;
  report.name = "macqueen-cvt";
  report.seed = config.seed;
  report.pass = !d_final.empty_cell && d_final.value < options.cvt_max_ratio * d_early.value &&
                d_final.value < diam_limit;
  report.statistics = {{"deviation_early", d_early.value},
                       {"deviation_final", d_final.value},
                       {"ratio", d_early.value > 0.0 ? d_final.value / d_early.value
                                                     : std::numeric_limits<double>::infinity()},
                       {"empty_cell", d_final.empty_cell ? 1.0 : 0.0}};
  report.thresholds = {{"max_ratio", options.cvt_max_ratio},
                       {"max_deviation", diam_limit},
                       {"early_step", static_cast<double>(early)},
                       {"cell_samples", static_cast<double>(options.cell_samples)}};
  return report;
}

// ---------------------------------------------------------------------------

std::pair<SystemState, ExemplarCloud> cloud_start(const ModelConfig& config,
                                                  const SnapshotOptions& options, Rng& rng) {
  config.validate();
  const std::size_t dim = config.dim();
  ExemplarCloud cloud(config.k, dim, config.lambda);
  std::vector<double> p(dim);
  for (std::size_t j = 0; j < config.k; ++j) {
    const auto center = std::span<const double>(config.init_means).subspan(j * dim, dim);
    if (options.per_category == 0) {
      cloud.add(j, center, 0, config.init_weights[j]);
      continue;
    }
    for (std::size_t i = 0; i < options.per_category; ++i) {
      for (std::size_t d = 0; d < dim; ++d) p[d] = center[d] + options.sigma * rng.normal();
      config.domain.clamp(p);
      cloud.add(j, p, 0);
    }
  }
  SystemState state;
  state.dim = dim;
  state.means.assign(config.k * dim, 0.0);
  state.weights.assign(config.k, 0.0);
  for (std::size_t j = 0; j < config.k; ++j) {
    cloud.weighted_mean(j, 0, std::span<double>(state.means).subspan(j * dim, dim));
    state.weights[j] = cloud.total_weight(j, 0);
  }
  return {std::move(state), std::move(cloud)};
}

Snapshot figure1_snapshot(const ModelConfig& config, std::uint64_t n_steps,
                          const SnapshotOptions& options) {
  if (config.dim() != 2) throw ContractError("snapshots need a two-dimensional domain");
  if (!(options.prune_threshold >= 0.0)) throw ParameterError("prune threshold must be >= 0");
  if (options.grid < 2) throw ParameterError("boundary grid needs at least 2 points per side");

  Rng cloud_rng = Rng::for_stream(config.seed, 0x636c6f7564ULL);
  auto [state, cloud] = cloud_start(config, options, cloud_rng);
  Simulator sim(config, std::move(state), Rng(config.seed));
  sim.attach_cloud(std::move(cloud), options.prune_threshold);
  sim.run(n_steps);

  Snapshot snap;
  snap.step = sim.state().step;
  snap.dim = 2;
  snap.means = sim.state().means;
  snap.weights = sim.state().weights;
  const ExemplarCloud& c = *sim.cloud();
  for (std::size_t j = 0; j < c.k(); ++j)
    for (const auto& e : c.category(j)) {
      const double w = c.weight_at(e, snap.step);
      if (options.prune_threshold == 0.0 || w > options.prune_threshold)
        snap.exemplars.push_back({j, e.location, w});
    }

  // Voronoi edges by labelling a grid of cell centres.
  const std::size_t g = options.grid;
  const auto& lo = config.domain.lower();
  const auto& hi = config.domain.upper();
  const double hx = (hi[0] - lo[0]) / static_cast<double>(g);
  const double hy = (hi[1] - lo[1]) / static_cast<double>(g);
  std::vector<std::size_t> label(g * g);
  for (std::size_t iy = 0; iy < g; ++iy)
    for (std::size_t ix = 0; ix < g; ++ix) {
      const double pt[2] = {lo[0] + (static_cast<double>(ix) + 0.5) * hx,
                            lo[1] + (static_cast<double>(iy) + 0.5) * hy};
      label[iy * g + ix] = nearest_mean(pt, snap.means, 2);
    }
  for (std::size_t iy = 0; iy < g; ++iy)
    for (std::size_t ix = 0; ix < g; ++ix) {
      const double cx = lo[0] + (static_cast<double>(ix) + 0.5) * hx;
      const double cy = lo[1] + (static_cast<double>(iy) + 0.5) * hy;
      if (ix + 1 < g && label[iy * g + ix] != label[iy * g + ix + 1])
        snap.boundary.push_back({cx + 0.5 * hx, cy});
      if (iy + 1 < g && label[iy * g + ix] != label[(iy + 1) * g + ix])
        snap.boundary.push_back({cx, cy + 0.5 * hy});
    }
  return snap;
}

}  // namespace exdyn
