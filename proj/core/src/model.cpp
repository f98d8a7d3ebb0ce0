#include "exdyn/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "exdyn/errors.hpp"

namespace exdyn {

void ModelConfig::validate() const {
  if (k == 0) throw ParameterError("k must be at least 1");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw ParameterError("lambda must be finite and >= 0");
  const std::size_t n = dim();
  if (init_means.size() != k * n)
    throw ParameterError("init_means must hold k points of dimension " + std::to_string(n));
  if (init_weights.size() != k) throw ParameterError("init_weights must hold k values");
  for (double w : init_weights)
    if (!(w > 0.0) || !std::isfinite(w))
      throw ParameterError("init_weights must be strictly positive");
  for (std::size_t j = 0; j < k; ++j)
    domain.require_contains({init_means.data() + j * n, n}, "init_means");
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (std::equal(init_means.begin() + i * n, init_means.begin() + (i + 1) * n,
                     init_means.begin() + j * n))
        throw ParameterError("init_means must be pairwise distinct");
}

SystemState initial_state(const ModelConfig& config) {
  config.validate();
  return SystemState{config.dim(), config.init_means, config.init_weights, 0};
}

std::size_t nearest_mean(std::span<const double> z, std::span<const double> means,
                         std::size_t dim) noexcept {
  const std::size_t k = means.size() / dim;
  std::size_t best = 0;
  double best_d2 = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    double d2 = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      const double diff = z[d] - means[j * dim + d];
      d2 += diff * diff;
    }
    if (j == 0 || d2 < best_d2) {
      best = j;
      best_d2 = d2;
    }
  }
  return best;
}

std::size_t classify(std::span<const double> z, std::span<const double> means,
                     const Domain& domain) {
  domain.require_contains(z, "exemplar");
  return nearest_mean(z, means, domain.dim());
}

void apply_update(SystemState& state, std::span<const double> z, std::size_t winner,
                  double decay) noexcept {
  const std::size_t k = state.k();
  for (std::size_t j = 0; j < k; ++j) {
    const double decayed = state.weights[j] * decay;
    if (j == winner) {
      const double updated = decayed + 1.0;
      double* x = state.means.data() + j * state.dim;
      for (std::size_t d = 0; d < state.dim; ++d) x[d] = (x[d] * decayed + z[d]) / updated;
      state.weights[j] = updated;
    } else {
      state.weights[j] = decayed;
    }
  }
  ++state.step;
}

SystemState step(const SystemState& state, std::span<const double> z, double lambda,
                 const Domain& domain) {
  if (!(lambda >= 0.0)) throw ParameterError("lambda must be >= 0");
  if (state.dim != domain.dim()) throw ContractError("state and domain dimensions differ");
  const std::size_t winner = classify(z, state.means, domain);
  SystemState next = state;
  apply_update(next, z, winner, std::exp(-lambda));
  return next;
}

double total_weight(const SystemState& state) noexcept {
  return std::accumulate(state.weights.begin(), state.weights.end(), 0.0);
}

double limit_weight(double lambda) {
  if (!(lambda > 0.0)) throw ParameterError("limit weight needs lambda > 0");
  return 1.0 / -std::expm1(-lambda);
}

double weight_bound(std::span<const double> w0, double lambda) {
  if (!(lambda > 0.0)) throw ParameterError("weight bound is undefined for lambda <= 0");
  const double initial = std::accumulate(w0.begin(), w0.end(), 0.0);
  return std::max(initial, limit_weight(lambda));
}

// ---------------------------------------------------------------------------

void ExemplarCloud::add(std::size_t category, std::span<const double> location,
                        std::uint64_t step, double base_weight) {
  categories_.at(category).push_back(
      Exemplar{{location.begin(), location.end()}, base_weight, step});
}

double ExemplarCloud::weight_at(const Exemplar& e, std::uint64_t step) const noexcept {
  const double age = static_cast<double>(step - e.born);
  return e.base_weight * std::exp(-lambda_ * age);
}

void ExemplarCloud::prune(std::uint64_t step, double threshold) {
  for (auto& exemplars : categories_)
    std::erase_if(exemplars, [&](const Exemplar& e) { return weight_at(e, step) <= threshold; });
}

void ExemplarCloud::weighted_mean(std::size_t j, std::uint64_t step,
                                  std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  double total = 0.0;
  for (const auto& e : categories_.at(j)) {
    const double w = weight_at(e, step);
    total += w;
    for (std::size_t d = 0; d < dim_; ++d) out[d] += w * e.location[d];
  }
  if (total > 0.0)
    for (auto& v : out) v /= total;
}

double ExemplarCloud::total_weight(std::size_t j, std::uint64_t step) const {
  double total = 0.0;
  for (const auto& e : categories_.at(j)) total += weight_at(e, step);
  return total;
}

std::size_t ExemplarCloud::size() const noexcept {
  std::size_t n = 0;
  for (const auto& c : categories_) n += c.size();
  return n;
}

// ---------------------------------------------------------------------------

Simulator::Simulator(ModelConfig config) : Simulator(config, Rng(config.seed)) {}

Simulator::Simulator(ModelConfig config, Rng rng)
    : config_(std::move(config)),
      state_(initial_state(config_)),
      rng_(std::move(rng)),
      decay_(std::exp(-config_.lambda)),
      z_(config_.dim()) {}

Simulator::Simulator(ModelConfig config, SystemState state, Rng rng)
    : config_(std::move(config)),
      state_(std::move(state)),
      rng_(std::move(rng)),
      decay_(std::exp(-config_.lambda)),
      z_(config_.dim()) {
  if (state_.dim != config_.dim() || state_.k() != config_.k ||
      state_.means.size() != config_.k * config_.dim())
    throw ContractError("initial state does not match the configuration");
}

std::size_t Simulator::advance() {
  config_.dist.sample(config_.domain, rng_, z_);
  const std::size_t winner = nearest_mean(z_, state_.means, state_.dim);
  apply_update(state_, z_, winner, decay_);
  if (cloud_) {
    cloud_->add(winner, z_, state_.step);
    if (prune_threshold_ > 0.0 && state_.step % prune_every_ == 0)
      cloud_->prune(state_.step, prune_threshold_);
  }
  return winner;
}

void Simulator::attach_cloud(ExemplarCloud cloud, double prune_threshold,
                             std::uint64_t prune_every) {
  if (cloud.k() != config_.k || cloud.dim() != config_.dim())
    throw ContractError("exemplar cloud does not match the configuration");
  cloud_ = std::move(cloud);
  prune_threshold_ = prune_threshold;
  prune_every_ = std::max<std::uint64_t>(1, prune_every);
}

}  // namespace exdyn
