#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "exdyn/distribution.hpp"
#include "exdyn/domain.hpp"
#include "exdyn/rng.hpp"

namespace exdyn {

// Points are stored flat: category j occupies [j*dim, (j+1)*dim).

struct ModelConfig {
  std::size_t k = 2;
  double lambda = 0.0;  // decay rate, >= 0
  Domain domain;
  DistributionSpec dist = DistributionSpec::uniform();
  std::vector<double> init_means;    // k * dim
  std::vector<double> init_weights;  // k
  std::uint64_t seed = 0;

  std::size_t dim() const noexcept { return domain.dim(); }

  // Throws ParameterError / DomainError on: k == 0, lambda < 0 or non-finite,
  // wrong sizes, nonpositive weights, means outside E, duplicate means.
  void validate() const;
};

struct SystemState {
  std::size_t dim = 1;
  std::vector<double> means;
  std::vector<double> weights;
  std::uint64_t step = 0;

  std::size_t k() const noexcept { return weights.size(); }
  std::span<const double> mean(std::size_t j) const noexcept {
    return {means.data() + j * dim, dim};
  }

  friend bool operator==(const SystemState&, const SystemState&) = default;
};

SystemState initial_state(const ModelConfig& config);

// Least index minimising the squared Euclidean distance to z. Exact ties go
// to the lower index; no tolerance is applied. No domain check.
std::size_t nearest_mean(std::span<const double> z, std::span<const double> means,
                         std::size_t dim) noexcept;

// As nearest_mean, but throws DomainError if z is not in E.
std::size_t classify(std::span<const double> z, std::span<const double> means,
                     const Domain& domain);

// In-place update for an exemplar z already assigned to `winner`; `decay` is
// e^{-lambda}. Advances the step counter.
void apply_update(SystemState& state, std::span<const double> z, std::size_t winner,
                  double decay) noexcept;

// One step of the dynamics: classify z, fold it into the winning mean with
// weight 1, decay every other weight. Throws DomainError if z is not in E.
SystemState step(const SystemState& state, std::span<const double> z, double lambda,
                 const Domain& domain);

double total_weight(const SystemState& state) noexcept;

// W = 1 / (1 - e^{-lambda}), the limit of the total weight. Requires lambda > 0.
double limit_weight(double lambda);

// gamma = max(sum w0, W): an upper bound on every later total weight.
// Throws ParameterError for lambda <= 0.
double weight_bound(std::span<const double> w0, double lambda);

// Individual exemplars behind the category means. Only needed for snapshot
// output; the dynamics never read it. An exemplar born at step b with base
// weight v has weight v * e^{-lambda (n - b)} at step n.
class ExemplarCloud {
public:
  struct Exemplar {
    std::vector<double> location;
    double base_weight;
    std::uint64_t born;
  };

  ExemplarCloud(std::size_t k, std::size_t dim, double lambda)
      : dim_(dim), lambda_(lambda), categories_(k) {}

  void add(std::size_t category, std::span<const double> location, std::uint64_t step,
           double base_weight = 1.0);

  double weight_at(const Exemplar& e, std::uint64_t step) const noexcept;

  // Drops exemplars whose weight at `step` is <= threshold. Weights only
  // decrease, so a dropped exemplar would never become visible again; the
  // weighted-mean identity holds only while nothing has been dropped.
  void prune(std::uint64_t step, double threshold);

  // Weighted mean of category j at `step`, written to out (size dim).
  void weighted_mean(std::size_t j, std::uint64_t step, std::span<double> out) const;
  double total_weight(std::size_t j, std::uint64_t step) const;

  std::size_t k() const noexcept { return categories_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  const std::vector<Exemplar>& category(std::size_t j) const { return categories_[j]; }
  std::size_t size() const noexcept;

private:
  std::size_t dim_;
  double lambda_;
  std::vector<std::vector<Exemplar>> categories_;
};

// Runs one trajectory of the dynamics: draws exemplars from the configured
// law and applies `step`. Optionally carries an ExemplarCloud.
class Simulator {
public:
  explicit Simulator(ModelConfig config);
  Simulator(ModelConfig config, Rng rng);
  // Starts from an explicit state (e.g. one built from an exemplar cloud).
  Simulator(ModelConfig config, SystemState state, Rng rng);

  // Draws z, updates the state and returns the winning category.
  std::size_t advance();
  void run(std::uint64_t n_steps) {
    for (std::uint64_t i = 0; i < n_steps; ++i) advance();
  }

  const SystemState& state() const noexcept { return state_; }
  SystemState& mutable_state() noexcept { return state_; }
  const ModelConfig& config() const noexcept { return config_; }
  std::span<const double> last_sample() const noexcept { return z_; }
  double decay() const noexcept { return decay_; }

  // Opt-in exemplar tracking. Exemplars whose weight falls to the prune
  // threshold are dropped every `prune_every` steps (threshold 0 keeps all).
  void attach_cloud(ExemplarCloud cloud, double prune_threshold = 0.0,
                    std::uint64_t prune_every = 1024);
  const std::optional<ExemplarCloud>& cloud() const noexcept { return cloud_; }

private:
  ModelConfig config_;
  SystemState state_;
  Rng rng_;
  double decay_;
  std::vector<double> z_;
  std::optional<ExemplarCloud> cloud_;
  double prune_threshold_ = 0.0;
  std::uint64_t prune_every_ = 1024;
};

}  // namespace exdyn
