#include "exdyn/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "exdyn/errors.hpp"

namespace exdyn {

void require_distinct_means(std::span<const double> means, std::size_t dim) {
  const std::size_t k = means.size() / dim;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (std::equal(means.begin() + i * dim, means.begin() + (i + 1) * dim,
                     means.begin() + j * dim))
        throw GeometryError("category means " + std::to_string(i + 1) + " and " +
                            std::to_string(j + 1) + " coincide");
}

CellStats cell_stats(std::span<const double> means, const Domain& domain,
                     std::uint64_t n_samples, Rng& rng) {
  const std::size_t dim = domain.dim();
  if (means.empty() || means.size() % dim != 0)
    throw GeometryError("means do not match the domain dimension");
  if (n_samples == 0) throw GeometryError("cell statistics need at least one sample");
  require_distinct_means(means, dim);

  const std::size_t k = means.size() / dim;
  CellStats stats;
  stats.dim = dim;
  stats.counts.assign(k, 0);
  stats.centroids.assign(k * dim, 0.0);
  stats.volumes.assign(k, 0.0);

  const auto& lo = domain.lower();
  const auto& hi = domain.upper();
  std::vector<double> p(dim);
  for (std::uint64_t s = 0; s < n_samples; ++s) {
    for (std::size_t d = 0; d < dim; ++d) p[d] = lo[d] + (hi[d] - lo[d]) * rng.uniform();
    const std::size_t j = nearest_mean(p, means, dim);
    ++stats.counts[j];
    for (std::size_t d = 0; d < dim; ++d) stats.centroids[j * dim + d] += p[d];
  }

  const double volume = domain.volume();
  for (std::size_t j = 0; j < k; ++j) {
    stats.volumes[j] = volume * static_cast<double>(stats.counts[j]) /
                       static_cast<double>(n_samples);
    if (stats.counts[j] > 0)
      for (std::size_t d = 0; d < dim; ++d)
        stats.centroids[j * dim + d] /= static_cast<double>(stats.counts[j]);
    else
      for (std::size_t d = 0; d < dim; ++d)
        stats.centroids[j * dim + d] = std::numeric_limits<double>::quiet_NaN();
  }
  stats.samples_used = n_samples;
  return stats;
}

CentroidalDeviation centroidal_deviation(std::span<const double> means,
                                         const Domain& domain, std::uint64_t n_samples,
                                         Rng& rng) {
  const CellStats stats = cell_stats(means, domain, n_samples, rng);
  CentroidalDeviation result;
  for (std::size_t j = 0; j < stats.k(); ++j) {
    double dist;
    if (stats.empty(j)) {
      dist = domain.diameter();
      result.empty_cell = true;
    } else {
      double s = 0.0;
      for (std::size_t d = 0; d < stats.dim; ++d) {
        const double diff = means[j * stats.dim + d] - stats.centroids[j * stats.dim + d];
        s += diff * diff;
      }
      dist = std::sqrt(s);
    }
    result.value = std::max(result.value, dist);
  }
  return result;
}

double boundary_1d(const SystemState& state) {
  if (state.dim != 1 || state.k() != 2 || state.means.size() != 2)
    throw ContractError("boundary_1d needs a one-dimensional state with two categories");
  if (!(state.means[0] < state.means[1]))
    throw ContractError("boundary_1d needs x1 < x2");
  return 0.5 * (state.means[0] + state.means[1]);
}

double min_cell_volume(std::span<const double> means, const Domain& domain,
                       std::uint64_t n_samples, Rng& rng) {
  const CellStats stats = cell_stats(means, domain, n_samples, rng);
  return *std::min_element(stats.volumes.begin(), stats.volumes.end());
}

double min_pairwise_distance(std::span<const double> means, std::size_t dim) noexcept {
  const std::size_t k = means.size() / dim;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      double s = 0.0;
      for (std::size_t d = 0; d < dim; ++d) {
        const double diff = means[i * dim + d] - means[j * dim + d];
        s += diff * diff;
      }
      best = std::min(best, std::sqrt(s));
    }
  return best;
}

}  // namespace exdyn
