#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "exdyn/domain.hpp"
#include "exdyn/model.hpp"
#include "exdyn/rng.hpp"

namespace exdyn {

inline constexpr std::size_t kDefaultCellSamples = 100'000;

// Monte Carlo estimate of the Voronoi cells S_i of `means` within E.
struct CellStats {
  std::size_t dim = 1;
  std::vector<double> volumes;          // k, counts / samples * |E|
  std::vector<double> centroids;        // k * dim; meaningless for empty cells
  std::vector<std::uint64_t> counts;    // k
  std::uint64_t samples_used = 0;

  std::size_t k() const noexcept { return counts.size(); }
  bool empty(std::size_t j) const noexcept { return counts[j] == 0; }
  std::span<const double> centroid(std::size_t j) const noexcept {
    return {centroids.data() + j * dim, dim};
  }
};

// Throws GeometryError if two means coincide.
void require_distinct_means(std::span<const double> means, std::size_t dim);

// Samples uniform points of E and assigns them with nearest_mean, the same
// rule the dynamics use. Throws GeometryError on duplicate means or
// n_samples == 0.
CellStats cell_stats(std::span<const double> means, const Domain& domain,
                     std::uint64_t n_samples, Rng& rng);

struct CentroidalDeviation {
  double value = 0.0;  // max_i |x_i - centroid(S_i)|
  // Some estimated cell received no samples; its term was taken as diam(E).
  bool empty_cell = false;
};

CentroidalDeviation centroidal_deviation(std::span<const double> means,
                                         const Domain& domain, std::uint64_t n_samples,
                                         Rng& rng);

// Perceptual boundary (x1 + x2) / 2. Requires dim 1, k 2 and x1 < x2;
// throws ContractError otherwise.
double boundary_1d(const SystemState& state);

double min_cell_volume(std::span<const double> means, const Domain& domain,
                       std::uint64_t n_samples, Rng& rng);

// Smallest Euclidean distance between two distinct categories' means.
double min_pairwise_distance(std::span<const double> means, std::size_t dim) noexcept;

}  // namespace exdyn
