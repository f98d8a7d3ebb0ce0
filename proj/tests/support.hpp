#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "exdyn/model.hpp"

namespace exdyn::testing {

inline ModelConfig two_category(double lambda, double w1, double w2,
                                std::vector<double> means = {0.25, 0.75},
                                std::uint64_t seed = 1) {
  ModelConfig c;
  c.k = 2;
  c.lambda = lambda;
  c.init_means = std::move(means);
  c.init_weights = {w1, w2};
  c.seed = seed;
  return c;
}

// Symmetric start at Z* for lambda > 0.
inline ModelConfig at_fixed_point(double lambda, std::uint64_t seed = 1) {
  const double w = 0.5 * limit_weight(lambda);
  return two_category(lambda, w, w, {0.25, 0.75}, seed);
}

// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

inline bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace exdyn::testing
