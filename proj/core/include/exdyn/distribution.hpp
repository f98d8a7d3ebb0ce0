#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "exdyn/domain.hpp"
#include "exdyn/rng.hpp"

namespace exdyn {

// The law P of incoming exemplars on E.
//
// Uniform draws use per-coordinate inverse transform. Density draws use
// rejection against a declared envelope: propose x ~ U(E), accept with
// probability f(x) / envelope. The density need not be normalised but must be
// strictly positive on E and bounded by the envelope.
class DistributionSpec {
public:
  using Density = std::function<double(std::span<const double>)>;

  static DistributionSpec uniform() { return DistributionSpec{}; }
  static DistributionSpec density(Density f, double envelope,
                                  std::size_t max_attempts = 1'000'000);

  bool is_uniform() const noexcept { return !density_; }
  double envelope() const noexcept { return envelope_; }
  std::size_t max_attempts() const noexcept { return max_attempts_; }

  // Writes one draw into `out` (size domain.dim()).
  void sample(const Domain& domain, Rng& rng, std::span<double> out) const;

private:
  Density density_;
  double envelope_ = 1.0;
  std::size_t max_attempts_ = 1'000'000;
};

}  // namespace exdyn
