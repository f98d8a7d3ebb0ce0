#include "exdyn/distribution.hpp"

#include <cmath>
#include <string>

#include "exdyn/errors.hpp"

namespace exdyn {

DistributionSpec DistributionSpec::density(Density f, double envelope,
                                           std::size_t max_attempts) {
  if (!f) throw ParameterError("density function is empty");
  if (!(envelope > 0.0) || !std::isfinite(envelope))
    throw ParameterError("density envelope must be positive and finite");
  if (max_attempts == 0) throw ParameterError("max_attempts must be positive");
  DistributionSpec spec;
  spec.density_ = std::move(f);
  spec.envelope_ = envelope;
  spec.max_attempts_ = max_attempts;
  return spec;
}

namespace {

void draw_uniform(const Domain& domain, Rng& rng, std::span<double> out) {
  const auto& lo = domain.lower();
  const auto& hi = domain.upper();
  for (std::size_t d = 0; d < out.size(); ++d) out[d] = lo[d] + (hi[d] - lo[d]) * rng.uniform();
}

}  // namespace

void DistributionSpec::sample(const Domain& domain, Rng& rng, std::span<double> out) const {
  if (out.size() != domain.dim()) throw ParameterError("sample buffer has wrong dimension");
  if (!density_) {
    draw_uniform(domain, rng, out);
    return;
  }
  for (std::size_t attempt = 0; attempt < max_attempts_; ++attempt) {
    draw_uniform(domain, rng, out);
    const double f = density_(out);
    if (!(f > 0.0)) throw SamplingError("density is not strictly positive at a sampled point");
    if (f > envelope_)
      throw SamplingError("density exceeds the declared envelope " + std::to_string(envelope_));
    if (rng.uniform() * envelope_ < f) return;
  }
  throw SamplingError("rejection sampling exceeded " + std::to_string(max_attempts_) +
                      " attempts with envelope " + std::to_string(envelope_));
}

}  // namespace exdyn
