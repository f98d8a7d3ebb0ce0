#include "exdyn/ar1.hpp"

#include <algorithm>
#include <cmath>

#include "exdyn/errors.hpp"

namespace exdyn {

namespace {

void require_positive(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw ParameterError("lambda must be finite and > 0");
}

// e = e^{-lambda} and 1 - e computed without cancellation.
struct Decay {
  double e;
  double one_minus_e;
};

Decay decay_of(double lambda) { return {std::exp(-lambda), -std::expm1(-lambda)}; }

}  // namespace

Vec4 fixed_point(double lambda) {
  require_positive(lambda);
  const double w = limit_weight(lambda);
  return {0.25, 0.75, 0.5 * w, 0.5 * w};
}

Linearization linearization(double lambda) {
  require_positive(lambda);
  const auto [e, ome] = decay_of(lambda);
  const double two_minus_e = 1.0 + ome;

  Linearization lin;
  Mat4& J = lin.J;
  J[0][0] = J[1][1] = (4.0 + ome) / (4.0 * two_minus_e);
  J[0][1] = J[1][0] = ome / (4.0 * two_minus_e);
  J[2][0] = J[2][1] = 0.5;
  J[3][0] = J[3][1] = -0.5;
  J[2][2] = J[3][3] = e;

  Mat4& H = lin.H;
  H[0][0] = H[1][1] = ome * ome / (24.0 * two_minus_e * two_minus_e);
  H[2][2] = H[3][3] = 0.25;
  H[2][3] = H[3][2] = -0.25;

  const double scale = 1.0 / (2.0 * std::sqrt(2.0));
  Mat4& R = lin.Hsqrt;
  R[0][0] = R[1][1] = scale * ome / (std::sqrt(3.0) * two_minus_e);
  R[2][2] = R[3][3] = scale;
  R[2][3] = R[3][2] = -scale;
  return lin;
}

BoundaryParams boundary_params(double lambda) {
  require_positive(lambda);
  const auto [e, ome] = decay_of(lambda);
  const double two_minus_e = 1.0 + ome;
  return {(2.0 + ome) / (2.0 * two_minus_e), ome / (4.0 * std::sqrt(3.0) * two_minus_e)};
}

Ar1Params Ar1Params::for_lambda(double lambda) {
  const BoundaryParams bp = boundary_params(lambda);
  const Linearization lin = linearization(lambda);
  Ar1Params p;
  p.lambda = lambda;
  p.K = bp.K;
  p.sigma = bp.sigma;
  p.W = limit_weight(lambda);
  p.zstar = fixed_point(lambda);
  p.J = lin.J;
  p.H = lin.H;
  p.Hsqrt = lin.Hsqrt;
  return p;
}

Ar1Params Ar1Params::for_config(const ModelConfig& config) {
  if (config.k != 2 || config.dim() != 1 || !config.dist.is_uniform() ||
      config.domain != Domain::unit_interval())
    throw ContractError("AR(1) parameters exist only for k = 2, uniform on [0, 1]");
  return for_lambda(config.lambda);
}

double variance_of_Y(double lambda, Horizon n) {
  const BoundaryParams bp = boundary_params(lambda);
  const double s2 = bp.sigma * bp.sigma;
  const double k2 = bp.K * bp.K;
  if (n.is_infinite()) return s2 / (1.0 - k2);
  return s2 * (1.0 - std::pow(k2, static_cast<double>(n.value()))) / (1.0 - k2);
}

double stationary_variance(double lambda) { return variance_of_Y(lambda, Horizon::infinite()); }

double stationary_autocovariance(double lambda, std::int64_t lag) {
  const BoundaryParams bp = boundary_params(lambda);
  const double r = static_cast<double>(lag < 0 ? -lag : lag);
  return bp.sigma * bp.sigma * std::pow(bp.K, r) / (1.0 - bp.K * bp.K);
}

Vec4 random_map(const Vec4& s, double z, double lambda) noexcept {
  const double e = std::exp(-lambda);
  const double w1 = s[2] * e;
  const double w2 = s[3] * e;
  if (z <= 0.5 * (s[0] + s[1])) return {(s[0] * w1 + z) / (w1 + 1.0), s[1], w1 + 1.0, w2};
  return {s[0], (s[1] * w2 + z) / (w2 + 1.0), w1, w2 + 1.0};
}

Vec4 expected_map(const Vec4& s, double lambda, std::size_t nodes) {
  if (nodes == 0) throw ParameterError("quadrature needs at least one node");
  const double b = std::clamp(0.5 * (s[0] + s[1]), 0.0, 1.0);
  Vec4 acc{};
  auto integrate = [&](double a, double c) {
    if (!(c > a)) return;
    const double h = (c - a) / static_cast<double>(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
      const Vec4 v = random_map(s, a + (static_cast<double>(i) + 0.5) * h, lambda);
      for (std::size_t d = 0; d < 4; ++d) acc[d] += h * v[d];
    }
  };
  integrate(0.0, b);
  integrate(b, 1.0);
  return acc;
}

std::vector<double> simulate_ar1(double K, double sigma, std::uint64_t n_steps, Rng& rng) {
  std::vector<double> y(n_steps + 1, 0.0);
  for (std::uint64_t n = 0; n < n_steps; ++n) y[n + 1] = K * y[n] + sigma * rng.normal();
  return y;
}

std::vector<double> simulate_ar1(double lambda, std::uint64_t n_steps, Rng& rng) {
  const BoundaryParams bp = boundary_params(lambda);
  return simulate_ar1(bp.K, bp.sigma, n_steps, rng);
}

}  // namespace exdyn
