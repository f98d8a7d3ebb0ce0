#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "exdyn/model.hpp"
#include "exdyn/rng.hpp"

namespace exdyn {

// Closed forms for the two-category, uniform, E = [0, 1] system. The state
// vector is Z = (x1, x2, w1, w2).

using Vec4 = std::array<double, 4>;
using Mat4 = std::array<std::array<double, 4>, 4>;

// A step count that may be infinite.
class Horizon {
public:
  static Horizon steps(std::uint64_t n) { return Horizon(n); }
  static Horizon infinite() { return Horizon(std::nullopt); }

  bool is_infinite() const noexcept { return !n_; }
  // Precondition: !is_infinite().
  std::uint64_t value() const { return n_.value(); }

  friend bool operator==(const Horizon&, const Horizon&) = default;

private:
  explicit Horizon(std::optional<std::uint64_t> n) : n_(n) {}
  std::optional<std::uint64_t> n_;
};

struct Linearization {
  Mat4 J{};      // Jacobian of the mean map at Z*
  Mat4 H{};      // covariance of the one-step noise at Z*
  Mat4 Hsqrt{};  // symmetric square root of H
};

struct BoundaryParams {
  double K = 0.0;
  double sigma = 0.0;
};

struct Ar1Params {
  double lambda = 0.0;
  double K = 0.0;
  double sigma = 0.0;
  double W = 0.0;
  Vec4 zstar{};
  Mat4 J{};
  Mat4 H{};
  Mat4 Hsqrt{};

  // Throws ParameterError for lambda <= 0.
  static Ar1Params for_lambda(double lambda);
  // Throws ContractError unless config is k = 2, uniform, E = [0, 1].
  static Ar1Params for_config(const ModelConfig& config);
};

// Z* = (1/4, 3/4, W/2, W/2).
Vec4 fixed_point(double lambda);
Linearization linearization(double lambda);
BoundaryParams boundary_params(double lambda);

// Var[Y^n] for Y^0 = 0: sigma^2 (1 - K^{2n}) / (1 - K^2).
double variance_of_Y(double lambda, Horizon n);
double stationary_variance(double lambda);
// C_r = sigma^2 K^{|r|} / (1 - K^2).
double stationary_autocovariance(double lambda, std::int64_t lag);

// The exact random map Phi(Z, z).
Vec4 random_map(const Vec4& z_state, double z, double lambda) noexcept;

// E[Phi(Z, z)] for z ~ U[0, 1], by composite midpoint with `nodes` panels on
// each side of the boundary (x1 + x2) / 2.
Vec4 expected_map(const Vec4& z_state, double lambda, std::size_t nodes = 10'000);

// Y^0 = 0, Y^{n+1} = K Y^n + sigma eta_n. Returns Y^0..Y^{n_steps}.
std::vector<double> simulate_ar1(double K, double sigma, std::uint64_t n_steps, Rng& rng);
std::vector<double> simulate_ar1(double lambda, std::uint64_t n_steps, Rng& rng);

}  // namespace exdyn
