#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace exdyn {

// Axis-aligned hyper-rectangle E = [lower, upper] with non-empty interior.
class Domain {
public:
  // Throws ParameterError unless lower.size() == upper.size() >= 1 and
  // lower[d] < upper[d] for every coordinate.
  Domain(std::vector<double> lower, std::vector<double> upper);
  // The unit interval [0, 1].
  Domain() : Domain({0.0}, {1.0}) {}

  static Domain unit_interval() { return Domain({0.0}, {1.0}); }
  static Domain square(double side) { return Domain({0.0, 0.0}, {side, side}); }

  std::size_t dim() const noexcept { return lower_.size(); }
  const std::vector<double>& lower() const noexcept { return lower_; }
  const std::vector<double>& upper() const noexcept { return upper_; }

  double volume() const noexcept;
  // Length of the main diagonal.
  double diameter() const noexcept;
  bool contains(std::span<const double> p) const noexcept;
  // Nearest point of E, coordinate-wise.
  void clamp(std::span<double> p) const noexcept;

  // Throws DomainError naming `what` if p is not in E.
  void require_contains(std::span<const double> p, const char* what) const;

  friend bool operator==(const Domain&, const Domain&) = default;

private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

}  // namespace exdyn
