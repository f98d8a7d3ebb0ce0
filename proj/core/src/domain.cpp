#include "exdyn/domain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "exdyn/errors.hpp"

namespace exdyn {

Domain::Domain(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty() || lower_.size() != upper_.size())
    throw ParameterError("domain bounds must be non-empty and of equal dimension");
  for (std::size_t d = 0; d < lower_.size(); ++d) {
    if (!std::isfinite(lower_[d]) || !std::isfinite(upper_[d]) || !(lower_[d] < upper_[d]))
      throw ParameterError("domain needs lower[" + std::to_string(d) + "] < upper[" +
                           std::to_string(d) + "]");
  }
}

double Domain::volume() const noexcept {
  double v = 1.0;
  for (std::size_t d = 0; d < dim(); ++d) v *= upper_[d] - lower_[d];
  return v;
}

double Domain::diameter() const noexcept {
  double s = 0.0;
  for (std::size_t d = 0; d < dim(); ++d) {
    const double len = upper_[d] - lower_[d];
    s += len * len;
  }
  return std::sqrt(s);
}

bool Domain::contains(std::span<const double> p) const noexcept {
  if (p.size() != dim()) return false;
  for (std::size_t d = 0; d < dim(); ++d)
    if (!(p[d] >= lower_[d] && p[d] <= upper_[d])) return false;
  return true;
}

void Domain::clamp(std::span<double> p) const noexcept {
  for (std::size_t d = 0; d < dim() && d < p.size(); ++d)
    p[d] = std::clamp(p[d], lower_[d], upper_[d]);
}

void Domain::require_contains(std::span<const double> p, const char* what) const {
  if (!contains(p)) throw DomainError(std::string(what) + " lies outside the domain");
}

}  // namespace exdyn
