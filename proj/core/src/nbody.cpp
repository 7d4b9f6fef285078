#include "choreo/nbody.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace choreo {

double homogeneous_potential(std::span<const Vec2> positions, double mass, double alpha) {
  double u = 0.0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      u += std::pow(norm(positions[i] - positions[j]), -alpha);
    }
  }
  return mass * mass * u;
}

double homogeneous_potential_gradient(std::span<const Vec2> positions, double mass, double alpha,
                                      std::span<Vec2> gradient) {
  for (auto& g : gradient) g = Vec2{};
  double dmin = std::numeric_limits<double>::infinity();
  const double m2 = mass * mass;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      const Vec2 r = positions[i] - positions[j];
      const double d2 = dot(r, r);
      const double d = std::sqrt(d2);
      dmin = std::min(dmin, d);
      // ∇_{x_i} |r|^{-α} = −α |r|^{-α-2} r
      const Vec2 g = (-alpha * m2 * std::pow(d, -alpha) / d2) * r;
      gradient[i] += g;
      gradient[j] -= g;
    }
  }
  return dmin;
}

double min_pairwise_distance(std::span<const Vec2> positions) {
  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      dmin = std::min(dmin, norm(positions[i] - positions[j]));
    }
  }
  return dmin;
}

}  // namespace choreo
