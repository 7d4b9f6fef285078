#pragma once

#include <span>

#include "choreo/vec2.hpp"

namespace choreo {

/// U(x) = m² Σ_{i<j} |x_i − x_j|^{−α}. Positive; force on body i is +∇_{x_i}U.
double homogeneous_potential(std::span<const Vec2> positions, double mass, double alpha);

/// Writes ∇_{x_i}U into `gradient` (same length as positions) and returns
/// the smallest pairwise distance.
double homogeneous_potential_gradient(std::span<const Vec2> positions, double mass, double alpha,
                                      std::span<Vec2> gradient);

/// Smallest pairwise distance.
double min_pairwise_distance(std::span<const Vec2> positions);

}  // namespace choreo
