#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "choreo/symmetric_loop.hpp"
#include "choreo/vec2.hpp"

namespace choreo {

inline constexpr int kBodies = 3;

/// Physical and discretization parameters shared by every evaluation.
struct ProblemParams {
  double alpha = 1.0;             // potential is homogeneous of degree −alpha, 0 < alpha < 2
  double mass = 1.0;              // common mass of the three bodies
  int quad_nodes = 512;           // uniform trapezoid nodes on [0, 2π)
  double collision_floor = 1e-6;  // smallest admissible mutual distance

  /// Exponents of F = K^p V^q.
  double p() const noexcept { return alpha / (alpha + 2.0); }
  double q() const noexcept { return 2.0 / (alpha + 2.0); }

  /// Throws ConfigError on an out-of-range field.
  void validate() const;
  /// Also checks quad_nodes >= 4·modes.
  void validate_for(const SymmetricLoop& loop) const;
};

/// C_α = ((α+2)/2)·(α/2)^{−α/(α+2)}, so that min_λ Φ_α(λ) = C_α·F.
double envelope_constant(double alpha);

/// λ* = (αV / 2K)^{1/(α+2)}, the minimizer of λ²K + λ^{−α}V.
double optimal_scale(double K, double V, double alpha);

struct PotentialValue {
  double V = 0.0;
  /// V before rounding to double.
  long double V_extended = 0.0L;
  double min_distance = 0.0;
  /// The three pair integrals ∫ m²|x_i − x_j|^{−α}; equal for a choreography.
  std::array<double, 3> pair_integrals{};
};

struct Gradients {
  std::vector<double> grad_K;
  std::vector<double> grad_V;
};

struct FunctionalReport {
  double K = 0.0;
  double V = 0.0;
  double F = 0.0;
  /// F before rounding to double; used to order values closer than an ulp.
  long double F_extended = 0.0L;
  double lambda_star = 0.0;
  double C_alpha = 0.0;
  double min_distance = 0.0;
  std::vector<double> grad_F;
  std::vector<double> grad_K;
  std::vector<double> grad_V;

  /// Φ_α(λ*) = C_α·F.
  double envelope_minimum() const noexcept { return C_alpha * F; }
};

/// Evaluates K, V, F and their coefficient gradients for the choreography
/// x_i(t) = γ(t + 2πi/3), i = 0, 1, 2, built from a SymmetricLoop.
///
/// Basis values at the shifted quadrature phases are tabulated once per
/// (modes, quad_nodes) pair; evaluations are then pure and thread-safe.
/// Quadrature sums run in node order, so results do not depend on how the
/// caller schedules evaluations.
class ChoreographyModel {
 public:
  ChoreographyModel(const ProblemParams& params, int modes);

  const ProblemParams& params() const noexcept { return params_; }
  int modes() const noexcept { return modes_; }

  /// K = (m/2) Σ_i ∫|x_i'|² = (3m/2)·π Σ k²c_k².
  double kinetic(const SymmetricLoop& loop) const;
  /// Trapezoidal V = ∫ m² Σ_{i<j} |x_i − x_j|^{−α}. Throws CollisionDetected.
  PotentialValue potential(const SymmetricLoop& loop) const;
  /// Φ_α(λ) = λ²K + λ^{−α}V.
  double scale_envelope(const SymmetricLoop& loop, double lambda) const;
  Gradients gradients(const SymmetricLoop& loop) const;
  /// All report fields. Throws DegenerateLoop when K = 0.
  FunctionalReport evaluate(const SymmetricLoop& loop) const;

  /// Positions of the three bodies at quadrature node j.
  std::array<Vec2, kBodies> bodies_at_node(const SymmetricLoop& loop, int node) const;

 private:
  void check(const SymmetricLoop& loop) const;
  /// Fills body positions for all nodes: index (i * nodes + j).
  struct LongVec2 {
    long double x;
    long double y;
  };
  long double kinetic_extended(const SymmetricLoop& loop) const;
  void positions(const SymmetricLoop& loop, std::vector<LongVec2>& out) const;
  struct PotentialPass {
    PotentialValue value;
    long double V = 0.0L;
    std::vector<Vec2> force;  // ∇_{x_i}U at (i * nodes + j)
  };
  PotentialPass potential_pass(const SymmetricLoop& loop, bool want_gradient) const;
  Gradients assemble_gradients(const SymmetricLoop& loop, const PotentialPass& pass) const;

  ProblemParams params_;
  int modes_;
  int nodes_;
  // sin(k (t_j + 2πi/3)) for x-wavenumbers and y-wavenumbers, layout
  // ((i * nodes + j) * modes + m).
  std::vector<double> sin_x_;
  std::vector<double> sin_y_;
};

// One-shot wrappers; each builds a model for the loop's mode count.
double kinetic(const SymmetricLoop& loop, const ProblemParams& params);
PotentialValue potential(const SymmetricLoop& loop, const ProblemParams& params);
double scale_envelope(const SymmetricLoop& loop, const ProblemParams& params, double lambda);
FunctionalReport scale_invariant_F(const SymmetricLoop& loop, const ProblemParams& params);
Gradients gradients(const SymmetricLoop& loop, const ProblemParams& params);

/// Positions x_i(t) = γ(t + 2πi/3).
std::array<Vec2, kBodies> choreography_positions(const SymmetricLoop& loop, double t);
std::array<Vec2, kBodies> choreography_velocities(const SymmetricLoop& loop, double t);

}  // namespace choreo
