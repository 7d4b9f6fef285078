#pragma once

#include <array>
#include <vector>

#include "choreo/functionals.hpp"
#include "choreo/symmetric_loop.hpp"
#include "choreo/vec2.hpp"

namespace choreo {

/// Certification record of a candidate choreography. Field names double as
/// the JSON keys of certificate.json.
struct OrbitCertificate {
  double rho = 0.0;                  // 2K / (αV)
  double virial_residual = 0.0;      // |2K − αρ_w V| / 2K, ρ_w the Galerkin multiplier
  double newton_residual_sup = 0.0;  // max_j |m ẍ(t_j) − ρ∇U(x(t_j))|
  double rescaled_period = 0.0;      // 2π√ρ
  double closure_error = 0.0;        // |state(period) − state(0)|
  double energy_drift = 0.0;         // max_s |E(s) − E(0)|
  double min_mutual_distance = 0.0;
  bool node_ok = false;
  bool transversal_ok = false;
  bool orthogonal_crossing_ok = false;
};

/// ρ = 2K / (αV). Throws DegenerateLoop if V = 0.
double virial_multiplier(const FunctionalReport& report, double alpha);

/// Least-squares ρ_w with ∇K ≈ −ρ_w ∇V, i.e. the multiplier read off the
/// weak Euler–Lagrange equation m ẍ = ρ∇U projected on the basis.
double galerkin_multiplier(const FunctionalReport& report);

/// Converts the tangential-gradient multiplier μ of the K = 1 formulation
/// (∇(V^q) = μ∇K at a critical point) into ρ: ρ = −qV^{q−1}/μ.
double multiplier_to_rho(double mu, double V, double q);

/// c₁ = pK^{p−1}V^q·m and c₂ = qK^pV^{q−1} from the weak Euler–Lagrange
/// system c₁∫ẋ·η̇ + c₂∫∇U·η = 0; ρ = c₂/c₁·m.
struct EulerLagrangeCoefficients {
  double c1 = 0.0;
  double c2 = 0.0;
};
EulerLagrangeCoefficients euler_lagrange_coefficients(const FunctionalReport& report, const ProblemParams& params);

struct NewtonResidual {
  double sup = 0.0;
  std::vector<double> per_node;  // Euclidean norm over all three bodies
};

/// Residual of m ẍ_i = ρ∇_{x_i}U at the quadrature nodes, with ẍ from the
/// term-by-term second derivative. Throws CollisionDetected.
NewtonResidual newton_residual(const SymmetricLoop& loop, const ProblemParams& params, double rho);

/// Planar N-body phase state.
struct PhaseState {
  std::vector<Vec2> positions;
  std::vector<Vec2> velocities;
};

/// Distance in phase space (Euclidean over all coordinates).
double phase_distance(const PhaseState& a, const PhaseState& b);

/// The loop in the time s = √ρ t, in which m d²x/ds² = ∇U.
struct RescaledOrbit {
  double rho = 1.0;
  double period = 0.0;  // 2π√ρ
  std::vector<double> s;
  std::vector<std::array<Vec2, kBodies>> positions;
  std::vector<std::array<Vec2, kBodies>> velocities;  // d/ds

  PhaseState initial_state() const;
};

/// Samples x_i(s) = γ(s/√ρ + 2πi/3) at `samples` uniform s over one period.
/// Throws ConfigError if rho <= 0 or samples < 1.
RescaledOrbit rescale_time(const SymmetricLoop& loop, double rho, int samples = 600);

/// Residual of m d²x/ds² = ∇U at the quadrature nodes; equals the t-form
/// residual divided by ρ.
NewtonResidual newton_residual_rescaled(const SymmetricLoop& loop, const ProblemParams& params, double rho);

struct NBodySystem {
  double mass = 1.0;
  double alpha = 1.0;
  double collision_floor = 1e-6;
};

/// E = ½Σm|v|² − U, conserved under m ẍ = +∇U with U > 0.
double mechanical_energy(const PhaseState& state, const NBodySystem& system);

struct IntegrationResult {
  PhaseState final_state;
  double closure_error = 0.0;
  double energy_drift = 0.0;
  double min_distance = 0.0;
  std::vector<PhaseState> trajectory;  // every `record_every` steps, if requested
};

/// Classical fixed-step RK4 for m ẍ_i = ∇_{x_i}U over [0, period].
/// Throws CollisionDuringIntegration when bodies come within the floor.
IntegrationResult integrate_newton(const PhaseState& initial, const NBodySystem& system, double period,
                                   int steps = 100000, int record_every = 0);

struct GeometryFlags {
  bool node_ok = false;
  bool transversal_ok = false;
  bool orthogonal_crossing_ok = false;
};

/// Node: |γ(0)|, |γ(π)| <= tol. Transversality: |γ'(0)| >= tol and
/// |γ'(0) × γ'(π)| > tol. Orthogonal crossing: |x(π/2)|, |y'(π/2)| <= tol.
GeometryFlags geometry_checks(const SymmetricLoop& loop, double tol);

struct CertifyOptions {
  int rk4_steps = 100000;
  double geometry_tol = 1e-6;
  int rescale_samples = 600;
};

/// Builds the full certificate for a loop. Propagates CollisionDetected and
/// CollisionDuringIntegration.
OrbitCertificate certify(const SymmetricLoop& loop, const ProblemParams& params,
                         const CertifyOptions& options = {});

}  // namespace choreo
