#include "choreo/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "choreo/errors.hpp"
#include "choreo/nbody.hpp"

namespace choreo {

namespace {

constexpr double kPi = std::numbers::pi;

double inner(const std::vector<double>& u, const std::vector<double>& v) {
  return std::inner_product(u.begin(), u.end(), v.begin(), 0.0);
}

// Packed derivative of the phase state.
void acceleration(const std::vector<Vec2>& positions, const NBodySystem& system, std::vector<Vec2>& out,
                  double& dmin) {
  dmin = homogeneous_potential_gradient(positions, system.mass, system.alpha, out);
  for (auto& a : out) a *= 1.0 / system.mass;
}

}  // namespace

double virial_multiplier(const FunctionalReport& report, double alpha) {
  if (!(report.V > 0.0)) throw DegenerateLoop("virial multiplier needs V > 0");
  return 2.0 * report.K / (alpha * report.V);
}

double galerkin_multiplier(const FunctionalReport& report) {
  const double vv = inner(report.grad_V, report.grad_V);
  if (!(vv > 0.0)) throw DegenerateLoop("potential gradient vanishes");
  return -inner(report.grad_K, report.grad_V) / vv;
}

double multiplier_to_rho(double mu, double V, double q) {
  if (mu == 0.0) throw DegenerateLoop("zero multiplier");
  return -q * std::pow(V, q - 1.0) / mu;
}

EulerLagrangeCoefficients euler_lagrange_coefficients(const FunctionalReport& report, const ProblemParams& params) {
  const double p = params.p();
  const double q = params.q();
  return {p * std::pow(report.K, p - 1.0) * std::pow(report.V, q) * params.mass,
          q * std::pow(report.K, p) * std::pow(report.V, q - 1.0)};
}

NewtonResidual newton_residual(const SymmetricLoop& loop, const ProblemParams& params, double rho) {
  params.validate_for(loop);
  const int nodes = params.quad_nodes;
  NewtonResidual out;
  out.per_node.resize(static_cast<std::size_t>(nodes));
  std::array<Vec2, kBodies> pos{};
  std::array<Vec2, kBodies> grad{};
  for (int j = 0; j < nodes; ++j) {
    const double t = 2.0 * kPi * j / nodes;
    pos = choreography_positions(loop, t);
    const double dmin = homogeneous_potential_gradient(pos, params.mass, params.alpha, grad);
    if (dmin < params.collision_floor) throw CollisionDetected(dmin, params.collision_floor);
    double sq = 0.0;
    for (int i = 0; i < kBodies; ++i) {
      const Vec2 acc = loop.second_derivative(t + 2.0 * kPi * i / kBodies);
      const Vec2 r = params.mass * acc - rho * grad[i];
      sq += dot(r, r);
    }
    out.per_node[j] = std::sqrt(sq);
    out.sup = std::max(out.sup, out.per_node[j]);
  }
  return out;
}

NewtonResidual newton_residual_rescaled(const SymmetricLoop& loop, const ProblemParams& params, double rho) {
  if (!(rho > 0.0)) throw ConfigError("rho must be positive");
  params.validate_for(loop);
  const int nodes = params.quad_nodes;
  const double root = std::sqrt(rho);
  NewtonResidual out;
  out.per_node.resize(static_cast<std::size_t>(nodes));
  std::array<Vec2, kBodies> pos{};
  std::array<Vec2, kBodies> grad{};
  for (int j = 0; j < nodes; ++j) {
    const double s = 2.0 * kPi * root * j / nodes;
    const double t = s / root;
    pos = choreography_positions(loop, t);
    const double dmin = homogeneous_potential_gradient(pos, params.mass, params.alpha, grad);
    if (dmin < params.collision_floor) throw CollisionDetected(dmin, params.collision_floor);
    double sq = 0.0;
    for (int i = 0; i < kBodies; ++i) {
      // d²x/ds² = ẍ / ρ
      const Vec2 acc = loop.second_derivative(t + 2.0 * kPi * i / kBodies) * (1.0 / rho);
      const Vec2 r = params.mass * acc - grad[i];
      sq += dot(r, r);
    }
    out.per_node[j] = std::sqrt(sq);
    out.sup = std::max(out.sup, out.per_node[j]);
  }
  return out;
}

double phase_distance(const PhaseState& a, const PhaseState& b) {
  double sq = 0.0;
  for (std::size_t i = 0; i < a.positions.size(); ++i) {
    const Vec2 dp = a.positions[i] - b.positions[i];
    const Vec2 dv = a.velocities[i] - b.velocities[i];
    sq += dot(dp, dp) + dot(dv, dv);
  }
  return std::sqrt(sq);
}

PhaseState RescaledOrbit::initial_state() const {
  PhaseState st;
  if (positions.empty()) return st;
  st.positions.assign(positions.front().begin(), positions.front().end());
  st.velocities.assign(velocities.front().begin(), velocities.front().end());
  return st;
}

RescaledOrbit rescale_time(const SymmetricLoop& loop, double rho, int samples) {
  if (!(rho > 0.0)) throw ConfigError("rho must be positive");
  if (samples < 1) throw ConfigError("need at least one sample");
  RescaledOrbit orbit;
  orbit.rho = rho;
  const double root = std::sqrt(rho);
  orbit.period = 2.0 * kPi * root;
  orbit.s.reserve(static_cast<std::size_t>(samples));
  orbit.positions.reserve(static_cast<std::size_t>(samples));
  orbit.velocities.reserve(static_cast<std::size_t>(samples));
  for (int j = 0; j < samples; ++j) {
    const double s = orbit.period * j / samples;
    const double t = s / root;
    orbit.s.push_back(s);
    orbit.positions.push_back(choreography_positions(loop, t));
    auto v = choreography_velocities(loop, t);
    for (auto& vi : v) vi *= 1.0 / root;
    orbit.velocities.push_back(v);
  }
  return orbit;
}

double mechanical_energy(const PhaseState& state, const NBodySystem& system) {
  double kinetic = 0.0;
  for (const auto& v : state.velocities) kinetic += 0.5 * system.mass * dot(v, v);
  return kinetic - homogeneous_potential(state.positions, system.mass, system.alpha);
}

IntegrationResult integrate_newton(const PhaseState& initial, const NBodySystem& system, double period, int steps,
                                   int record_every) {
  if (steps < 1) throw ConfigError("integration needs at least one step");
  if (!(period > 0.0)) throw ConfigError("period must be positive");
  if (initial.positions.size() != initial.velocities.size()) throw ConfigError("malformed phase state");

  const std::size_t n = initial.positions.size();
  const double h = period / steps;
  IntegrationResult out;
  out.min_distance = min_pairwise_distance(initial.positions);
  if (out.min_distance < system.collision_floor) throw CollisionDuringIntegration(0.0, out.min_distance);

  const double e0 = mechanical_energy(initial, system);
  PhaseState y = initial;
  if (record_every > 0) out.trajectory.push_back(y);

  std::vector<Vec2> kx1(n), kx2(n), kx3(n), kx4(n), kv1(n), kv2(n), kv3(n), kv4(n), tmp(n);
  double dmin = 0.0;
  for (int step = 0; step < steps; ++step) {
    acceleration(y.positions, system, kv1, dmin);
    kx1 = y.velocities;

    for (std::size_t i = 0; i < n; ++i) tmp[i] = y.positions[i] + (0.5 * h) * kx1[i];
    acceleration(tmp, system, kv2, dmin);
    for (std::size_t i = 0; i < n; ++i) kx2[i] = y.velocities[i] + (0.5 * h) * kv1[i];

    for (std::size_t i = 0; i < n; ++i) tmp[i] = y.positions[i] + (0.5 * h) * kx2[i];
    acceleration(tmp, system, kv3, dmin);
    for (std::size_t i = 0; i < n; ++i) kx3[i] = y.velocities[i] + (0.5 * h) * kv2[i];

    for (std::size_t i = 0; i < n; ++i) tmp[i] = y.positions[i] + h * kx3[i];
    acceleration(tmp, system, kv4, dmin);
    for (std::size_t i = 0; i < n; ++i) kx4[i] = y.velocities[i] + h * kv3[i];

    for (std::size_t i = 0; i < n; ++i) {
      y.positions[i] += (h / 6.0) * (kx1[i] + 2.0 * kx2[i] + 2.0 * kx3[i] + kx4[i]);
      y.velocities[i] += (h / 6.0) * (kv1[i] + 2.0 * kv2[i] + 2.0 * kv3[i] + kv4[i]);
    }

    const double d = min_pairwise_distance(y.positions);
    out.min_distance = std::min(out.min_distance, d);
    if (d < system.collision_floor) throw CollisionDuringIntegration(h * (step + 1), d);
    out.energy_drift = std::max(out.energy_drift, std::abs(mechanical_energy(y, system) - e0));
    if (record_every > 0 && (step + 1) % record_every == 0) out.trajectory.push_back(y);
  }
  out.closure_error = phase_distance(y, initial);
  out.final_state = std::move(y);
  return out;
}

GeometryFlags geometry_checks(const SymmetricLoop& loop, double tol) {
  GeometryFlags g;
  const Vec2 at0 = loop.evaluate(0.0);
  const Vec2 atpi = loop.evaluate(kPi);
  g.node_ok = norm(at0) <= tol && norm(atpi) <= tol;
  const Vec2 v0 = loop.derivative(0.0);
  const Vec2 vpi = loop.derivative(kPi);
  g.transversal_ok = norm(v0) >= tol && std::abs(cross(v0, vpi)) > tol;
  g.orthogonal_crossing_ok =
      std::abs(loop.evaluate(0.5 * kPi).x) <= tol && std::abs(loop.derivative(0.5 * kPi).y) <= tol;
  return g;
}

OrbitCertificate certify(const SymmetricLoop& loop, const ProblemParams& params, const CertifyOptions& options) {
  params.validate_for(loop);
  const ChoreographyModel model(params, loop.modes());
  const auto report = model.evaluate(loop);

  OrbitCertificate cert;
  cert.rho = virial_multiplier(report, params.alpha);
  const double rho_weak = galerkin_multiplier(report);
  cert.virial_residual = std::abs(2.0 * report.K - params.alpha * rho_weak * report.V) / (2.0 * report.K);
  cert.newton_residual_sup = newton_residual(loop, params, cert.rho).sup;

  const auto orbit = rescale_time(loop, cert.rho, options.rescale_samples);
  cert.rescaled_period = orbit.period;
  const NBodySystem system{params.mass, params.alpha, params.collision_floor};
  const auto flight = integrate_newton(orbit.initial_state(), system, orbit.period, options.rk4_steps);
  cert.closure_error = flight.closure_error;
  cert.energy_drift = flight.energy_drift;
  cert.min_mutual_distance = std::min(report.min_distance, flight.min_distance);

  const auto geometry = geometry_checks(loop, options.geometry_tol);
  cert.node_ok = geometry.node_ok;
  cert.transversal_ok = geometry.transversal_ok;
  cert.orthogonal_crossing_ok = geometry.orthogonal_crossing_ok;
  return cert;
}

}  // namespace choreo
