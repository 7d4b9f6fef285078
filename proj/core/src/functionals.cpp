#include "choreo/functionals.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "choreo/errors.hpp"
#include "choreo/nbody.hpp"

namespace choreo {

namespace {

constexpr double kPi = std::numbers::pi;

double phase_shift(int body) { return 2.0 * kPi * body / kBodies; }

}  // namespace

void ProblemParams::validate() const {
  if (!(alpha > 0.0 && alpha < 2.0)) {
    throw ConfigError("alpha must lie in (0, 2), got " + std::to_string(alpha));
  }
  if (!(mass > 0.0)) throw ConfigError("mass must be positive");
  if (quad_nodes < 1) throw ConfigError("quad_nodes must be positive");
  if (!(collision_floor > 0.0)) throw ConfigError("collision_floor must be positive");
}

void ProblemParams::validate_for(const SymmetricLoop& loop) const {
  validate();
  if (quad_nodes < 4 * loop.modes()) {
    throw ConfigError("quad_nodes = " + std::to_string(quad_nodes) + " is below 4*modes = " +
                      std::to_string(4 * loop.modes()));
  }
}

double envelope_constant(double alpha) {
  return 0.5 * (alpha + 2.0) * std::pow(0.5 * alpha, -alpha / (alpha + 2.0));
}

double optimal_scale(double K, double V, double alpha) {
  return std::pow(alpha * V / (2.0 * K), 1.0 / (alpha + 2.0));
}

ChoreographyModel::ChoreographyModel(const ProblemParams& params, int modes)
    : params_(params), modes_(modes), nodes_(params.quad_nodes) {
  params_.validate();
  if (modes < 1) throw ConfigError("model needs at least one mode");
  if (nodes_ < 4 * modes) {
    throw ConfigError("quad_nodes = " + std::to_string(nodes_) + " is below 4*modes = " +
                      std::to_string(4 * modes));
  }
  const auto size = static_cast<std::size_t>(kBodies) * nodes_ * modes_;
  sin_x_.resize(size);
  sin_y_.resize(size);
  for (int i = 0; i < kBodies; ++i) {
    for (int j = 0; j < nodes_; ++j) {
      const double t = 2.0 * kPi * j / nodes_ + phase_shift(i);
      const std::size_t row = (static_cast<std::size_t>(i) * nodes_ + j) * modes_;
      for (int m = 0; m < modes_; ++m) {
        sin_x_[row + m] = std::sin(SymmetricLoop::x_wavenumber(m) * t);
        sin_y_[row + m] = std::sin(SymmetricLoop::y_wavenumber(m) * t);
      }
    }
  }
}

void ChoreographyModel::check(const SymmetricLoop& loop) const {
  if (loop.modes() != modes_) {
    throw ConfigError("loop has " + std::to_string(loop.modes()) + " modes, model expects " +
                      std::to_string(modes_));
  }
}

long double ChoreographyModel::kinetic_extended(const SymmetricLoop& loop) const {
  check(loop);
  long double sum = 0.0L;
  const auto a = loop.a();
  const auto b = loop.b();
  for (int m = 0; m < modes_; ++m) {
    const long double kx = SymmetricLoop::x_wavenumber(m);
    const long double ky = SymmetricLoop::y_wavenumber(m);
    sum += kx * kx * a[m] * a[m] + ky * ky * b[m] * b[m];
  }
  return 1.5L * params_.mass * std::numbers::pi_v<long double> * sum;
}

double ChoreographyModel::kinetic(const SymmetricLoop& loop) const {
  return static_cast<double>(kinetic_extended(loop));
}

void ChoreographyModel::positions(const SymmetricLoop& loop, std::vector<LongVec2>& out) const {
  const auto a = loop.a();
  const auto b = loop.b();
  out.resize(static_cast<std::size_t>(kBodies) * nodes_);
  for (std::size_t r = 0; r < out.size(); ++r) {
    const double* sx = &sin_x_[r * modes_];
    const double* sy = &sin_y_[r * modes_];
    long double x = 0.0L;
    long double y = 0.0L;
    for (int m = 0; m < modes_; ++m) {
      x += static_cast<long double>(a[m]) * sx[m];
      y += static_cast<long double>(b[m]) * sy[m];
    }
    out[r] = {x, y};
  }
}

std::array<Vec2, kBodies> ChoreographyModel::bodies_at_node(const SymmetricLoop& loop, int node) const {
  check(loop);
  std::array<Vec2, kBodies> out{};
  for (int i = 0; i < kBodies; ++i) {
    const std::size_t row = (static_cast<std::size_t>(i) * nodes_ + node) * modes_;
    for (int m = 0; m < modes_; ++m) {
      out[i].x += loop.a()[m] * sin_x_[row + m];
      out[i].y += loop.b()[m] * sin_y_[row + m];
    }
  }
  return out;
}

ChoreographyModel::PotentialPass ChoreographyModel::potential_pass(const SymmetricLoop& loop,
                                                                   bool want_gradient) const {
  check(loop);
  std::vector<LongVec2> pos;
  positions(loop, pos);

  PotentialPass pass;
  if (want_gradient) pass.force.assign(pos.size(), Vec2{});

  const long double alpha = params_.alpha;
  const long double m2 = static_cast<long double>(params_.mass) * params_.mass;
  const long double weight = 2.0L * std::numbers::pi_v<long double> / nodes_;
  constexpr std::array<std::array<int, 2>, 3> kPairs{{{0, 1}, {0, 2}, {1, 2}}};

  long double dmin = std::numeric_limits<long double>::infinity();
  std::array<long double, 3> pair_sum{};
  for (int j = 0; j < nodes_; ++j) {
    for (std::size_t p = 0; p < kPairs.size(); ++p) {
      const std::size_t ri = static_cast<std::size_t>(kPairs[p][0]) * nodes_ + j;
      const std::size_t rj = static_cast<std::size_t>(kPairs[p][1]) * nodes_ + j;
      const long double rx = pos[ri].x - pos[rj].x;
      const long double ry = pos[ri].y - pos[rj].y;
      const long double d2 = rx * rx + ry * ry;
      const long double d = std::sqrt(d2);
      dmin = std::min(dmin, d);
      if (d < params_.collision_floor) {
        throw CollisionDetected(static_cast<double>(d), params_.collision_floor);
      }
      const long double u = std::pow(d, -alpha);
      pair_sum[p] += u;
      if (want_gradient) {
        // ∇_{x_i} |r|^{-α} = −α |r|^{-α-2} r
        const auto c = static_cast<double>(-alpha * m2 * u / d2);
        const Vec2 g{c * static_cast<double>(rx), c * static_cast<double>(ry)};
        pass.force[ri] += g;
        pass.force[rj] -= g;
      }
    }
  }
  long double total = 0.0L;
  for (std::size_t p = 0; p < kPairs.size(); ++p) {
    pass.value.pair_integrals[p] = static_cast<double>(m2 * weight * pair_sum[p]);
    total += pair_sum[p];
  }
  pass.V = m2 * weight * total;
  pass.value.V = static_cast<double>(pass.V);
  pass.value.V_extended = pass.V;
  pass.value.min_distance = static_cast<double>(dmin);
  return pass;
}

PotentialValue ChoreographyModel::potential(const SymmetricLoop& loop) const {
  return potential_pass(loop, false).value;
}

double ChoreographyModel::scale_envelope(const SymmetricLoop& loop, double lambda) const {
  if (!(lambda > 0.0)) throw ConfigError("scale must be positive");
  const double K = kinetic(loop);
  const double V = potential(loop).V;
  return lambda * lambda * K + std::pow(lambda, -params_.alpha) * V;
}

Gradients ChoreographyModel::gradients(const SymmetricLoop& loop) const {
  return assemble_gradients(loop, potential_pass(loop, true));
}

Gradients ChoreographyModel::assemble_gradients(const SymmetricLoop& loop, const PotentialPass& pass) const {
  Gradients g;
  const double weight = 2.0 * kPi / nodes_;
  const double km = 3.0 * params_.mass * kPi;
  const auto a = loop.a();
  const auto b = loop.b();
  g.grad_K.resize(loop.dimension());
  g.grad_V.assign(loop.dimension(), 0.0);
  for (int m = 0; m < modes_; ++m) {
    const double kx = SymmetricLoop::x_wavenumber(m);
    const double ky = SymmetricLoop::y_wavenumber(m);
    g.grad_K[m] = km * kx * kx * a[m];
    g.grad_K[modes_ + m] = km * ky * ky * b[m];
  }
  double* gx = g.grad_V.data();
  double* gy = g.grad_V.data() + modes_;
  for (std::size_t r = 0; r < pass.force.size(); ++r) {
    const Vec2 f = pass.force[r];
    const double* sx = &sin_x_[r * modes_];
    const double* sy = &sin_y_[r * modes_];
    for (int m = 0; m < modes_; ++m) {
      gx[m] += f.x * sx[m];
      gy[m] += f.y * sy[m];
    }
  }
  for (auto& v : g.grad_V) v *= weight;
  return g;
}

FunctionalReport ChoreographyModel::evaluate(const SymmetricLoop& loop) const {
  FunctionalReport r;
  const long double K = kinetic_extended(loop);
  if (!(K > 0.0L)) throw DegenerateLoop("kinetic integral vanishes (constant loop)");
  const auto pass = potential_pass(loop, true);
  auto grads = assemble_gradients(loop, pass);
  if (!(pass.V > 0.0L)) throw DegenerateLoop("potential integral vanishes");
  const double p = params_.p();
  const double q = params_.q();
  r.K = static_cast<double>(K);
  r.V = pass.value.V;
  r.min_distance = pass.value.min_distance;
  // F carries extended precision until the final rounding; rounding is
  // monotone, so descent below double resolution is not masked by noise.
  r.F_extended = std::pow(K, static_cast<long double>(p)) * std::pow(pass.V, static_cast<long double>(q));
  r.F = static_cast<double>(r.F_extended);
  r.C_alpha = envelope_constant(params_.alpha);
  r.lambda_star = optimal_scale(r.K, r.V, params_.alpha);
  r.grad_F.resize(loop.dimension());
  for (std::size_t i = 0; i < r.grad_F.size(); ++i) {
    r.grad_F[i] = r.F * (p * grads.grad_K[i] / r.K + q * grads.grad_V[i] / r.V);
  }
  r.grad_K = std::move(grads.grad_K);
  r.grad_V = std::move(grads.grad_V);
  return r;
}

double kinetic(const SymmetricLoop& loop, const ProblemParams& params) {
  return ChoreographyModel(params, loop.modes()).kinetic(loop);
}

PotentialValue potential(const SymmetricLoop& loop, const ProblemParams& params) {
  return ChoreographyModel(params, loop.modes()).potential(loop);
}

double scale_envelope(const SymmetricLoop& loop, const ProblemParams& params, double lambda) {
  return ChoreographyModel(params, loop.modes()).scale_envelope(loop, lambda);
}

FunctionalReport scale_invariant_F(const SymmetricLoop& loop, const ProblemParams& params) {
  return ChoreographyModel(params, loop.modes()).evaluate(loop);
}

Gradients gradients(const SymmetricLoop& loop, const ProblemParams& params) {
  return ChoreographyModel(params, loop.modes()).gradients(loop);
}

std::array<Vec2, kBodies> choreography_positions(const SymmetricLoop& loop, double t) {
  std::array<Vec2, kBodies> out{};
  for (int i = 0; i < kBodies; ++i) out[i] = loop.evaluate(t + phase_shift(i));
  return out;
}

std::array<Vec2, kBodies> choreography_velocities(const SymmetricLoop& loop, double t) {
  std::array<Vec2, kBodies> out{};
  for (int i = 0; i < kBodies; ++i) out[i] = loop.derivative(t + phase_shift(i));
  return out;
}

}  // namespace choreo
