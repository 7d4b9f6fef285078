#include "choreo/symmetric_loop.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "choreo/errors.hpp"

namespace choreo {

namespace {

constexpr double kPi = std::numbers::pi;

void require_modes(int modes) {
  if (modes < 1) throw ConfigError("loop needs at least one mode, got " + std::to_string(modes));
}

}  // namespace

namespace detail {

void validate_symmetry_args(int samples, double tol) {
  if (samples < 8) throw ConfigError("symmetry check needs >= 8 samples, got " + std::to_string(samples));
  if (!(tol > 0.0)) throw ConfigError("symmetry check tolerance must be positive");
}

}  // namespace detail

SymmetricLoop::SymmetricLoop(int modes, bool nc1) : nc1_(nc1) {
  require_modes(modes);
  a_.assign(static_cast<std::size_t>(modes), 0.0);
  b_.assign(static_cast<std::size_t>(modes), 0.0);
}

SymmetricLoop::SymmetricLoop(std::vector<double> a, std::vector<double> b, bool nc1)
    : a_(std::move(a)), b_(std::move(b)), nc1_(nc1) {
  require_modes(static_cast<int>(a_.size()));
  if (a_.size() != b_.size()) throw ConfigError("x and y coefficient blocks differ in length");
  if (nc1_ && b_[0] != 0.0) throw ConfigError("nc1 loop must have b_1 = 0");
}

SymmetricLoop SymmetricLoop::seed(int modes, double amplitude) {
  SymmetricLoop loop(modes);
  loop.a_[0] = amplitude;
  loop.b_[0] = amplitude;
  return loop;
}

int SymmetricLoop::flat_wavenumber(std::size_t i) const noexcept {
  return i < a_.size() ? x_wavenumber(i) : y_wavenumber(i - a_.size());
}

double SymmetricLoop::coefficient(int k) const {
  if (k < 1 || k > 2 * modes()) throw ConfigError("wavenumber " + std::to_string(k) + " outside truncation");
  return k % 2 == 0 ? a_[static_cast<std::size_t>(k / 2 - 1)] : b_[static_cast<std::size_t>(k / 2)];
}

void SymmetricLoop::set_coefficient(int k, double value) {
  if (k < 1 || k > 2 * modes()) throw ConfigError("wavenumber " + std::to_string(k) + " outside truncation");
  if (k == 1 && nc1_ && value != 0.0) throw ConfigError("b_1 is pinned to zero under nc1");
  if (k % 2 == 0) {
    a_[static_cast<std::size_t>(k / 2 - 1)] = value;
  } else {
    b_[static_cast<std::size_t>(k / 2)] = value;
  }
}

std::vector<double> SymmetricLoop::flat() const {
  std::vector<double> out;
  out.reserve(dimension());
  out.insert(out.end(), a_.begin(), a_.end());
  out.insert(out.end(), b_.begin(), b_.end());
  return out;
}

void SymmetricLoop::assign_flat(std::span<const double> values) {
  if (values.size() != dimension()) throw ConfigError("flat coefficient vector has wrong length");
  const auto m = a_.size();
  std::copy(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(m), a_.begin());
  std::copy(values.begin() + static_cast<std::ptrdiff_t>(m), values.end(), b_.begin());
  if (nc1_) b_[0] = 0.0;
}

SymmetricLoop SymmetricLoop::scaled(double lambda) const {
  SymmetricLoop out = *this;
  for (auto& v : out.a_) v *= lambda;
  for (auto& v : out.b_) v *= lambda;
  return out;
}

Vec2 SymmetricLoop::evaluate(double t) const noexcept {
  Vec2 p;
  for (std::size_t j = 0; j < a_.size(); ++j) {
    p.x += a_[j] * std::sin(x_wavenumber(j) * t);
    p.y += b_[j] * std::sin(y_wavenumber(j) * t);
  }
  return p;
}

Vec2 SymmetricLoop::derivative(double t) const noexcept {
  Vec2 v;
  for (std::size_t j = 0; j < a_.size(); ++j) {
    const int kx = x_wavenumber(j);
    const int ky = y_wavenumber(j);
    v.x += kx * a_[j] * std::cos(kx * t);
    v.y += ky * b_[j] * std::cos(ky * t);
  }
  return v;
}

Vec2 SymmetricLoop::second_derivative(double t) const noexcept {
  Vec2 acc;
  for (std::size_t j = 0; j < a_.size(); ++j) {
    const double kx = x_wavenumber(j);
    const double ky = y_wavenumber(j);
    acc.x -= kx * kx * a_[j] * std::sin(kx * t);
    acc.y -= ky * ky * b_[j] * std::sin(ky * t);
  }
  return acc;
}

SampledCurve sample(const SymmetricLoop& loop, int nodes) {
  if (nodes < 4 * loop.modes()) {
    throw ConfigError("need at least 4*modes = " + std::to_string(4 * loop.modes()) + " nodes, got " +
                      std::to_string(nodes));
  }
  SampledCurve c;
  c.nodes = nodes;
  c.positions.reserve(static_cast<std::size_t>(nodes));
  c.velocities.reserve(static_cast<std::size_t>(nodes));
  for (int j = 0; j < nodes; ++j) {
    const double t = 2.0 * kPi * j / nodes;
    c.positions.push_back(loop.evaluate(t));
    c.velocities.push_back(loop.derivative(t));
  }
  return c;
}

SymmetryReport check_symmetries(const SymmetricLoop& loop, int samples, double tol) {
  return check_symmetries([&loop](double t) { return loop.evaluate(t); }, samples, tol);
}

ParsevalNorms parseval_norms(const SymmetricLoop& loop) noexcept {
  ParsevalNorms n;
  const auto a = loop.a();
  const auto b = loop.b();
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double kx = SymmetricLoop::x_wavenumber(j);
    const double ky = SymmetricLoop::y_wavenumber(j);
    n.position += a[j] * a[j] + b[j] * b[j];
    n.velocity += kx * kx * a[j] * a[j] + ky * ky * b[j] * b[j];
  }
  n.position *= kPi;
  n.velocity *= kPi;
  return n;
}

PoincareReport poincare_check(const SymmetricLoop& loop) noexcept {
  PoincareReport r;
  const auto a = loop.a();
  const auto b = loop.b();
  double x2 = 0, dx2 = 0, y2 = 0, dy2 = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double kx = SymmetricLoop::x_wavenumber(j);
    const double ky = SymmetricLoop::y_wavenumber(j);
    x2 += a[j] * a[j];
    dx2 += kx * kx * a[j] * a[j];
    y2 += b[j] * b[j];
    dy2 += ky * ky * b[j] * b[j];
  }
  r.x_lhs = kPi * x2;
  r.x_rhs = 0.25 * kPi * dx2;
  r.y_lhs = kPi * y2;
  r.y_rhs = kPi * dy2;
  r.y_rhs_nc1 = kPi * dy2 / 9.0;
  r.lhs = r.x_lhs + r.y_lhs;
  r.rhs = kPi * (dx2 + dy2);
  return r;
}

bool PoincareReport::holds(double rel_slack) const noexcept {
  auto le = [rel_slack](double l, double r) { return l <= r * (1.0 + rel_slack); };
  return le(lhs, rhs) && le(x_lhs, x_rhs) && le(y_lhs, y_rhs);
}

}  // namespace choreo
