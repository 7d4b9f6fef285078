#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "choreo/vec2.hpp"

namespace choreo {

/// A 2π-periodic planar loop restricted to the figure-eight symmetry class:
///
///   x(t) = Σ a_k sin(kt),  k = 2, 4, …, 2M
///   y(t) = Σ b_k sin(kt),  k = 1, 3, …, 2M−1
///
/// The sine basis enforces x(t+π) = x(t), y(t+π) = −y(t), the reflection
/// x(π/2+t) = −x(π/2−t), y(π/2+t) = y(π/2−t), and γ(0) = γ(π) = 0.
///
/// Coefficients are stored in ascending wavenumber; the flat vector used by
/// the optimizer is the x block followed by the y block. When `nc1()` is set,
/// b_1 is pinned to zero.
class SymmetricLoop {
 public:
  /// Zero loop with `modes` coefficients per component.
  explicit SymmetricLoop(int modes, bool nc1 = false);

  /// Takes ownership of the coefficient blocks; both must have length `modes`.
  SymmetricLoop(std::vector<double> a, std::vector<double> b, bool nc1 = false);

  /// The curve (sin 2t, sin t) scaled by `amplitude`.
  static SymmetricLoop seed(int modes, double amplitude = 1.0);

  int modes() const noexcept { return static_cast<int>(a_.size()); }
  bool nc1() const noexcept { return nc1_; }
  std::size_t dimension() const noexcept { return 2 * a_.size(); }

  std::span<const double> a() const noexcept { return a_; }
  std::span<const double> b() const noexcept { return b_; }

  /// Wavenumber of x-coefficient j (2j+2) and y-coefficient j (2j+1).
  static constexpr int x_wavenumber(std::size_t j) noexcept { return 2 * static_cast<int>(j) + 2; }
  static constexpr int y_wavenumber(std::size_t j) noexcept { return 2 * static_cast<int>(j) + 1; }
  /// Wavenumber of entry `i` of the flat coefficient vector.
  int flat_wavenumber(std::size_t i) const noexcept;

  /// Coefficient for wavenumber k (even k → x block, odd k → y block).
  /// Throws ConfigError if k is outside the truncated range or if k = 1
  /// is written while nc1 is set.
  double coefficient(int k) const;
  void set_coefficient(int k, double value);

  std::vector<double> flat() const;
  /// Replaces all coefficients from a flat vector of length dimension().
  /// Under nc1 the b_1 slot is forced to zero.
  void assign_flat(std::span<const double> values);

  SymmetricLoop scaled(double lambda) const;

  Vec2 evaluate(double t) const noexcept;
  Vec2 derivative(double t) const noexcept;
  Vec2 second_derivative(double t) const noexcept;

  friend bool operator==(const SymmetricLoop&, const SymmetricLoop&) = default;

 private:
  std::vector<double> a_;
  std::vector<double> b_;
  bool nc1_ = false;
};

/// Uniform samples of a loop at t_j = 2πj/nodes.
struct SampledCurve {
  int nodes = 0;
  std::vector<Vec2> positions;
  std::vector<Vec2> velocities;
};

/// Throws ConfigError when nodes < 4·modes.
SampledCurve sample(const SymmetricLoop& loop, int nodes);

/// Per-identity outcome of the symmetry checks, with the worst deviation seen.
struct SymmetryReport {
  bool semi_antiperiodic_x = false;  // x(t+π) = x(t)
  bool semi_antiperiodic_y = false;  // y(t+π) = −y(t)
  bool reflection_x = false;         // x(π/2+t) = −x(π/2−t)
  bool reflection_y = false;         // y(π/2+t) = y(π/2−t)
  double max_deviation = 0.0;

  bool all() const noexcept {
    return semi_antiperiodic_x && semi_antiperiodic_y && reflection_x && reflection_y;
  }
};

namespace detail {
void validate_symmetry_args(int samples, double tol);
}

/// Checks the four identities at `samples` uniform phases on any callable
/// t -> Vec2 (so hand-built curves outside the basis can be probed).
/// Throws ConfigError if samples < 8 or tol <= 0.
template <typename Curve>
SymmetryReport check_symmetries(const Curve& curve, int samples, double tol);

SymmetryReport check_symmetries(const SymmetricLoop& loop, int samples, double tol);

/// ∫₀^{2π}|γ|² and ∫₀^{2π}|γ'|² from the coefficients.
struct ParsevalNorms {
  double position = 0.0;
  double velocity = 0.0;
};
ParsevalNorms parseval_norms(const SymmetricLoop& loop) noexcept;

/// Both sides of the Poincaré-type inequalities valid in the symmetry class:
/// ∫|γ|² ≤ ∫|γ'|², ∫x² ≤ ¼∫x'², ∫y² ≤ ∫y'² (and ≤ (1/9)∫y'² under nc1).
struct PoincareReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double x_lhs = 0.0;
  double x_rhs = 0.0;  // already multiplied by 1/4
  double y_lhs = 0.0;
  double y_rhs = 0.0;  // ∫y'²
  double y_rhs_nc1 = 0.0;  // (1/9)∫y'²

  bool holds(double rel_slack = 1e-14) const noexcept;
};
PoincareReport poincare_check(const SymmetricLoop& loop) noexcept;

// ---------------------------------------------------------------------------

template <typename Curve>
SymmetryReport check_symmetries(const Curve& curve, int samples, double tol) {
  detail::validate_symmetry_args(samples, tol);
  constexpr double kPi = std::numbers::pi;
  SymmetryReport r;
  double dax = 0, day = 0, drx = 0, dry = 0;
  for (int j = 0; j < samples; ++j) {
    const double t = 2.0 * kPi * j / samples;
    const Vec2 p = curve(t);
    const Vec2 shifted = curve(t + kPi);
    const Vec2 plus = curve(0.5 * kPi + t);
    const Vec2 minus = curve(0.5 * kPi - t);
    dax = std::max(dax, std::abs(shifted.x - p.x));
    day = std::max(day, std::abs(shifted.y + p.y));
    drx = std::max(drx, std::abs(plus.x + minus.x));
    dry = std::max(dry, std::abs(plus.y - minus.y));
  }
  r.semi_antiperiodic_x = dax <= tol;
  r.semi_antiperiodic_y = day <= tol;
  r.reflection_x = drx <= tol;
  r.reflection_y = dry <= tol;
  r.max_deviation = std::max({dax, day, drx, dry});
  return r;
}

}  // namespace choreo
