#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "choreo/functionals.hpp"
#include "choreo/symmetric_loop.hpp"

namespace choreo {

enum class SolverStatus { Running, Converged, MaxIters, CollisionAbort, LineSearchFail };

std::string_view to_string(SolverStatus status) noexcept;

/// Inner product used to turn the gradient into a search direction.
/// Euclidean: plain coefficient gradient. Sobolev: H¹-Riesz gradient
/// (coefficient k divided by k²), with the radial direction removed.
enum class DescentMetric { Euclidean, Sobolev };

/// ε_n = eps0 / (n + 1): strictly decreasing to zero.
struct EkelandSchedule {
  double eps0 = 1.0;
  double at(int n) const noexcept { return eps0 / (n + 1); }
};

/// One line of the progress log.
struct IterationRecord {
  int iter = 0;
  double f = 0.0;
  double gnorm = 0.0;
  double step = 0.0;
  double min_distance = 0.0;
};

struct SolverConfig {
  int modes = 24;
  bool nc1 = false;
  int max_iters = 20000;
  double grad_tol = 1e-8;
  EkelandSchedule eps_schedule;
  double step_init = 1.0;
  double backtrack = 0.5;      // in (0, 1)
  double armijo = 1e-4;        // in (0, 1)
  double min_step = 1e-14;     // line search gives up below this
  bool renormalize_K = true;   // minimize V^q on {K = 1} instead of F directly
  DescentMetric metric = DescentMetric::Sobolev;
  double seed_amplitude = 1.0;
  std::optional<std::uint64_t> rng_seed;
  /// Start from this loop instead of the seed (continuation).
  std::optional<SymmetricLoop> warm_start;
  /// Called once per iteration with the current record.
  std::function<void(const IterationRecord&)> observer;

  /// Throws ConfigError on an out-of-range field.
  void validate() const;
};

struct SolverState {
  SymmetricLoop loop{1};
  FunctionalReport report;
  int iter = 0;  // accepted steps
  std::vector<double> f_history;
  std::vector<double> gnorm_history;
  double gnorm = 0.0;
  double multiplier = 0.0;  // μ in ∇f = ∇_M f + μ∇K
  double last_step = 0.0;
  int ekeland_hits = 0;  // iterations n with gnorm <= ε_n
  SolverStatus status = SolverStatus::Running;
};

/// Tangential gradient and the multiplier of the radial part.
struct ProjectedGradient {
  std::vector<double> g;
  double mu = 0.0;
  double norm = 0.0;
};

/// Seed curve amplitude·(sin 2t, sin t), optionally perturbed by a seeded
/// uniform draw of size <= 1e-3·amplitude per coefficient. Under nc1 the
/// first y harmonic is replaced by sin 5t.
SymmetricLoop initial_guess(int modes, double amplitude, std::optional<std::uint64_t> rng_seed = {},
                            bool nc1 = false);

/// Gradient descent with Armijo backtracking over the symmetric coefficient
/// space. Owns a ChoreographyModel for the configured mode count.
class Minimizer {
 public:
  Minimizer(const ProblemParams& params, const SolverConfig& config);

  const ChoreographyModel& model() const noexcept { return model_; }
  const SolverConfig& config() const noexcept { return config_; }

  /// Evaluates the starting loop; status is CollisionAbort if it collides.
  SolverState start(const SymmetricLoop& initial) const;

  /// K = 1 path: g_M = qV^{q−1}∇V − μ∇K with μ chosen so ⟨g_M, ∇K⟩ = 0.
  /// Direct path: ∇F. Throws DegenerateLoop when ∇K = 0.
  ProjectedGradient projected_gradient(const SolverState& state) const;

  /// One Armijo step; updates histories and terminal status.
  void step(SolverState& state) const;

  /// Iterates from the configured start until a terminal status.
  SolverState solve() const;

 private:
  std::vector<double> direction(const SolverState& state, const ProjectedGradient& pg) const;
  SymmetricLoop normalized(const SymmetricLoop& loop) const;
  bool armijo_holds(const FunctionalReport& current, double slope, double s, const FunctionalReport& trial) const;
  bool below_resolution(const FunctionalReport& current, double slope, double s) const;
  bool approximate_wolfe(const FunctionalReport& current, double slope, const FunctionalReport& trial,
                         std::span<const double> d) const;

  ProblemParams params_;
  SolverConfig config_;
  ChoreographyModel model_;
};

ProjectedGradient projected_gradient(const SolverState& state, const ProblemParams& params,
                                     const SolverConfig& config);
void step(SolverState& state, const ProblemParams& params, const SolverConfig& config);
SolverState solve(const ProblemParams& params, const SolverConfig& config);

}  // namespace choreo
