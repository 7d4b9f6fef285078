#include "choreo/minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <utility>
#include <random>
#include <string>

#include "choreo/errors.hpp"

namespace choreo {

namespace {

constexpr double kApproxArmijo = 0.1;
constexpr double kCurvature = 0.9;
// Extended-precision ulps of F below which value differences are noise.
constexpr long double kNoiseUlps = 256.0L;

double dot(std::span<const double> u, std::span<const double> v) {
  return std::inner_product(u.begin(), u.end(), v.begin(), 0.0);
}

double norm2(std::span<const double> u) { return std::sqrt(dot(u, u)); }

void mask_pinned(std::vector<double>& g, const SymmetricLoop& loop) {
  if (loop.nc1()) g[static_cast<std::size_t>(loop.modes())] = 0.0;
}

}  // namespace

bool Minimizer::armijo_holds(const FunctionalReport& current, double slope, double s,
                             const FunctionalReport& trial) const {
  const long double predicted = static_cast<long double>(config_.armijo) * s * slope;
  return trial.F_extended <= current.F_extended + predicted;
}

bool Minimizer::below_resolution(const FunctionalReport& current, double slope, double s) const {
  const long double noise = kNoiseUlps * std::numeric_limits<long double>::epsilon() * std::abs(current.F_extended);
  return static_cast<long double>(s) * -slope <= noise;
}

bool Minimizer::approximate_wolfe(const FunctionalReport& current, double slope, const FunctionalReport& trial,
                                  std::span<const double> d) const {
  // Sufficient decrease read off the directional derivatives (exact for a
  // quadratic line function) plus a curvature bound; the value itself must
  // not increase in the reported precision.
  const double trial_slope = dot(trial.grad_F, d);
  return trial.F <= current.F && trial_slope <= (1.0 - 2.0 * kApproxArmijo) * -slope &&
         trial_slope >= kCurvature * slope;
}

std::string_view to_string(SolverStatus status) noexcept {
  switch (status) {
    case SolverStatus::Running: return "Running";
    case SolverStatus::Converged: return "Converged";
    case SolverStatus::MaxIters: return "MaxIters";
    case SolverStatus::CollisionAbort: return "CollisionAbort";
    case SolverStatus::LineSearchFail: return "LineSearchFail";
  }
  return "Unknown";
}

void SolverConfig::validate() const {
  if (modes < 1) throw ConfigError("modes must be >= 1");
  if (max_iters < 0) throw ConfigError("max_iters must be >= 0");
  if (!(grad_tol > 0.0)) throw ConfigError("grad_tol must be positive");
  if (!(eps_schedule.eps0 > 0.0)) throw ConfigError("Ekeland schedule must start positive");
  if (!(step_init > 0.0)) throw ConfigError("step_init must be positive");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw ConfigError("backtracking factor must lie in (0, 1)");
  if (!(armijo > 0.0 && armijo < 1.0)) throw ConfigError("Armijo constant must lie in (0, 1)");
  if (!(min_step > 0.0)) throw ConfigError("min_step must be positive");
  if (!(seed_amplitude > 0.0)) throw ConfigError("seed_amplitude must be positive");
  if (warm_start && warm_start->modes() != modes) {
    throw ConfigError("warm start has " + std::to_string(warm_start->modes()) + " modes, expected " +
                      std::to_string(modes));
  }
}

SymmetricLoop initial_guess(int modes, double amplitude, std::optional<std::uint64_t> rng_seed, bool nc1) {
  if (!(amplitude > 0.0)) throw ConfigError("seed amplitude must be positive");
  SymmetricLoop loop(modes, nc1);
  loop.set_coefficient(2, amplitude);
  if (nc1) {
    if (modes < 3) throw ConfigError("nc1 seed needs modes >= 3");
    loop.set_coefficient(5, amplitude);
  } else {
    loop.set_coefficient(1, amplitude);
  }
  if (rng_seed) {
    std::mt19937_64 rng(*rng_seed);
    std::uniform_real_distribution<double> jitter(-1e-3 * amplitude, 1e-3 * amplitude);
    auto c = loop.flat();
    for (auto& v : c) v += jitter(rng);
    loop.assign_flat(c);
  }
  return loop;
}

Minimizer::Minimizer(const ProblemParams& params, const SolverConfig& config)
    : params_(params), config_(config), model_((params.validate(), config.validate(), params), config.modes) {}

SymmetricLoop Minimizer::normalized(const SymmetricLoop& loop) const {
  return loop.scaled(1.0 / std::sqrt(model_.kinetic(loop)));
}

SolverState Minimizer::start(const SymmetricLoop& initial) const {
  SolverState state;
  state.loop = initial;
  try {
    state.report = model_.evaluate(initial);
  } catch (const CollisionDetected&) {
    state.status = SolverStatus::CollisionAbort;
    return state;
  }
  state.f_history.push_back(state.report.F);
  return state;
}

ProjectedGradient Minimizer::projected_gradient(const SolverState& state) const {
  const auto& r = state.report;
  std::vector<double> gk = r.grad_K;
  mask_pinned(gk, state.loop);
  const double gk2 = dot(gk, gk);
  if (!(gk2 > 0.0)) throw DegenerateLoop("kinetic gradient vanishes");

  ProjectedGradient pg;
  if (config_.renormalize_K) {
    const double q = params_.q();
    const double scale = q * std::pow(r.V, q - 1.0);
    pg.g.resize(r.grad_V.size());
    for (std::size_t i = 0; i < pg.g.size(); ++i) pg.g[i] = scale * r.grad_V[i];
    mask_pinned(pg.g, state.loop);
    pg.mu = dot(pg.g, gk) / gk2;
    for (std::size_t i = 0; i < pg.g.size(); ++i) pg.g[i] -= pg.mu * gk[i];
  } else {
    pg.g = r.grad_F;
    mask_pinned(pg.g, state.loop);
    pg.mu = dot(pg.g, gk) / gk2;
  }
  pg.norm = norm2(pg.g);
  return pg;
}

std::vector<double> Minimizer::direction(const SolverState& state, const ProjectedGradient& pg) const {
  const auto& loop = state.loop;
  if (config_.metric == DescentMetric::Euclidean) {
    // On K = 1 the tangential gradient is a descent direction for F; off it
    // ∇F itself is tangential to the scaling orbit.
    std::vector<double> d(config_.renormalize_K ? pg.g : state.report.grad_F);
    mask_pinned(d, loop);
    for (auto& v : d) v = -v;
    return d;
  }
  std::vector<double> gf = state.report.grad_F;
  mask_pinned(gf, loop);
  const auto c = loop.flat();
  std::vector<double> d(c.size());
  double c_w = 0.0;
  double c_dc = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double k = loop.flat_wavenumber(i);
    d[i] = gf[i] / (k * k);
    c_w += c[i] * gf[i];
    c_dc += k * k * c[i] * c[i];
  }
  const double radial = c_dc > 0.0 ? c_w / c_dc : 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) d[i] = -(d[i] - radial * c[i]);
  mask_pinned(d, loop);
  return d;
}

void Minimizer::step(SolverState& state) const {
  if (state.status != SolverStatus::Running) return;

  const auto pg = projected_gradient(state);
  state.gnorm = pg.norm;
  state.multiplier = pg.mu;
  const int n = static_cast<int>(state.gnorm_history.size());
  state.gnorm_history.push_back(pg.norm);
  if (pg.norm <= config_.eps_schedule.at(n)) ++state.ekeland_hits;

  if (config_.observer) {
    config_.observer({state.iter, state.report.F, pg.norm, state.last_step, state.report.min_distance});
  }
  if (pg.norm <= config_.grad_tol) {
    state.status = SolverStatus::Converged;
    return;
  }
  if (state.iter >= config_.max_iters) {
    state.status = SolverStatus::MaxIters;
    return;
  }

  const auto d = direction(state, pg);
  const double slope = dot(state.report.grad_F, d);
  const auto c = state.loop.flat();

  double s = state.last_step > 0.0 ? std::min(2.0 * state.last_step, 1e3 * config_.step_init)
                                   : config_.step_init;
  bool last_failure_collision = false;
  auto evaluate_at = [&](double step) -> std::optional<std::pair<SymmetricLoop, FunctionalReport>> {
    std::vector<double> trial(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) trial[i] = c[i] + step * d[i];
    SymmetricLoop candidate = state.loop;
    candidate.assign_flat(trial);
    try {
      if (config_.renormalize_K) candidate = normalized(candidate);
      auto report = model_.evaluate(candidate);
      last_failure_collision = false;
      return std::make_pair(std::move(candidate), std::move(report));
    } catch (const CollisionDetected&) {
      last_failure_collision = true;
    } catch (const DegenerateLoop&) {
      last_failure_collision = false;
    }
    return std::nullopt;
  };
  auto accept = [&](std::pair<SymmetricLoop, FunctionalReport>&& trial, double step) {
    state.loop = std::move(trial.first);
    state.report = std::move(trial.second);
    state.f_history.push_back(state.report.F);
    state.last_step = step;
    ++state.iter;
  };

  while (s >= config_.min_step) {
    auto trial = evaluate_at(s);
    if (trial) {
      if (armijo_holds(state.report, slope, s, trial->second)) {
        accept(std::move(*trial), s);
        return;
      }
      if (below_resolution(state.report, slope, s)) {
        // Secant on the directional derivative toward the line minimum.
        const double trial_slope = dot(trial->second.grad_F, d);
        if (trial_slope > slope) {
          const double s_secant = std::clamp(s * slope / (slope - trial_slope), 0.1 * s, 10.0 * s);
          if (auto secant = evaluate_at(s_secant);
              secant && approximate_wolfe(state.report, slope, secant->second, d)) {
            accept(std::move(*secant), s_secant);
            return;
          }
        }
        if (approximate_wolfe(state.report, slope, trial->second, d)) {
          accept(std::move(*trial), s);
          return;
        }
      }
    }
    s *= config_.backtrack;
  }
  state.status = last_failure_collision ? SolverStatus::CollisionAbort : SolverStatus::LineSearchFail;
}

SolverState Minimizer::solve() const {
  SymmetricLoop initial = config_.warm_start
                              ? *config_.warm_start
                              : initial_guess(config_.modes, config_.seed_amplitude, config_.rng_seed, config_.nc1);
  if (config_.renormalize_K && config_.max_iters > 0) initial = normalized(initial);
  SolverState state = start(initial);
  while (state.status == SolverStatus::Running) step(state);
  return state;
}

ProjectedGradient projected_gradient(const SolverState& state, const ProblemParams& params,
                                     const SolverConfig& config) {
  SolverConfig c = config;
  c.modes = state.loop.modes();
  c.warm_start.reset();
  return Minimizer(params, c).projected_gradient(state);
}

void step(SolverState& state, const ProblemParams& params, const SolverConfig& config) {
  SolverConfig c = config;
  c.modes = state.loop.modes();
  c.warm_start.reset();
  Minimizer(params, c).step(state);
}

SolverState solve(const ProblemParams& params, const SolverConfig& config) {
  return Minimizer(params, config).solve();
}

}  // namespace choreo
