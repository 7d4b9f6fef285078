#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "support.hpp"

#include "choreo/errors.hpp"
#include "choreo/minimizer.hpp"

using namespace choreo;
using choreo::testing::rel_err;
constexpr double pi = std::numbers::pi;

namespace {

double inner(const std::vector<double>& u, const std::vector<double>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

SolverConfig small_config(int modes = 12) {
  SolverConfig c;
  c.modes = modes;
  return c;
}

}  // namespace

TEST_SUITE("minimizer") {

TEST_CASE("config validation") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  c.backtrack = 1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.armijo = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.grad_tol = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.max_iters = -1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.warm_start = SymmetricLoop(5);
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("Ekeland schedule decreases to zero") {
  const EkelandSchedule s{2.0};
  CHECK(s.at(0) == 2.0);
  for (int n = 0; n < 100; ++n) CHECK(s.at(n + 1) < s.at(n));
  CHECK(s.at(1'000'000) < 1e-5);
}

TEST_CASE("initial guess") {
  const auto seed = initial_guess(12, 1.0);
  CHECK(seed == SymmetricLoop::seed(12));
  CHECK(kinetic(seed, ProblemParams{}) == doctest::Approx(15 * pi / 2));
  CHECK(potential(seed, ProblemParams{}).min_distance > 0.0);

  const auto j1 = initial_guess(12, 1.0, 99);
  const auto j2 = initial_guess(12, 1.0, 99);
  CHECK(j1 == j2);
  CHECK_FALSE(j1 == initial_guess(12, 1.0, 100));
  const auto c = j1.flat();
  const auto s = seed.flat();
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::abs(c[i] - s[i]) <= 1e-3);

  const auto nc1 = initial_guess(12, 1.0, {}, true);
  CHECK(nc1.coefficient(1) == 0.0);
  CHECK(nc1.coefficient(5) == 1.0);
  CHECK_THROWS_AS(initial_guess(12, 0.0), ConfigError);
}

TEST_CASE("projected gradient is tangential") {
  const ProblemParams params;
  const auto config = small_config();
  const Minimizer solver(params, config);
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    auto loop = choreo::testing::random_loop(rng, 12, 1.0, 0.3);
    loop = loop.scaled(1.0 / std::sqrt(kinetic(loop, params)));
    const auto state = solver.start(loop);
    const auto pg = solver.projected_gradient(state);
    const auto& gk = state.report.grad_K;
    CHECK(std::abs(inner(pg.g, gk)) <= 1e-10 * pg.norm * std::sqrt(inner(gk, gk)));

    // Directional derivative of V^q along tangent directions.
    std::normal_distribution<double> n(0.0, 1.0);
    const double q = params.q();
    const auto c = loop.flat();
    for (int d = 0; d < 5; ++d) {
      std::vector<double> eta(c.size());
      for (auto& v : eta) v = n(rng);
      const double radial = inner(eta, gk) / inner(gk, gk);
      for (std::size_t i = 0; i < eta.size(); ++i) eta[i] -= radial * gk[i];
      const double h = 1e-6;
      auto f = [&](double s) {
        std::vector<double> x(c);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += s * eta[i];
        SymmetricLoop l = loop;
        l.assign_flat(x);
        return std::pow(potential(l, params).V, q);
      };
      const double fd = (f(h) - f(-h)) / (2 * h);
      CHECK(rel_err(fd, inner(pg.g, eta)) <= 1e-6);
    }
  }

  auto direct = config;
  direct.renormalize_K = false;
  const Minimizer raw(params, direct);
  const auto loop = choreo::testing::random_loop(rng, 12, 2.0);
  const auto state = raw.start(loop);
  const auto pg = raw.projected_gradient(state);
  CHECK(std::abs(inner(pg.g, loop.flat())) <= 1e-9 * pg.norm * std::sqrt(inner(loop.flat(), loop.flat())));
}

TEST_CASE("single steps") {
  const ProblemParams params;
  auto config = small_config();
  const Minimizer solver(params, config);
  const auto seed = SymmetricLoop::seed(12);
  auto state = solver.start(seed.scaled(1.0 / std::sqrt(kinetic(seed, params))));
  const double f0 = state.report.F;
  solver.step(state);
  REQUIRE(state.status == SolverStatus::Running);
  CHECK(state.iter == 1);
  CHECK(state.report.F < f0);
  CHECK(std::abs(state.report.K - 1.0) <= 1e-12);

  // A converged state stays put.
  auto loose = config;
  loose.grad_tol = 1e3;
  const Minimizer lazy(params, loose);
  auto done = lazy.start(seed);
  lazy.step(done);
  CHECK(done.status == SolverStatus::Converged);
  const auto frozen = done.loop;
  lazy.step(done);
  CHECK(done.loop == frozen);
  CHECK(done.iter == 0);
}

TEST_CASE("iterates stay on the manifold, in the symmetry class and descend") {
  const ProblemParams params;
  auto config = small_config();
  config.max_iters = 400;
  const Minimizer solver(params, config);
  const auto seed = SymmetricLoop::seed(12);
  auto state = solver.start(seed.scaled(1.0 / std::sqrt(kinetic(seed, params))));
  while (state.status == SolverStatus::Running) {
    solver.step(state);
    CHECK(std::abs(kinetic(state.loop, params) - 1.0) <= 1e-12);
    CHECK(state.report.min_distance > params.collision_floor);
    CHECK(check_symmetries(state.loop, 64, 1e-12).all());
  }
  CHECK(state.status == SolverStatus::Converged);
  for (std::size_t i = 1; i < state.f_history.size(); ++i) CHECK(state.f_history[i] <= state.f_history[i - 1]);
  CHECK(state.gnorm <= config.grad_tol);
  CHECK(state.gnorm_history.size() == static_cast<std::size_t>(state.iter) + 1);
  CHECK(state.ekeland_hits > 0);
}

TEST_CASE("solve at alpha = 1 and continuation") {
  const ProblemParams params;
  const auto state = solve(params, small_config());
  REQUIRE(state.status == SolverStatus::Converged);
  CHECK(state.gnorm <= 1e-8);
  CHECK(state.report.min_distance > 100 * params.collision_floor);

  for (double alpha : {0.5, 1.5}) {
    ProblemParams p = params;
    p.alpha = alpha;
    auto c = small_config();
    c.warm_start = state.loop;
    const auto next = solve(p, c);
    CHECK(next.status == SolverStatus::Converged);
    CHECK(next.gnorm <= 1e-8);
  }
}

TEST_CASE("both formulations reach the same critical value") {
  const ProblemParams params;
  const auto on_sphere = solve(params, small_config());
  auto direct_cfg = small_config();
  direct_cfg.renormalize_K = false;
  const auto direct = solve(params, direct_cfg);
  REQUIRE(on_sphere.status == SolverStatus::Converged);
  REQUIRE(direct.status == SolverStatus::Converged);
  CHECK(rel_err(direct.report.F, on_sphere.report.F) < 1e-10);

  auto euclid_cfg = small_config();
  euclid_cfg.metric = DescentMetric::Euclidean;
  const auto euclid = solve(params, euclid_cfg);
  REQUIRE(euclid.status == SolverStatus::Converged);
  CHECK(rel_err(euclid.report.F, on_sphere.report.F) < 1e-10);
}

TEST_CASE("nc1 solve keeps b1 pinned") {
  ProblemParams params;
  auto config = small_config();
  config.nc1 = true;
  config.max_iters = 50;
  const auto state = solve(params, config);
  CHECK(state.loop.coefficient(1) == 0.0);
  CHECK(state.status != SolverStatus::CollisionAbort);
}

TEST_CASE("max_iters = 0 returns the initial guess") {
  auto config = small_config();
  config.max_iters = 0;
  const auto state = solve(ProblemParams{}, config);
  CHECK(state.status == SolverStatus::MaxIters);
  CHECK(state.loop == initial_guess(12, 1.0));
  CHECK(state.iter == 0);
}

TEST_CASE("colliding start aborts") {
  SymmetricLoop loop(12);
  loop.set_coefficient(6, 1.0);
  loop.set_coefficient(3, 1.0);
  auto config = small_config();
  config.warm_start = loop;
  config.renormalize_K = false;
  const auto state = solve(ProblemParams{}, config);
  CHECK(state.status == SolverStatus::CollisionAbort);
}

TEST_CASE("status names") {
  CHECK(to_string(SolverStatus::Converged) == "Converged");
  CHECK(to_string(SolverStatus::LineSearchFail) == "LineSearchFail");
}

}  // TEST_SUITE
