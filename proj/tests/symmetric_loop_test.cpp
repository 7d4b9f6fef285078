#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "support.hpp"

#include "choreo/errors.hpp"
#include "choreo/symmetric_loop.hpp"

using namespace choreo;
using choreo::testing::rel_err;
constexpr double pi = std::numbers::pi;

TEST_SUITE("symmetric_loop") {

TEST_CASE("seed evaluation") {
  const auto seed = SymmetricLoop::seed(12);
  Vec2 p = seed.evaluate(pi / 2);
  CHECK(std::abs(p.x) < 1e-15);
  CHECK(p.y == doctest::Approx(1.0));
  p = seed.evaluate(pi / 4);
  CHECK(p.x == doctest::Approx(1.0));
  CHECK(p.y == doctest::Approx(std::sqrt(2.0) / 2));
}

TEST_CASE("every loop passes through the origin at t = 0 and t = pi") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto loop = choreo::testing::wild_loop(rng, 9);
    const Vec2 a = loop.evaluate(0.0);
    CHECK(a.x == 0.0);
    CHECK(a.y == 0.0);
    const Vec2 b = loop.evaluate(pi);
    CHECK(norm(b) < 1e-13);
  }
}

TEST_CASE("derivative") {
  const auto seed = SymmetricLoop::seed(4);
  Vec2 v = seed.derivative(0.0);
  CHECK(v.x == doctest::Approx(2.0));
  CHECK(v.y == doctest::Approx(1.0));
  v = seed.derivative(pi / 2);
  CHECK(v.x == doctest::Approx(-2.0));
  CHECK(std::abs(v.y) < 1e-15);
  const SymmetricLoop zero(4);
  CHECK(norm(zero.derivative(1.234)) == 0.0);
  CHECK(norm(zero.second_derivative(0.3)) == 0.0);
}

TEST_CASE("second derivative against differences of the first") {
  std::mt19937_64 rng(11);
  const auto loop = choreo::testing::random_loop(rng, 8, 1.0, 0.5);
  const double h = 1e-5;
  for (double t : {0.1, 1.0, 2.5, 4.0}) {
    const Vec2 fd = (loop.derivative(t + h) - loop.derivative(t - h)) * (0.5 / h);
    const Vec2 acc = loop.second_derivative(t);
    CHECK(norm(fd - acc) < 1e-6 * std::max(1.0, norm(acc)));
  }
}

TEST_CASE("coefficient access and the flat layout") {
  SymmetricLoop loop(3);
  loop.set_coefficient(4, 2.0);
  loop.set_coefficient(5, -1.0);
  CHECK(loop.coefficient(4) == 2.0);
  CHECK(loop.a()[1] == 2.0);
  CHECK(loop.b()[2] == -1.0);
  const auto c = loop.flat();
  REQUIRE(c.size() == 6);
  CHECK(c[1] == 2.0);
  CHECK(c[5] == -1.0);
  CHECK(loop.flat_wavenumber(0) == 2);
  CHECK(loop.flat_wavenumber(2) == 6);
  CHECK(loop.flat_wavenumber(3) == 1);
  CHECK(loop.flat_wavenumber(5) == 5);
  CHECK_THROWS_AS(loop.coefficient(7), ConfigError);
  CHECK_THROWS_AS(loop.set_coefficient(0, 1.0), ConfigError);
  CHECK_THROWS_AS(SymmetricLoop(0), ConfigError);
  CHECK_THROWS_AS(SymmetricLoop({1.0, 2.0}, {1.0}), ConfigError);
}

TEST_CASE("nc1 pins the first y harmonic") {
  SymmetricLoop loop(4, true);
  CHECK_THROWS_AS(loop.set_coefficient(1, 1.0), ConfigError);
  std::vector<double> c(loop.dimension(), 1.0);
  loop.assign_flat(c);
  CHECK(loop.coefficient(1) == 0.0);
  CHECK(loop.coefficient(3) == 1.0);
}

TEST_CASE("symmetries of the basis") {
  const auto seed = SymmetricLoop::seed(12);
  CHECK(check_symmetries(seed, 64, 1e-12).all());
  CHECK(check_symmetries(SymmetricLoop(5), 64, 1e-12).all());

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto loop = choreo::testing::wild_loop(rng, 12);
    CHECK(check_symmetries(loop, 256, 1e-12).all());
  }

  auto broken = [&](double t) { return seed.evaluate(t) + Vec2{0.1 * std::cos(t), 0.0}; };
  const auto r = check_symmetries(broken, 64, 1e-12);
  CHECK_FALSE(r.semi_antiperiodic_x);
  CHECK(r.semi_antiperiodic_y);
  CHECK_FALSE(r.all());

  CHECK_THROWS_AS(check_symmetries(seed, 4, 1e-12), ConfigError);
  CHECK_THROWS_AS(check_symmetries(seed, 64, 0.0), ConfigError);
}

TEST_CASE("Parseval norms") {
  auto n = parseval_norms(SymmetricLoop::seed(12));
  CHECK(n.position == doctest::Approx(2 * pi));
  CHECK(n.velocity == doctest::Approx(5 * pi));
  n = parseval_norms(SymmetricLoop(6));
  CHECK(n.position == 0.0);
  CHECK(n.velocity == 0.0);
  SymmetricLoop b3(4);
  b3.set_coefficient(3, 2.0);
  n = parseval_norms(b3);
  CHECK(n.position == doctest::Approx(4 * pi));
  CHECK(n.velocity == doctest::Approx(36 * pi));
}

TEST_CASE("Parseval agrees with trapezoidal quadrature") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto loop = choreo::testing::wild_loop(rng, 10);
    const auto curve = sample(loop, 64);
    double pos = 0.0, vel = 0.0;
    for (int j = 0; j < curve.nodes; ++j) {
      pos += dot(curve.positions[j], curve.positions[j]);
      vel += dot(curve.velocities[j], curve.velocities[j]);
    }
    pos *= 2 * pi / curve.nodes;
    vel *= 2 * pi / curve.nodes;
    const auto n = parseval_norms(loop);
    CHECK(rel_err(pos, n.position) < 1e-10);
    CHECK(rel_err(vel, n.velocity) < 1e-10);
  }
  CHECK_THROWS_AS(sample(SymmetricLoop(10), 39), ConfigError);
}

TEST_CASE("Poincare inequalities and their saturation") {
  const auto seed = poincare_check(SymmetricLoop::seed(12));
  CHECK(seed.lhs == doctest::Approx(2 * pi));
  CHECK(seed.rhs == doctest::Approx(5 * pi));
  CHECK(seed.x_lhs == doctest::Approx(pi));
  CHECK(seed.x_rhs == doctest::Approx(pi));
  CHECK(seed.y_lhs == doctest::Approx(pi));
  CHECK(seed.y_rhs == doctest::Approx(pi));
  CHECK(seed.holds());

  SymmetricLoop a4(4);
  a4.set_coefficient(4, 1.0);
  const auto r = poincare_check(a4);
  CHECK(r.x_lhs == doctest::Approx(pi));
  CHECK(r.x_rhs == doctest::Approx(4 * pi));

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const bool nc1 = trial % 2 == 1;
    const auto loop = choreo::testing::wild_loop(rng, 1 + trial % 16, nc1);
    const auto p = poincare_check(loop);
    CHECK(p.lhs <= p.rhs);
    CHECK(p.x_lhs <= p.x_rhs * (1 + 1e-14));
    CHECK(p.y_lhs <= p.y_rhs * (1 + 1e-14));
    if (nc1) CHECK(p.y_lhs <= p.y_rhs_nc1 * (1 + 1e-14));
    CHECK(p.holds());
  }
}

}  // TEST_SUITE
