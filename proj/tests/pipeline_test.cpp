#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "support.hpp"

#include "choreo/errors.hpp"
#include "choreo/pipeline.hpp"
#include "choreo/serialization.hpp"

using namespace choreo;
using choreo::testing::rel_err;
constexpr double pi = std::numbers::pi;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("choreo_pipeline_" + name);
  fs::remove_all(dir);
  return dir;
}

void check_trajectory_shape(const ChoreographyTrajectory& tr) {
  REQUIRE(tr.samples == 600);
  CHECK(norm(tr.gamma_path[0]) == 0.0);
  CHECK(norm(tr.gamma_path[300]) < 1e-12);
  for (int i = 0; i < kBodies; ++i) {
    for (int j = 0; j < tr.samples; ++j) {
      CHECK(tr.body_paths[i][j] == tr.gamma_path[(j + 200 * i) % 600]);
    }
  }
  // Congruence against direct evaluation of the phase-shifted loop.
  double worst = 0.0;
  for (int j = 0; j < tr.samples; j += 7) {
    const auto pos = choreography_positions(tr.loop, tr.times[j]);
    for (int i = 0; i < kBodies; ++i) worst = std::max(worst, norm(pos[i] - tr.body_paths[i][j]));
  }
  CHECK(worst <= 1e-12);
  for (int j = 0; j < tr.samples; ++j) {
    CHECK(norm(tr.body_paths[0][j] - tr.body_paths[1][j]) > 0.0);
    CHECK(norm(tr.body_paths[1][j] - tr.body_paths[2][j]) > 0.0);
    CHECK(norm(tr.body_paths[0][j] - tr.body_paths[2][j]) > 0.0);
  }
  CHECK_FALSE(first_violation(tr.certificate, ProblemParams{}, CertificationBounds{}).has_value());
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("certification gate") {
  OrbitCertificate good;
  good.node_ok = good.transversal_ok = good.orthogonal_crossing_ok = true;
  good.min_mutual_distance = 0.2;
  const ProblemParams params;
  const CertificationBounds bounds;
  CHECK_FALSE(first_violation(good, params, bounds).has_value());
  CHECK_NOTHROW(enforce_certificate(good, params, bounds));

  auto bad = good;
  bad.closure_error = 2e-5;
  CHECK(first_violation(bad, params, bounds) == "closure_error");
  bad = good;
  bad.virial_residual = std::nan("");
  CHECK(first_violation(bad, params, bounds) == "virial_residual");
  bad = good;
  bad.transversal_ok = false;
  CHECK(first_violation(bad, params, bounds) == "transversal_ok");
  bad = good;
  bad.min_mutual_distance = 5e-5;
  try {
    enforce_certificate(bad, params, bounds);
    FAIL("expected CertificationFailed");
  } catch (const CertificationFailed& e) {
    CHECK(e.metric() == "min_mutual_distance");
    CHECK(e.code() == "CertificationFailed");
  }
}

TEST_CASE("run_single at alpha = 1") {
  const auto tr = run_single(ProblemParams{}, SolverConfig{});
  check_trajectory_shape(tr);
  CHECK(tr.alpha == 1.0);
  CHECK(tr.solver.status == SolverStatus::Converged);
  CHECK(tr.solver.gnorm <= 1e-8);
  CHECK(tr.best_collinear_time == 0.0);
  CHECK(tr.log.front() == kLogHeader);
  CHECK(tr.log.size() == static_cast<std::size_t>(tr.solver.iterations) + 2);
}

TEST_CASE("run_single at alpha = 3/2") {
  ProblemParams params;
  params.alpha = 1.5;
  const auto tr = run_single(params, SolverConfig{});
  check_trajectory_shape(tr);
  CHECK(tr.alpha == 1.5);
}

TEST_CASE("the unoptimized seed does not certify") {
  SolverConfig config;
  config.max_iters = 0;
  try {
    run_single(ProblemParams{}, config);
    FAIL("expected CertificationFailed");
  } catch (const CertificationFailed& e) {
    CHECK(e.metric() == "virial_residual");
  }
}

TEST_CASE("a certified loop from a stalled run is still a failure") {
  SolverConfig config;
  config.max_iters = 200;
  config.grad_tol = 1e-30;  // unreachable; the run ends on MaxIters or a stalled line search
  CHECK_THROWS_AS(run_single(ProblemParams{}, config), SolverFailed);
}

TEST_CASE("sweep over alpha") {
  const auto sweep = run_sweep({0.5, 0.75, 1.0, 1.25, 1.5}, ProblemParams{}, SolverConfig{});
  REQUIRE(sweep.runs.size() == 5);
  CHECK(sweep.adjacent_distances.size() == 4);
  CHECK(sweep.continuity_bound == kSweepContinuityBound);
  for (std::size_t i = 0; i < sweep.runs.size(); ++i) {
    CHECK(sweep.runs[i].alpha == sweep.alphas[i]);
    CHECK_FALSE(first_violation(sweep.runs[i].certificate, ProblemParams{}, CertificationBounds{}).has_value());
  }
  for (double d : sweep.adjacent_distances) CHECK(d <= kSweepContinuityBound * 0.25);

  const auto down = run_sweep({1.5, 1.0}, ProblemParams{}, SolverConfig{});
  CHECK(down.runs.size() == 2);
}

TEST_CASE("single-element sweep is a single run") {
  ProblemParams params;
  params.alpha = 1.25;
  const auto sweep = run_sweep({1.25}, ProblemParams{}, SolverConfig{});
  const auto single = run_single(params, SolverConfig{});
  REQUIRE(sweep.runs.size() == 1);
  CHECK(sweep.runs[0].loop == single.loop);
  CHECK(sweep.adjacent_distances.empty());
}

TEST_CASE("sweep preconditions") {
  CHECK_THROWS_AS(run_sweep({0.5, 1.0, 2.0}, ProblemParams{}, SolverConfig{}), ConfigError);
  CHECK_THROWS_AS(run_sweep({0.0, 1.0}, ProblemParams{}, SolverConfig{}), ConfigError);
  CHECK_THROWS_AS(run_sweep({1.0, 0.5, 0.75}, ProblemParams{}, SolverConfig{}), ConfigError);
  CHECK_THROWS_AS(run_sweep({1.0, 1.0}, ProblemParams{}, SolverConfig{}), ConfigError);
  CHECK_THROWS_AS(run_sweep({}, ProblemParams{}, SolverConfig{}), ConfigError);
}

TEST_CASE("broken sweep keeps the completed runs") {
  try {
    run_sweep({1.0, 1.25, 1.5}, ProblemParams{}, SolverConfig{}, {}, 1e-6);
    FAIL("expected SweepBroken");
  } catch (const SweepBroken& e) {
    CHECK(e.alpha() == 1.25);
    CHECK(e.code() == "SweepBroken");
    REQUIRE(e.partial().runs.size() == 1);
    CHECK(e.partial().alphas == std::vector<double>{1.0});
  }
}

TEST_CASE("collision-arc scaling probe") {
  const std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  for (double alpha : {0.5, 1.0, 1.5}) {
    const auto t = collision_scaling_probe(alpha, eps);
    CHECK(t.expected_exponent == doctest::Approx((2 - alpha) / (2 + alpha)));
    CHECK(std::abs(t.fitted_V - t.expected_exponent) <= 0.02 * t.expected_exponent);
    CHECK(std::abs(t.fitted_K - t.expected_exponent) <= 0.02 * t.expected_exponent);
    CHECK(std::abs(t.fitted_action - t.expected_exponent) <= 0.02 * t.expected_exponent);
    REQUIRE(t.rows.size() == eps.size());
    for (const auto& row : t.rows) {
      CHECK(std::isfinite(row.action));
      CHECK(row.action > 0.0);
    }
    // Closed forms of the two partial integrals for c = m = 1.
    const double b = 2 / (2 + alpha);
    const double e = t.expected_exponent;
    CHECK(rel_err(t.rows[0].K, 0.25 * b * b * std::pow(0.1, e) / e) < 1e-10);
    CHECK(rel_err(t.rows[0].V, std::pow(0.1, e) / e) < 1e-10);
  }
  CHECK(collision_scaling_probe(1.0, eps).integrand_exponent == doctest::Approx(-2.0 / 3.0));
  const auto near_two = collision_scaling_probe(1.999, eps);
  CHECK(near_two.expected_exponent < 3e-4);
  CHECK(std::abs(near_two.fitted_V - near_two.expected_exponent) <= 0.02 * near_two.expected_exponent);

  CHECK_THROWS_AS(collision_scaling_probe(2.0, eps), ConfigError);
  CHECK_THROWS_AS(collision_scaling_probe(1.0, {1e-3, 1e-2}), ConfigError);
  CHECK_THROWS_AS(collision_scaling_probe(1.0, {1e-3}), ConfigError);
}

TEST_CASE("artifacts") {
  const auto tr = run_single(ProblemParams{}, SolverConfig{});
  const auto dir = scratch_dir("artifacts");
  write_artifacts(dir, tr);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    CHECK(entry.path().extension() != ".tmp");
    ++files;
  }
  CHECK(files == 5);

  CHECK(loop_from_json(slurp(dir / "loop.json")) == tr.loop);
  const auto cert = certificate_from_json(slurp(dir / "certificate.json"));
  CHECK(cert.closure_error == tr.certificate.closure_error);
  CHECK(cert.node_ok);

  std::istringstream csv(slurp(dir / "trajectory.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "t,x0,y0,x1,y1,x2,y2");
  int rows = 0;
  while (std::getline(csv, line)) {
    std::istringstream fields(line);
    std::string field;
    std::vector<double> v;
    while (std::getline(fields, field, ',')) v.push_back(std::stod(field));
    REQUIRE(v.size() == 7);
    CHECK(v[0] == tr.times[rows]);
    CHECK(v[3] == tr.body_paths[1][rows].x);
    CHECK(v[6] == tr.body_paths[2][rows].y);
    ++rows;
  }
  CHECK(rows == 600);

  const auto svg = slurp(dir / "orbit.svg");
  CHECK(svg.find("<polyline") != std::string::npos);
  std::size_t circles = 0;
  for (auto pos = svg.find("<circle"); pos != std::string::npos; pos = svg.find("<circle", pos + 1)) ++circles;
  CHECK(circles == 3);

  const auto log = slurp(dir / "log.txt");
  CHECK(log.rfind("iter\tf\tgnorm\tstep\tminDist\n", 0) == 0);

  // Rewriting over an existing bundle replaces it cleanly.
  write_artifacts(dir, tr);
  CHECK(slurp(dir / "loop.json") == loop_to_json(tr.loop));
  fs::remove_all(dir);
}

TEST_CASE("collinearity time picks the earliest exact instant") {
  const auto tr = sample_trajectory(SymmetricLoop::seed(4, 0.5), 600);
  CHECK(tr.best_collinear_time == 0.0);
  CHECK_THROWS_AS(sample_trajectory(SymmetricLoop::seed(4), 2), ConfigError);
}

}  // TEST_SUITE
