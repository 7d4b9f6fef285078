#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "choreo/dynamics.hpp"
#include "choreo/errors.hpp"
#include "choreo/functionals.hpp"
#include "choreo/minimizer.hpp"
#include "choreo/symmetric_loop.hpp"

namespace choreo {

/// Upper bounds a certificate must meet before a trajectory is emitted.
struct CertificationBounds {
  double virial_residual = 1e-6;
  double newton_residual_sup = 1e-4;
  double closure_error = 1e-5;
  double energy_drift = 1e-8;
  /// min_mutual_distance must be at least this multiple of collision_floor.
  double min_distance_factor = 100.0;
};

/// Name of the first failed flag or exceeded bound, if any.
std::optional<std::string> first_violation(const OrbitCertificate& cert, const ProblemParams& params,
                                           const CertificationBounds& bounds);

/// Throws CertificationFailed naming the first violation.
void enforce_certificate(const OrbitCertificate& cert, const ProblemParams& params,
                         const CertificationBounds& bounds);

struct SolverSummary {
  SolverStatus status = SolverStatus::Running;
  int iterations = 0;
  double gnorm = 0.0;
  double F = 0.0;
  double multiplier = 0.0;
};

struct ChoreographyTrajectory {
  double alpha = 0.0;
  double mass = 0.0;
  int samples = 0;
  std::vector<double> times;                        // t_j = 2πj/samples
  std::array<std::vector<Vec2>, kBodies> body_paths;  // x_i(t_j) = γ(t_j + 2πi/3)
  std::vector<Vec2> gamma_path;
  OrbitCertificate certificate;
  SymmetricLoop loop{1};
  SolverSummary solver;
  double best_collinear_time = 0.0;  // earliest grid minimizer of the triangle area
  std::vector<std::string> log;      // progress lines, tab-separated
};

struct RunOptions {
  CertificationBounds bounds;
  CertifyOptions certify;
  int samples = 600;
  /// Mirror progress lines to this callback as they are produced.
  std::function<void(const std::string&)> progress;
};

/// Header of the progress log.
inline constexpr const char* kLogHeader = "iter\tf\tgnorm\tstep\tminDist";
std::string format_log_line(const IterationRecord& record);

/// Samples the three bodies and γ at t_j = 2πj/samples.
ChoreographyTrajectory sample_trajectory(const SymmetricLoop& loop, int samples);

/// Grid time minimizing the area of the body triangle.
double best_collinearity_time(const ChoreographyTrajectory& trajectory);

/// Seed (or warm start) → solve → certify → sample. Throws
/// CertificationFailed when the gate rejects the certificate and
/// SolverFailed when a certified loop came from a non-converged run.
ChoreographyTrajectory run_single(const ProblemParams& params, const SolverConfig& config,
                                  const RunOptions& options = {});

/// Certify an existing loop and apply the gate (no solve).
ChoreographyTrajectory certify_loop(const SymmetricLoop& loop, const ProblemParams& params,
                                    const RunOptions& options = {});

struct SweepResult {
  std::vector<double> alphas;
  std::vector<ChoreographyTrajectory> runs;
  /// |c(α_{n+1}) − c(α_n)| between adjacent K = 1 coefficient vectors.
  std::vector<double> adjacent_distances;
  /// Allowed adjacent distance per unit of α.
  double continuity_bound = 0.0;
};

/// Raised at the first α that fails; carries everything completed before it.
class SweepBroken : public Error {
 public:
  SweepBroken(double alpha, const std::string& cause, SweepResult partial);
  double alpha() const noexcept { return alpha_; }
  const SweepResult& partial() const noexcept { return partial_; }

 private:
  double alpha_;
  SweepResult partial_;
};

/// Default Lipschitz bound on the coefficient path, |Δc| <= bound·|Δα|.
inline constexpr double kSweepContinuityBound = 0.5;

/// Continuation over α: each run warm-starts from the previous loop.
/// alphas must be non-empty, strictly monotone and inside (0, 2).
SweepResult run_sweep(const std::vector<double>& alphas, const ProblemParams& params_template,
                      const SolverConfig& config, const RunOptions& options = {},
                      double continuity_bound = kSweepContinuityBound);

struct ProbeRow {
  double epsilon = 0.0;
  double K = 0.0;
  double V = 0.0;
  double action = 0.0;
};

struct ProbeTable {
  double alpha = 0.0;
  std::vector<ProbeRow> rows;
  double expected_exponent = 0.0;  // (2−α)/(2+α)
  double integrand_exponent = 0.0;  // −2α/(2+α)
  double fitted_K = 0.0;
  double fitted_V = 0.0;
  double fitted_action = 0.0;
};

/// Partial kinetic and potential integrals over (0, ε] of a symmetric
/// binary collision arc r(t) = c·t^{2/(2+α)} between two masses m, with the
/// log–log slope of each against ε.
ProbeTable collision_scaling_probe(double alpha, const std::vector<double>& epsilons, double mass = 1.0,
                                   double c = 1.0);

/// Writes loop.json, certificate.json, trajectory.csv, orbit.svg and
/// log.txt into `dir` (created if missing). Each file is written to a
/// temporary name and renamed into place.
void write_artifacts(const std::filesystem::path& dir, const ChoreographyTrajectory& trajectory);

/// trajectory.csv body: header t,x0,y0,x1,y1,x2,y2 and 17 significant digits.
std::string trajectory_csv(const ChoreographyTrajectory& trajectory);
std::string orbit_svg(const ChoreographyTrajectory& trajectory);

}  // namespace choreo
