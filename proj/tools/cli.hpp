#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "choreo/pipeline.hpp"

namespace choreo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Bad command line or config file. Always maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
  int exit_code() const noexcept { return kExitUsage; }
};

enum class Subcommand { Solve, Sweep, Certify, Probe };

struct CliConfig {
  Subcommand subcommand = Subcommand::Solve;
  std::vector<double> alphas{1.0};  // one entry except for sweep
  double mass = 1.0;
  int modes = 24;
  int quad_nodes = 512;
  double collision_floor = 1e-6;
  double grad_tol = 1e-8;
  int max_iters = 20000;
  double seed_amplitude = 1.0;
  bool nc1 = false;
  bool euclidean = false;
  std::optional<std::uint64_t> rng_seed;
  std::string output_dir;
  int verbosity = 0;
  std::string loop_path;  // certify
  CertificationBounds bounds;
  int rk4_steps = 100000;
  double geometry_tol = 1e-6;
  int samples = 600;
  double continuity_bound = kSweepContinuityBound;
  std::vector<double> epsilons{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};  // probe
  /// Set when --help was requested; holds the text to print.
  std::optional<std::string> help;

  ProblemParams problem(double alpha) const;
  SolverConfig solver() const;
  RunOptions run_options() const;
};

/// Maps argv (without the program name) to a validated config.
/// Throws UsageError on unknown flags, malformed values or out-of-range
/// parameters.
CliConfig parse_args(const std::vector<std::string>& args);
CliConfig parse_args(int argc, const char* const* argv);

/// Runs the configured command. Errors from the library become exit code 1
/// with {"error": code, "detail": message} on `err`.
int run(const CliConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run, with usage errors reported on `err`.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace choreo::cli
