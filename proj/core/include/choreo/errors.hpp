#pragma once

#include <stdexcept>
#include <string>

namespace choreo {

/// Base of every error raised by the library. `code()` is a stable
/// machine-readable identifier used in the CLI's error JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& detail)
      : std::runtime_error(detail), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// Violated precondition on parameters or configuration.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& detail) : Error("ConfigError", detail) {}
};

/// A pairwise distance dropped below the collision floor while evaluating
/// the potential.
class CollisionDetected : public Error {
 public:
  CollisionDetected(double distance, double floor);
  double distance() const noexcept { return distance_; }

 private:
  double distance_;
};

/// Loop with zero kinetic or potential integral where a positive one is needed.
class DegenerateLoop : public Error {
 public:
  explicit DegenerateLoop(const std::string& detail) : Error("DegenerateLoop", detail) {}
};

/// Bodies came closer than the collision floor during ODE integration.
class CollisionDuringIntegration : public Error {
 public:
  CollisionDuringIntegration(double time, double distance);
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// A certificate flag is false or a residual exceeds its bound.
class CertificationFailed : public Error {
 public:
  CertificationFailed(std::string metric, const std::string& detail)
      : Error("CertificationFailed", detail), metric_(std::move(metric)) {}
  const std::string& metric() const noexcept { return metric_; }

 private:
  std::string metric_;
};

/// The minimizer stopped in a non-converged terminal state.
class SolverFailed : public Error {
 public:
  explicit SolverFailed(const std::string& detail) : Error("SolverFailed", detail) {}
};

}  // namespace choreo
