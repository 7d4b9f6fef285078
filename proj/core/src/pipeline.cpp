#include "choreo/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <system_error>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "choreo/serialization.hpp"

namespace choreo {

namespace {

constexpr double kPi = std::numbers::pi;

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string exceeded(const char* name, double value, double bound) {
  return std::string(name) + " = " + sci(value) + " exceeds " + sci(bound);
}

double triangle_area(const Vec2& a, const Vec2& b, const Vec2& c) { return 0.5 * cross(b - a, c - a); }

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

void write_atomic(const std::filesystem::path& target, const std::string& content) {
  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("IOError", "cannot open " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("IOError", "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) throw Error("IOError", "cannot rename into " + target.string() + ": " + ec.message());
}

std::vector<double> unit_kinetic_coefficients(const SymmetricLoop& loop, double mass) {
  ProblemParams p;
  p.mass = mass;
  const double K = kinetic(loop, p);
  auto c = loop.flat();
  const double s = 1.0 / std::sqrt(K);
  for (auto& v : c) v *= s;
  return c;
}

}  // namespace

std::optional<std::string> first_violation(const OrbitCertificate& cert, const ProblemParams& params,
                                           const CertificationBounds& bounds) {
  if (!cert.node_ok) return "node_ok";
  if (!cert.transversal_ok) return "transversal_ok";
  if (!cert.orthogonal_crossing_ok) return "orthogonal_crossing_ok";
  // NaN compares false, so every test is phrased as "within bound".
  if (!(cert.virial_residual <= bounds.virial_residual)) return "virial_residual";
  if (!(cert.newton_residual_sup <= bounds.newton_residual_sup)) return "newton_residual_sup";
  if (!(cert.closure_error <= bounds.closure_error)) return "closure_error";
  if (!(cert.energy_drift <= bounds.energy_drift)) return "energy_drift";
  if (!(cert.min_mutual_distance >= bounds.min_distance_factor * params.collision_floor)) {
    return "min_mutual_distance";
  }
  return std::nullopt;
}

void enforce_certificate(const OrbitCertificate& cert, const ProblemParams& params,
                         const CertificationBounds& bounds) {
  const auto bad = first_violation(cert, params, bounds);
  if (!bad) return;
  std::string detail;
  if (*bad == "virial_residual") {
    detail = exceeded("virial_residual", cert.virial_residual, bounds.virial_residual);
  } else if (*bad == "newton_residual_sup") {
    detail = exceeded("newton_residual_sup", cert.newton_residual_sup, bounds.newton_residual_sup);
  } else if (*bad == "closure_error") {
    detail = exceeded("closure_error", cert.closure_error, bounds.closure_error);
  } else if (*bad == "energy_drift") {
    detail = exceeded("energy_drift", cert.energy_drift, bounds.energy_drift);
  } else if (*bad == "min_mutual_distance") {
    detail = "min_mutual_distance = " + sci(cert.min_mutual_distance) + " below " +
             sci(bounds.min_distance_factor * params.collision_floor);
  } else {
    detail = *bad + " is false";
  }
  throw CertificationFailed(*bad, detail);
}

std::string format_log_line(const IterationRecord& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d\t%.17g\t%.6e\t%.6e\t%.6e", r.iter, r.f, r.gnorm, r.step, r.min_distance);
  return buf;
}

ChoreographyTrajectory sample_trajectory(const SymmetricLoop& loop, int samples) {
  if (samples < 3) throw ConfigError("need at least three samples");
  ChoreographyTrajectory tr;
  tr.samples = samples;
  tr.loop = loop;
  tr.times.resize(static_cast<std::size_t>(samples));
  tr.gamma_path.resize(static_cast<std::size_t>(samples));
  for (auto& path : tr.body_paths) path.resize(static_cast<std::size_t>(samples));
  for (int j = 0; j < samples; ++j) {
    tr.times[j] = 2.0 * kPi * j / samples;
    tr.gamma_path[j] = loop.evaluate(tr.times[j]);
  }
  for (int j = 0; j < samples; ++j) {
    if (samples % kBodies == 0) {
      // The phase shift lands on grid points: reuse γ samples exactly.
      for (int i = 0; i < kBodies; ++i) tr.body_paths[i][j] = tr.gamma_path[(j + i * samples / kBodies) % samples];
    } else {
      const auto pos = choreography_positions(loop, tr.times[j]);
      for (int i = 0; i < kBodies; ++i) tr.body_paths[i][j] = pos[i];
    }
  }
  tr.best_collinear_time = best_collinearity_time(tr);
  return tr;
}

double best_collinearity_time(const ChoreographyTrajectory& tr) {
  std::vector<double> area(tr.times.size());
  double largest = 0.0;
  for (std::size_t j = 0; j < area.size(); ++j) {
    area[j] = std::abs(triangle_area(tr.body_paths[0][j], tr.body_paths[1][j], tr.body_paths[2][j]));
    largest = std::max(largest, area[j]);
  }
  if (area.empty()) return 0.0;
  // Symmetric loops are collinear at several exact instants; take the
  // earliest one rather than whichever wins by round-off.
  const double smallest = *std::min_element(area.begin(), area.end());
  const double slack = 1e-12 * largest;
  for (std::size_t j = 0; j < area.size(); ++j) {
    if (area[j] <= smallest + slack) return tr.times[j];
  }
  return 0.0;
}

ChoreographyTrajectory certify_loop(const SymmetricLoop& loop, const ProblemParams& params,
                                    const RunOptions& options) {
  params.validate_for(loop);
  OrbitCertificate cert;
  try {
    cert = certify(loop, params, options.certify);
  } catch (const CollisionDetected& e) {
    throw CertificationFailed("min_mutual_distance", e.what());
  } catch (const CollisionDuringIntegration& e) {
    throw CertificationFailed("min_mutual_distance", e.what());
  } catch (const DegenerateLoop& e) {
    throw CertificationFailed("virial_residual", e.what());
  }
  enforce_certificate(cert, params, options.bounds);
  auto tr = sample_trajectory(loop, options.samples);
  tr.alpha = params.alpha;
  tr.mass = params.mass;
  tr.certificate = cert;
  return tr;
}

ChoreographyTrajectory run_single(const ProblemParams& params, const SolverConfig& config,
                                  const RunOptions& options) {
  params.validate();
  config.validate();
  std::vector<std::string> log{kLogHeader};
  SolverConfig cfg = config;
  cfg.observer = [&](const IterationRecord& r) {
    log.push_back(format_log_line(r));
    if (options.progress) options.progress(log.back());
    if (config.observer) config.observer(r);
  };
  const auto state = solve(params, cfg);

  auto tr = certify_loop(state.loop, params, options);
  if (state.status != SolverStatus::Converged) {
    throw SolverFailed("solver stopped with status " + std::string(to_string(state.status)) + " at gnorm " +
                       sci(state.gnorm));
  }
  tr.solver = {state.status, state.iter, state.gnorm, state.report.F, state.multiplier};
  tr.log = std::move(log);
  return tr;
}

SweepBroken::SweepBroken(double alpha, const std::string& cause, SweepResult partial)
    : Error("SweepBroken", "sweep broken at alpha = " + sci(alpha) + ": " + cause),
      alpha_(alpha),
      partial_(std::move(partial)) {}

SweepResult run_sweep(const std::vector<double>& alphas, const ProblemParams& params_template,
                      const SolverConfig& config, const RunOptions& options, double continuity_bound) {
  if (alphas.empty()) throw ConfigError("sweep needs at least one alpha");
  for (double a : alphas) {
    if (!(a > 0.0 && a < 2.0)) throw ConfigError("sweep alpha " + sci(a) + " outside (0, 2)");
  }
  if (alphas.size() > 1) {
    const bool up = alphas[1] > alphas[0];
    for (std::size_t i = 1; i < alphas.size(); ++i) {
      if (up ? !(alphas[i] > alphas[i - 1]) : !(alphas[i] < alphas[i - 1])) {
        throw ConfigError("sweep alphas must be strictly monotone");
      }
    }
  }
  if (!(continuity_bound > 0.0)) throw ConfigError("continuity bound must be positive");

  SweepResult result;
  result.continuity_bound = continuity_bound;
  SolverConfig cfg = config;
  for (double alpha : alphas) {
    ProblemParams params = params_template;
    params.alpha = alpha;
    ChoreographyTrajectory tr;
    try {
      tr = run_single(params, cfg, options);
    } catch (const Error& e) {
      throw SweepBroken(alpha, e.code() + ": " + e.what(), std::move(result));
    }
    if (!result.runs.empty()) {
      const auto prev = unit_kinetic_coefficients(result.runs.back().loop, params.mass);
      const auto next = unit_kinetic_coefficients(tr.loop, params.mass);
      double sq = 0.0;
      for (std::size_t i = 0; i < prev.size(); ++i) sq += (next[i] - prev[i]) * (next[i] - prev[i]);
      const double dist = std::sqrt(sq);
      const double allowed = continuity_bound * std::abs(alpha - result.alphas.back());
      if (!(dist <= allowed)) {
        throw SweepBroken(alpha, "adjacent coefficient distance " + sci(dist) + " exceeds " + sci(allowed),
                          std::move(result));
      }
      result.adjacent_distances.push_back(dist);
    }
    cfg.warm_start = tr.loop;
    result.alphas.push_back(alpha);
    result.runs.push_back(std::move(tr));
  }
  return result;
}

ProbeTable collision_scaling_probe(double alpha, const std::vector<double>& epsilons, double mass, double c) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw ConfigError("probe alpha must lie in (0, 2)");
  if (epsilons.size() < 2) throw ConfigError("probe needs at least two epsilons");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0)) throw ConfigError("probe epsilons must be positive");
    if (i > 0 && !(epsilons[i] < epsilons[i - 1])) throw ConfigError("probe epsilons must be decreasing");
  }

  ProbeTable table;
  table.alpha = alpha;
  table.expected_exponent = (2.0 - alpha) / (2.0 + alpha);
  table.integrand_exponent = -2.0 * alpha / (2.0 + alpha);
  const double beta = 2.0 / (2.0 + alpha);

  // Relative coordinate of a colliding pair; reduced mass m/2.
  auto kinetic_density = [&](double t) {
    const double rdot = c * beta * std::pow(t, beta - 1.0);
    return 0.25 * mass * rdot * rdot;
  };
  auto potential_density = [&](double t) { return mass * mass * std::pow(c * std::pow(t, beta), -alpha); };

  boost::math::quadrature::tanh_sinh<double> quad;
  std::vector<double> eps, ks, vs, as;
  for (double e : epsilons) {
    ProbeRow row;
    row.epsilon = e;
    row.K = quad.integrate(kinetic_density, 0.0, e);
    row.V = quad.integrate(potential_density, 0.0, e);
    row.action = row.K + row.V;
    eps.push_back(e);
    ks.push_back(row.K);
    vs.push_back(row.V);
    as.push_back(row.action);
    table.rows.push_back(row);
  }
  table.fitted_K = loglog_slope(eps, ks);
  table.fitted_V = loglog_slope(eps, vs);
  table.fitted_action = loglog_slope(eps, as);
  return table;
}

std::string trajectory_csv(const ChoreographyTrajectory& tr) {
  std::string out = "t,x0,y0,x1,y1,x2,y2\n";
  char buf[64];
  for (std::size_t j = 0; j < tr.times.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g", tr.times[j]);
    out += buf;
    for (int i = 0; i < kBodies; ++i) {
      const Vec2 p = tr.body_paths[i][j];
      std::snprintf(buf, sizeof buf, ",%.17g,%.17g", p.x, p.y);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::string orbit_svg(const ChoreographyTrajectory& tr) {
  double extent = 0.0;
  for (const auto& p : tr.gamma_path) extent = std::max({extent, std::abs(p.x), std::abs(p.y)});
  if (!(extent > 0.0)) extent = 1.0;
  const double size = 480.0;
  const double scale = 0.45 * size / extent;
  auto px = [&](const Vec2& p) { return Vec2{0.5 * size + scale * p.x, 0.5 * size - scale * p.y}; };

  std::ostringstream svg;
  svg.precision(6);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
      << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<polyline fill=\"none\" stroke=\"#335\" stroke-width=\"1.5\" points=\"";
  for (const auto& p : tr.gamma_path) {
    const Vec2 q = px(p);
    svg << q.x << ',' << q.y << ' ';
  }
  if (!tr.gamma_path.empty()) {
    const Vec2 q = px(tr.gamma_path.front());
    svg << q.x << ',' << q.y;
  }
  svg << "\"/>\n";
  const char* colors[kBodies] = {"#c33", "#3a3", "#33c"};
  for (int i = 0; i < kBodies; ++i) {
    if (tr.body_paths[i].empty()) break;
    const Vec2 q = px(tr.body_paths[i].front());
    svg << "<circle cx=\"" << q.x << "\" cy=\"" << q.y << "\" r=\"6\" fill=\"" << colors[i] << "\"/>\n";
  }
  svg << "<text x=\"8\" y=\"20\" font-family=\"monospace\" font-size=\"12\">alpha = " << tr.alpha
      << ", bodies at t = 0, best collinear t = " << tr.best_collinear_time << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

void write_artifacts(const std::filesystem::path& dir, const ChoreographyTrajectory& tr) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("IOError", "cannot create " + dir.string() + ": " + ec.message());
  write_atomic(dir / "loop.json", loop_to_json(tr.loop));
  write_atomic(dir / "certificate.json", certificate_to_json(tr.certificate));
  write_atomic(dir / "trajectory.csv", trajectory_csv(tr));
  write_atomic(dir / "orbit.svg", orbit_svg(tr));
  std::string log;
  for (const auto& line : tr.log) log += line + '\n';
  if (tr.log.empty()) log = std::string(kLogHeader) + '\n';
  write_atomic(dir / "log.txt", log);
}

}  // namespace choreo
