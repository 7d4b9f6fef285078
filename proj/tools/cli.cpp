#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "choreo/serialization.hpp"

namespace choreo::cli {

namespace {

using nlohmann::json;

std::string alpha_dir_name(double alpha) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "alpha_%.6g", alpha);
  return buf;
}

json certificate_json(const OrbitCertificate& cert) { return json::parse(certificate_to_json(cert)); }

json run_summary(const ChoreographyTrajectory& tr) {
  json j;
  j["alpha"] = tr.alpha;
  j["status"] = std::string(to_string(tr.solver.status));
  j["iterations"] = tr.solver.iterations;
  j["gnorm"] = tr.solver.gnorm;
  j["F"] = tr.solver.F;
  j["best_collinear_time"] = tr.best_collinear_time;
  j["certificate"] = certificate_json(tr.certificate);
  return j;
}

json sweep_summary(const SweepResult& sweep) {
  json j;
  j["alphas"] = sweep.alphas;
  j["adjacent_distances"] = sweep.adjacent_distances;
  j["continuity_bound"] = sweep.continuity_bound;
  j["runs"] = json::array();
  for (const auto& run : sweep.runs) j["runs"].push_back(run_summary(run));
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("IOError", "cannot write " + path.string());
  f << text;
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void write_sweep(const std::filesystem::path& dir, const SweepResult& sweep) {
  for (const auto& run : sweep.runs) write_artifacts(dir / alpha_dir_name(run.alpha), run);
  write_text(dir / "sweep.json", sweep_summary(sweep).dump(2) + "\n");
}

void report_error(std::ostream& err, const std::string& code, const std::string& detail) {
  err << json{{"error", code}, {"detail", detail}}.dump() << '\n';
}

bool in_open_interval(double alpha) { return alpha > 0.0 && alpha < 2.0; }

void validate(const CliConfig& c) {
  for (double a : c.alphas) {
    if (!in_open_interval(a)) throw UsageError("alpha = " + std::to_string(a) + " is outside (0, 2)");
  }
  if (c.subcommand == Subcommand::Sweep) {
    if (c.alphas.empty()) throw UsageError("--alphas needs at least one value");
    for (std::size_t i = 2; i < c.alphas.size(); ++i) {
      if ((c.alphas[i] - c.alphas[i - 1]) * (c.alphas[1] - c.alphas[0]) <= 0.0) {
        throw UsageError("--alphas must be strictly monotone");
      }
    }
    if (c.alphas.size() == 2 && c.alphas[0] == c.alphas[1]) throw UsageError("--alphas must be strictly monotone");
    if (!(c.continuity_bound > 0.0)) throw UsageError("--continuity-bound must be positive");
  }
  if (c.subcommand == Subcommand::Probe) {
    if (c.epsilons.size() < 2) throw UsageError("--epsilons needs at least two values");
    for (std::size_t i = 0; i < c.epsilons.size(); ++i) {
      if (!(c.epsilons[i] > 0.0) || (i > 0 && !(c.epsilons[i] < c.epsilons[i - 1]))) {
        throw UsageError("--epsilons must be positive and decreasing");
      }
    }
  }
  if (c.rk4_steps < 1) throw UsageError("--rk4-steps must be >= 1");
  if (c.samples < 3) throw UsageError("--samples must be >= 3");
  if (!(c.geometry_tol > 0.0)) throw UsageError("--geometry-tol must be positive");
  try {
    c.problem(c.alphas.front()).validate();
    if (c.subcommand != Subcommand::Certify) {
      const SolverConfig s = c.solver();
      s.validate();
      if (c.quad_nodes < 4 * c.modes) {
        throw UsageError("--quad-nodes must be at least 4 x --modes (" + std::to_string(4 * c.modes) + ")");
      }
    }
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
}

}  // namespace

ProblemParams CliConfig::problem(double alpha) const {
  ProblemParams p;
  p.alpha = alpha;
  p.mass = mass;
  p.quad_nodes = quad_nodes;
  p.collision_floor = collision_floor;
  return p;
}

SolverConfig CliConfig::solver() const {
  SolverConfig s;
  s.modes = modes;
  s.nc1 = nc1;
  s.max_iters = max_iters;
  s.grad_tol = grad_tol;
  s.seed_amplitude = seed_amplitude;
  s.rng_seed = rng_seed;
  s.metric = euclidean ? DescentMetric::Euclidean : DescentMetric::Sobolev;
  return s;
}

RunOptions CliConfig::run_options() const {
  RunOptions o;
  o.bounds = bounds;
  o.certify.rk4_steps = rk4_steps;
  o.certify.geometry_tol = geometry_tol;
  o.samples = samples;
  return o;
}

CliConfig parse_args(const std::vector<std::string>& args) {
  CliConfig c;
  CLI::App app{"Figure-eight choreographies of the three-body problem under homogeneous potentials"};
  app.name("choreo");
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with option values; flags on the command line win");

  double alpha = 1.0;
  std::uint64_t rng_seed = 0;
  std::string metric = "sobolev";
  app.add_option("--alpha", alpha, "Potential exponent in (0, 2)")->capture_default_str();
  app.add_option("--mass", c.mass, "Common body mass")->capture_default_str();
  app.add_option("--modes", c.modes, "Retained harmonics per component")->capture_default_str();
  app.add_option("--quad-nodes", c.quad_nodes, "Trapezoid nodes on [0, 2pi)")->capture_default_str();
  app.add_option("--collision-floor", c.collision_floor, "Pair distance treated as a collision")
      ->capture_default_str();
  app.add_option("--grad-tol", c.grad_tol, "Projected-gradient tolerance")->capture_default_str();
  app.add_option("--max-iters", c.max_iters, "Solver iteration cap")->capture_default_str();
  app.add_option("--seed-amplitude", c.seed_amplitude, "Amplitude of the (sin 2t, sin t) seed")
      ->capture_default_str();
  app.add_flag("--nc1", c.nc1, "Pin the first y harmonic to zero");
  app.add_option("--metric", metric, "Descent metric")
      ->check(CLI::IsMember({"sobolev", "euclidean"}))
      ->capture_default_str();
  auto* seed_opt = app.add_option("--rng-seed", rng_seed, "Jitter the seed with this RNG seed");
  app.add_option("--out", c.output_dir, "Artifact directory");
  app.add_flag("-v,--verbose", c.verbosity, "Stream solver progress to stderr");
  app.add_option("--virial-tol", c.bounds.virial_residual, "Bound on virial_residual")->capture_default_str();
  app.add_option("--newton-tol", c.bounds.newton_residual_sup, "Bound on newton_residual_sup")
      ->capture_default_str();
  app.add_option("--closure-tol", c.bounds.closure_error, "Bound on closure_error")->capture_default_str();
  app.add_option("--energy-tol", c.bounds.energy_drift, "Bound on energy_drift")->capture_default_str();
  app.add_option("--min-distance-factor", c.bounds.min_distance_factor,
                 "min_mutual_distance must exceed this times the collision floor")
      ->capture_default_str();
  app.add_option("--rk4-steps", c.rk4_steps, "RK4 steps over one rescaled period")->capture_default_str();
  app.add_option("--geometry-tol", c.geometry_tol, "Tolerance of the node and crossing checks")
      ->capture_default_str();
  app.add_option("--samples", c.samples, "Trajectory samples per period")->capture_default_str();

  auto* solve = app.add_subcommand("solve", "Solve, certify and emit one choreography")->fallthrough();
  auto* sweep = app.add_subcommand("sweep", "Continuation over a monotone list of alphas")->fallthrough();
  std::vector<double> alphas;
  sweep->add_option("--alphas", alphas, "Comma-separated alphas")->delimiter(',')->required();
  sweep->add_option("--continuity-bound", c.continuity_bound, "Allowed |dc| per unit of alpha")
      ->capture_default_str();
  auto* certify = app.add_subcommand("certify", "Certify an existing loop.json")->fallthrough();
  certify->add_option("--loop", c.loop_path, "Loop file")->required()->check(CLI::ExistingFile);
  auto* probe = app.add_subcommand("probe", "Collision-arc scaling probe")->fallthrough();
  probe->add_option("--epsilons", c.epsilons, "Decreasing comma-separated epsilons")->delimiter(',');

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::ostringstream out, err;
    app.exit(e, out, err);
    c.help = out.str();
    return c;
  } catch (const CLI::CallForAllHelp& e) {
    std::ostringstream out, err;
    app.exit(e, out, err);
    c.help = out.str();
    return c;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (solve->parsed()) c.subcommand = Subcommand::Solve;
  if (sweep->parsed()) c.subcommand = Subcommand::Sweep;
  if (certify->parsed()) c.subcommand = Subcommand::Certify;
  if (probe->parsed()) c.subcommand = Subcommand::Probe;
  c.alphas = c.subcommand == Subcommand::Sweep ? alphas : std::vector<double>{alpha};
  if (seed_opt->count() > 0) c.rng_seed = rng_seed;
  c.euclidean = metric == "euclidean";
  validate(c);
  return c;
}

CliConfig parse_args(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return parse_args(args);
}

int run(const CliConfig& c, std::ostream& out, std::ostream& err) {
  if (c.help) {
    out << *c.help;
    return kExitOk;
  }
  RunOptions options = c.run_options();
  if (c.verbosity > 0) options.progress = [&err](const std::string& line) { err << line << '\n'; };

  try {
    switch (c.subcommand) {
      case Subcommand::Solve: {
        const auto tr = run_single(c.problem(c.alphas.front()), c.solver(), options);
        if (!c.output_dir.empty()) write_artifacts(c.output_dir, tr);
        out << run_summary(tr).dump(2) << '\n';
        return kExitOk;
      }
      case Subcommand::Sweep: {
        try {
          const auto sweep = run_sweep(c.alphas, c.problem(c.alphas.front()), c.solver(), options,
                                       c.continuity_bound);
          if (!c.output_dir.empty()) write_sweep(c.output_dir, sweep);
          out << sweep_summary(sweep).dump(2) << '\n';
          return kExitOk;
        } catch (const SweepBroken& e) {
          if (!c.output_dir.empty()) write_sweep(c.output_dir, e.partial());
          out << sweep_summary(e.partial()).dump(2) << '\n';
          throw;
        }
      }
      case Subcommand::Certify: {
        const auto loop = loop_from_json(read_text(c.loop_path));
        auto tr = certify_loop(loop, c.problem(c.alphas.front()), options);
        if (!c.output_dir.empty()) write_artifacts(c.output_dir, tr);
        out << certificate_json(tr.certificate).dump(2) << '\n';
        return kExitOk;
      }
      case Subcommand::Probe: {
        const auto table = collision_scaling_probe(c.alphas.front(), c.epsilons, c.mass);
        json j;
        j["alpha"] = table.alpha;
        j["expected_exponent"] = table.expected_exponent;
        j["integrand_exponent"] = table.integrand_exponent;
        j["fitted_exponent"] = {{"K", table.fitted_K}, {"V", table.fitted_V}, {"action", table.fitted_action}};
        j["rows"] = json::array();
        for (const auto& r : table.rows) {
          j["rows"].push_back({{"epsilon", r.epsilon}, {"K", r.K}, {"V", r.V}, {"action", r.action}});
        }
        out << j.dump(2) << '\n';
        return kExitOk;
      }
    }
  } catch (const Error& e) {
    report_error(err, e.code(), e.what());
    return kExitFailure;
  } catch (const std::exception& e) {
    report_error(err, "InternalError", e.what());
    return kExitFailure;
  }
  return kExitFailure;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CliConfig config;
  try {
    config = parse_args(argc, argv);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nRun with --help for the option list.\n";
    return e.exit_code();
  }
  return run(config, out, err);
}

}  // namespace choreo::cli
