#include "riemann/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <memory>
#include <ostream>

#include <nlohmann/json.hpp>

#include "riemann/barrier.hpp"
#include "riemann/conformal_map.hpp"
#include "riemann/dirichlet.hpp"
#include "riemann/geometry.hpp"
#include "riemann/io.hpp"
#include "riemann/verification.hpp"

namespace riemann {

namespace fs = std::filesystem;

std::optional<Command> parse_command(std::string_view name) {
  if (name == "solve") return Command::Solve;
  if (name == "verify") return Command::Verify;
  if (name == "barrier") return Command::Barrier;
  if (name == "plot") return Command::Plot;
  if (name == "counterexample") return Command::Counterexample;
  return std::nullopt;
}

void validate(Command command, const RunConfig& cfg) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::MalformedInput, what); };
  if (cfg.level < 1 || cfg.level > 10) fail("level must lie in 1..10");
  if (!(cfg.radius > 0.0 && cfg.radius < 1.0)) fail("radius must lie in (0, 1)");
  if (cfg.probes < 1) fail("probe count must be at least 1");
  if (!(cfg.tol > 0.0) || !std::isfinite(cfg.tol)) fail("tol must be positive");
  if (cfg.lambda && !std::isfinite(*cfg.lambda)) fail("lambda must be finite");
  if (command != Command::Counterexample && cfg.domain.empty()) fail("--domain is required");
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedSpec:
    case ErrorCode::DegenerateGeometry:
    case ErrorCode::EmptyInterior:
    case ErrorCode::EmptyGrid:
    case ErrorCode::OriginOnBoundary:
    case ErrorCode::OutsideGrid:
    case ErrorCode::MalformedInput:
      return kExitInput;
    case ErrorCode::Indeterminate:
      return kExitIndeterminate;
    default:
      return kExitNumerical;
  }
}

namespace {

nlohmann::json complex_json(Complex z) { return {z.real(), z.imag()}; }

std::string dump(const nlohmann::json& j) { return j.dump(2) + '\n'; }

std::string output_path(const RunConfig& cfg, const char* name) { return (fs::path(cfg.out) / name).string(); }

Domain load(const RunConfig& cfg) { return normalize_origin(load_domain_file(cfg.domain)); }

double shift_of(const RunConfig& cfg) { return cfg.lambda.value_or(0.0); }

int solve(const RunConfig& cfg, std::ostream& log) {
  const Domain domain = load(cfg);
  const ConformalMap m = construct_map(domain, {cfg.level, shift_of(cfg), cfg.tol});
  const DyadicGrid& grid = m.grid();
  const BoundaryModulus modulus = boundary_modulus_report(m);
  const Complex d0 = eval_derivative(m, Point{0.0, 0.0}).value;

  nlohmann::json summary = {
      {"domain", to_json(domain)},
      {"N", cfg.level},
      {"lambda", grid.shift()},
      {"tol", cfg.tol},
      {"nodes", grid.node_count()},
      {"cells", grid.cells().size()},
      {"boundary_edges", grid.boundary_edges().size()},
      {"solver", {{"iterations", m.g().iterations}, {"residual", m.g().residual}}},
      {"max_principle", to_json(check_max_principle(grid, m.g()))},
      {"energy", dirichlet_energy(grid, m.g())},
      {"closure_residual", m.closure_residual()},
      {"boundary_modulus", to_json(modulus)},
      {"cr_residual", conformality_residual(m)},
      {"H_prime_0", complex_json(d0)},
      {"H_0", complex_json(eval_map(m, Point{0.0, 0.0}))}};

  write_file_atomic(output_path(cfg, "g.csv"), field_csv(grid, m.g().values, domain.translation));
  write_file_atomic(output_path(cfg, "map.csv"), map_csv(m, domain.translation));
  write_file_atomic(output_path(cfg, "summary.json"), dump(summary));
  log << "solve: " << grid.node_count() << " nodes, max||H|-1| = " << format_number(modulus.max)
      << ", closure residual = " << format_number(m.closure_residual()) << '\n';
  return kExitOk;
}

int verify(const RunConfig& cfg, std::ostream& log) {
  const Domain domain = load(cfg);
  MapFamily family(domain, cfg.level, cfg.tol);
  const VerificationReport report = verify_map(family, shift_of(cfg), cfg.radius, cfg.probes, cfg.seed);
  write_file_atomic(output_path(cfg, "verification.json"), dump(to_json(report, domain)));
  log << "verify: ok_fraction = " << format_number(report.sweep.ok_fraction)
      << ", cr_residual = " << format_number(report.cr_residual) << '\n';
  if (report.indeterminate) {
    log << "verify: indeterminate winding after all shifts\n";
    return kExitIndeterminate;
  }
  return kExitOk;
}

int barrier(const RunConfig& cfg, std::ostream& log) {
  const Domain domain = load(cfg);
  const DyadicGrid grid = build_grid(domain, cfg.level, shift_of(cfg));
  const double eps = barrier_radius(domain);
  nlohmann::json barriers = nlohmann::json::array();
  std::size_t passed = 0;
  const auto probes = barrier_probes(domain);
  for (const Point q : probes) {
    const BarrierReport r = verify_barrier(grid, weak_barrier(grid, q), eps);
    if (r.weak_barrier()) ++passed;
    barriers.push_back(to_json(r, domain.translation));
  }
  const nlohmann::json out = {
      {"domain", to_json(domain)}, {"N", cfg.level}, {"lambda", grid.shift()}, {"barriers", barriers}};
  write_file_atomic(output_path(cfg, "barrier.json"), dump(out));
  log << "barrier: " << passed << '/' << probes.size() << " probes pass all checks\n";
  return kExitOk;
}

int plot(const RunConfig& cfg, std::ostream& log) {
  const Domain domain = load(cfg);
  const ConformalMap m = construct_map(domain, {cfg.level, shift_of(cfg), cfg.tol});
  write_file_atomic(output_path(cfg, "grid.svg"), render_grid_image(m));
  log << "plot: wrote grid.svg\n";
  return kExitOk;
}

int counterexample(const RunConfig& cfg, std::ostream& log) {
  nlohmann::json levels = nlohmann::json::array();
  const int first = std::min(3, cfg.level);
  PuncturedDiscResult fine;
  bool increasing = true;
  for (int n = first; n <= cfg.level; ++n) {
    PuncturedDiscResult r = punctured_disc(n, cfg.tol);
    if (n > first && !(r.value > fine.value)) increasing = false;
    levels.push_back({{"N", n},
                      {"probe", complex_json(r.probe)},
                      {"value", r.value},
                      {"predicted", r.predicted},
                      {"difference", std::abs(r.value - r.predicted)}});
    fine = std::move(r);
  }

  // Profile along the positive real axis at the finest level.
  const DyadicGrid grid = build_grid(make_disc({0.0, 0.0}, 1.0), cfg.level);
  const double log_h = std::log(grid.spacing());
  nlohmann::json profile = nlohmann::json::array();
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    const Point p = grid.node_position(n);
    if (p.imag() != 0.0 || !(p.real() > 0.0)) continue;
    profile.push_back({{"x", p.real()},
                       {"value", fine.field.values[n]},
                       {"predicted", (std::log(p.real()) - log_h) / -log_h},
                       {"boundary", !grid.is_interior(n)}});
  }

  const nlohmann::json out = {{"domain", to_json(make_disc({0.0, 0.0}, 1.0))},
                              {"puncture", {{"point", {0.0, 0.0}}, {"value", 0.0}}},
                              {"rim_value", 1.0},
                              {"prediction", "(ln|z| - ln h_N) / (-ln h_N)"},
                              {"levels", levels},
                              {"increasing", increasing},
                              {"profile", {{"N", cfg.level}, {"points", profile}}}};
  write_file_atomic(output_path(cfg, "counterexample.json"), dump(out));
  log << "counterexample: value at N=" << cfg.level << " is " << format_number(fine.value)
      << " (predicted " << format_number(fine.predicted) << ")\n";
  return kExitOk;
}

}  // namespace

int run(Command command, const RunConfig& cfg, std::ostream& log) {
  try {
    validate(command, cfg);
    std::error_code ec;
    fs::create_directories(cfg.out, ec);
    if (!fs::is_directory(cfg.out)) throw Error(ErrorCode::MalformedInput, "cannot create " + cfg.out);
    switch (command) {
      case Command::Solve: return solve(cfg, log);
      case Command::Verify: return verify(cfg, log);
      case Command::Barrier: return barrier(cfg, log);
      case Command::Plot: return plot(cfg, log);
      case Command::Counterexample: return counterexample(cfg, log);
    }
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitInput;
}

}  // namespace riemann
