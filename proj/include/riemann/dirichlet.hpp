#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "riemann/geometry.hpp"

namespace riemann {

/// Dirichlet values on the grid. Every boundary node of S_N is fixed;
/// interior nodes may additionally be pinned (punctured-domain experiments).
struct BoundaryData {
  std::vector<double> values;       // per node, meaningful where fixed
  std::vector<std::uint8_t> fixed;  // per node
  std::string generator;

  bool is_fixed(std::size_t node) const { return fixed[node] != 0; }
  void pin(std::size_t node, double value) {
    fixed[node] = 1;
    values[node] = value;
  }
  double min() const;
  double max() const;
};

/// Real values on grid nodes plus the residual of whatever produced them.
struct ScalarField {
  std::vector<double> values;
  double residual = 0.0;
  std::size_t iterations = 0;
};

/// b(p) = -ln|p| at each boundary node of S_N.
BoundaryData boundary_data(const DyadicGrid& grid);

/// Arbitrary boundary values; no origin requirement.
BoundaryData boundary_data(const DyadicGrid& grid, const std::function<double(Point)>& f,
                           std::string generator);

/// Max-norm of (mean of the four neighbours - value) over free nodes.
double mean_value_residual(const DyadicGrid& grid, const BoundaryData& data,
                           const std::vector<double>& values);

struct SolveOptions {
  double tol = 1e-10;
  /// Shuffle the unknown ordering; the solution must not depend on it.
  std::optional<std::uint64_t> ordering_seed;
};

/// Conjugate gradient on the 5-point system; zero initial guess on free
/// nodes. Throws NoConvergence after 50 * node_count iterations.
ScalarField solve_dirichlet(const DyadicGrid& grid, const BoundaryData& data,
                            const SolveOptions& options = {});

/// Monotone discrete Perron iteration. Starts from min(b) on free nodes and
/// raises every free value to max(current, neighbour mean) each sweep.
class PerronIteration {
 public:
  PerronIteration(const DyadicGrid& grid, const BoundaryData& data);

  /// One Gauss-Seidel sweep in node order; returns false at a fixed point.
  bool sweep();
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t sweeps() const noexcept { return sweeps_; }
  ScalarField field() const;

 private:
  const DyadicGrid* grid_;
  const BoundaryData* data_;
  std::vector<double> values_;
  std::vector<std::size_t> free_;
  std::size_t sweeps_ = 0;
};

ScalarField perron_iterate(const DyadicGrid& grid, const BoundaryData& data, std::size_t sweeps);

/// Sum over cell edges of the squared difference of the endpoint values.
double dirichlet_energy(const DyadicGrid& grid, const std::vector<double>& values);
inline double dirichlet_energy(const DyadicGrid& grid, const ScalarField& f) {
  return dirichlet_energy(grid, f.values);
}

struct MaxPrincipleReport {
  double interior_min = 0.0;
  double interior_max = 0.0;
  double boundary_min = 0.0;
  double boundary_max = 0.0;
  double slack = 0.0;
  bool pass = false;
};

MaxPrincipleReport check_max_principle(const DyadicGrid& grid, const ScalarField& f);

/// Unit-disc grid with rim data 1 and the node at the origin pinned to 0.
struct PuncturedDiscResult {
  int level = 0;
  Point probe;          // node nearest 0.5
  double value = 0.0;   // solved value there
  double predicted = 0.0;  // (ln|z| - ln h) / (-ln h), h = 2^-N
  ScalarField field;
};

PuncturedDiscResult punctured_disc(int level, double tol = 1e-10);

}  // namespace riemann
