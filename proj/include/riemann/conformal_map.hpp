#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "riemann/dirichlet.hpp"
#include "riemann/geometry.hpp"

namespace riemann {

using Complex = std::complex<double>;

struct HarmonicConjugate {
  std::vector<double> dual;  // one value per cell (cell centres)
  ScalarField primal;        // transported to nodes; residual = closure_residual
  double closure_residual = 0.0;
  std::size_t components = 0;  // connected pieces of the cell-adjacency graph
};

/// Integrates the conjugate differential -g_y dx + g_x dy across primal
/// edges on the dual (cell-centre) graph, normalised to 0 at the cell
/// nearest the origin. Throws ClosureFailure when some dual loop fails to
/// close to 1e-6 * (1 + max|g|).
HarmonicConjugate harmonic_conjugate(const DyadicGrid& grid, const ScalarField& g);

/// The assembled map H(z) = z exp(g + i conj(g)) sampled at the nodes.
class ConformalMap {
 public:
  ConformalMap(std::shared_ptr<const DyadicGrid> grid, ScalarField g, HarmonicConjugate conj);

  const DyadicGrid& grid() const noexcept { return *grid_; }
  std::shared_ptr<const DyadicGrid> grid_ptr() const noexcept { return grid_; }

  const ScalarField& g() const noexcept { return g_; }
  const ScalarField& conjugate() const noexcept { return conj_; }
  const std::vector<Complex>& h() const noexcept { return h_; }
  const std::vector<Complex>& H() const noexcept { return H_; }
  double closure_residual() const noexcept { return closure_residual_; }

  /// Central-difference gradient of g at a node; flagged one-sided where a
  /// lattice neighbour is missing.
  double gx(std::size_t node) const { return gx_[node]; }
  double gy(std::size_t node) const { return gy_[node]; }
  bool one_sided(std::size_t node) const { return one_sided_[node] != 0; }

  /// H' at a node via h (1 + z (g_x - i g_y)).
  Complex node_derivative(std::size_t node) const;
  double max_derivative() const noexcept { return max_derivative_; }

 private:
  std::shared_ptr<const DyadicGrid> grid_;
  ScalarField g_;
  ScalarField conj_;
  double closure_residual_ = 0.0;
  std::vector<Complex> h_;
  std::vector<Complex> H_;
  std::vector<double> gx_;
  std::vector<double> gy_;
  std::vector<std::uint8_t> one_sided_;
  double max_derivative_ = 0.0;
};

/// Shifts the conjugate so its bilinear interpolant vanishes at z = 0,
/// making H'(0) = exp(g(0)) real and positive, then samples h and H.
ConformalMap assemble_map(std::shared_ptr<const DyadicGrid> grid, ScalarField g,
                          HarmonicConjugate conj);

/// Bilinear interpolation of Re H and Im H over the containing cell.
Complex eval_map(const ConformalMap& m, Point z);

struct DerivativeSample {
  Complex value;
  bool one_sided = false;
};

DerivativeSample eval_derivative(const ConformalMap& m, Point z);

/// Bilinear interpolation of a node field at z (OutsideGrid if z is not in S_N).
double interpolate(const DyadicGrid& grid, const std::vector<double>& values, Point z);

struct MapBuildOptions {
  int level = 6;
  double shift = 0.0;
  double tol = 1e-10;
};

/// Grid, boundary data, Dirichlet solve, conjugate and assembly in one go.
/// `domain` must already contain the origin.
ConformalMap construct_map(const Domain& domain, const MapBuildOptions& options);

}  // namespace riemann
