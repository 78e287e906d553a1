#pragma once

#include <complex>
#include <string>
#include <vector>

#include "riemann/geometry.hpp"

namespace riemann {

using Complex = std::complex<double>;

/// A single-valued branch of log(z - q) on the grid nodes.
struct LogBranch {
  Point q;
  std::size_t basepoint = 0;
  std::vector<Complex> values;
  double bound = 0.0;           // A: max over nodes of Re L
  double closure_defect = 0.0;  // worst non-tree increment mismatch
};

/// Fills L by accumulating principal-log increments along a breadth-first
/// spanning tree of the cell-edge graph, starting from the principal value
/// at `basepoint`. Every non-tree edge must close to within 1e-8.
LogBranch log_branch(const DyadicGrid& grid, Point q, std::size_t basepoint);

/// u = Re(1 / (L - A - 1)). The transport w -> 1/(w - A - 1) sends the
/// half-plane Re w < A into the disc |z + 1/2| < 1/2, whose boundary circle
/// passes through 0 = image of L(q).
struct BarrierFunction {
  Point q;
  double bound = 0.0;
  std::vector<double> values;
  Point circle_center{-0.5, 0.0};
  double circle_radius = 0.5;
  std::string transport = "1/(w - A - 1)";
};

/// Barrier at boundary point q, with the log branch based at the node
/// nearest the origin.
BarrierFunction weak_barrier(const DyadicGrid& grid, Point q);
BarrierFunction weak_barrier(const LogBranch& branch);

struct ShellSample {
  double radius = 0.0;
  double min_value = 0.0;  // most negative value, i.e. sup |u|
  std::size_t nodes = 0;
};

struct BarrierReport {
  Point q;
  double bound = 0.0;
  double epsilon = 0.0;
  bool subharmonic = false;
  bool negative = false;
  bool limit_zero = false;
  std::string strong = "not certified";
  double worst_subharmonic_excess = 0.0;
  double slack = 0.0;
  std::size_t sampled_nodes = 0;
  std::vector<ShellSample> shells;  // radius halving from epsilon

  bool weak_barrier() const { return subharmonic && negative && limit_zero; }
};

/// Checks, on nodes within `epsilon` of q: discrete subharmonicity (with
/// slack 100 * 4^-N), strict negativity, and that sup |u| over dyadically
/// shrinking neighbourhoods of q decreases strictly toward 0.
BarrierReport verify_barrier(const DyadicGrid& grid, const BarrierFunction& bf, double epsilon);

/// Boundary points to test: polygon vertices followed by edge midpoints, or
/// 8 equally spaced rim points of a disc (working coordinates).
std::vector<Point> barrier_probes(const Domain& d);

/// Neighbourhood radius for verify_barrier: a quarter of the shorter side
/// of the bounding box.
double barrier_radius(const Domain& d);

}  // namespace riemann
