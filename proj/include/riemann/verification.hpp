#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "riemann/conformal_map.hpp"
#include "riemann/error.hpp"

namespace riemann {

/// Rebuilds the whole construction on the grid shifted by (shift, shift).
using MapRebuilder = std::function<std::shared_ptr<const ConformalMap>(double shift)>;

/// Memoising rebuilder for one domain and level.
class MapFamily {
 public:
  MapFamily(Domain domain, int level, double tol);

  std::shared_ptr<const ConformalMap> at(double shift);
  MapRebuilder rebuilder();

  const Domain& domain() const noexcept { return domain_; }
  int level() const noexcept { return level_; }
  double tol() const noexcept { return tol_; }

 private:
  Domain domain_;
  int level_;
  double tol_;
  std::map<double, std::shared_ptr<const ConformalMap>> cache_;
};

struct BoundaryModulus {
  double max = 0.0;   // over the sampled boundary cycle (nodes and edge samples)
  double mean = 0.0;
  double node_max = 0.0;  // over boundary nodes alone
};

/// ||H| - 1| along the boundary edges of S_N, sampled at the same 8 points
/// per edge the winding count uses.
BoundaryModulus boundary_modulus_report(const ConformalMap& m);

struct PreimageCount {
  Complex w;
  int level = 0;
  double shift = 0.0;
  int count = 0;
  double raw = 0.0;
  double distance = 0.0;        // |raw - count|
  double clearance = 0.0;       // min |H - w| over the sampled boundary path
  double hazard_threshold = 0.0;
  bool shifted = false;
  bool hazard_unresolved = false;
  int attempts = 1;
};

/// Raw winding number of the image of the boundary cycle around w, from
/// summed principal argument increments (8 samples per edge, doubled up to
/// 64 where consecutive samples subtend more than pi/2).
struct Winding {
  double raw = 0.0;
  double clearance = 0.0;
};
Winding boundary_winding(const ConformalMap& m, Complex w);

struct CountOptions {
  MapRebuilder rebuild;  // empty: no shift fallback
  int max_shift_attempts = 5;
};

/// Number of preimages of w in S_N. Throws TooCoarse when w sits inside the
/// band 1 +- margin around the unit circle (margin = 2 * boundary max), and
/// Indeterminate when the raw winding is not within 0.1 of an integer.
PreimageCount count_preimages(const ConformalMap& m, Complex w, const CountOptions& options = {});

/// Lattice hop distance from each node to the nearest boundary node of S_N.
std::vector<int> rim_distance(const DyadicGrid& grid);

/// Cells used for the Cauchy-Riemann check sit at least this deep inside
/// S_N; the first rings of cells carry an O(1) boundary layer from the
/// staircase boundary data.
inline constexpr double kInteriorDepth = 0.125;

/// Max discrete Cauchy-Riemann residual of node samples over cells at depth
/// >= `depth` inside S_N (falling back to cells with all corners interior
/// when none are that deep), divided by `scale`.
double conformality_residual(const DyadicGrid& grid, const std::vector<Complex>& samples,
                             double scale, double depth = kInteriorDepth);
double conformality_residual(const ConformalMap& m);

struct InverseResult {
  Point z;
  double residual = 0.0;
  int iterations = 0;
};

class NewtonStalled : public Error {
 public:
  NewtonStalled(Point best, double residual)
      : Error(ErrorCode::NewtonStalled, "Newton inversion did not converge"),
        best_(best),
        residual_(residual) {}
  Point best() const noexcept { return best_; }
  double residual() const noexcept { return residual_; }

 private:
  Point best_;
  double residual_;
};

/// Newton iteration from the node minimising |H - w|; stops at
/// |H(z) - w| <= 1e-6 or 50 steps.
InverseResult inverse_map(const ConformalMap& m, Complex w);

struct ProbeFailure {
  std::size_t index = 0;
  Complex w;
  ErrorCode code = ErrorCode::TooCoarse;
  std::string message;
};

struct OntoWitness {
  Complex w;
  bool found = false;
  Point z;
  double residual = 0.0;
};

struct SweepSummary {
  double radius = 0.0;
  std::size_t probes = 0;
  std::uint64_t seed = 0;
  double ok_fraction = 0.0;
  std::vector<PreimageCount> counts;
  std::vector<ProbeFailure> failures;
  std::vector<std::size_t> exceptions;  // probe indices without count exactly 1
  std::vector<OntoWitness> onto;
};

/// Seeded uniform probes in |w| <= r, counted one by one (errors are
/// collected per probe), plus Newton preimages for 8 points on |w| = r.
SweepSummary bijectivity_sweep(const ConformalMap& m, double radius, std::size_t probes,
                               std::uint64_t seed, const CountOptions& options = {});

/// The probe points used by bijectivity_sweep.
std::vector<Complex> sweep_probes(double radius, std::size_t probes, std::uint64_t seed);

struct VerificationReport {
  int level = 0;
  double shift = 0.0;
  std::vector<PreimageCount> probes;
  std::vector<ProbeFailure> failures;
  BoundaryModulus boundary;
  double cr_residual = 0.0;
  SweepSummary sweep;
  bool indeterminate = false;
};

/// Full verification: w = 0, four probes at |w| = 1.1, the seeded sweep.
VerificationReport verify_map(MapFamily& family, double shift, double radius, std::size_t probes,
                              std::uint64_t seed);

}  // namespace riemann
