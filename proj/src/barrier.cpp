#include "riemann/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "riemann/error.hpp"

namespace riemann {

namespace {

constexpr double kClosureTol = 1e-8;
constexpr DyadicGrid::Dir kDirs[] = {DyadicGrid::East, DyadicGrid::North, DyadicGrid::West,
                                     DyadicGrid::South};

}  // namespace

LogBranch log_branch(const DyadicGrid& grid, Point q, std::size_t basepoint) {
  if (basepoint >= grid.node_count()) {
    throw Error(ErrorCode::MalformedInput, "basepoint is not a grid node");
  }
  // The principal-log increment along an edge is the continuous one as long
  // as q is off that edge; q touching S_N is the only obstruction.
  const double dist = grid.distance_to(q);
  if (!(dist > 1e-9 * grid.spacing())) {
    throw Error(ErrorCode::QTooClose, "boundary point lies on S_N; refine the grid");
  }

  LogBranch out;
  out.q = q;
  out.basepoint = basepoint;
  const std::size_t n_nodes = grid.node_count();
  out.values.assign(n_nodes, Complex{});
  std::vector<std::uint8_t> seen(n_nodes, 0);
  std::vector<std::int32_t> parent(n_nodes, kNoNode);

  auto fill_from = [&](std::size_t root) {
    out.values[root] = std::log(grid.node_position(root) - q);
    seen[root] = 1;
    std::deque<std::size_t> queue{root};
    while (!queue.empty()) {
      const std::size_t n = queue.front();
      queue.pop_front();
      const Point zn = grid.node_position(n) - q;
      for (auto dir : kDirs) {
        const std::int32_t nb = grid.neighbor(n, dir);
        if (nb == kNoNode || seen[static_cast<std::size_t>(nb)]) continue;
        const auto m = static_cast<std::size_t>(nb);
        const Point zm = grid.node_position(m) - q;
        const double arg = out.values[n].imag() + std::arg(zm / zn);
        out.values[m] = {std::log(std::abs(zm)), arg};
        parent[m] = static_cast<std::int32_t>(n);
        seen[m] = 1;
        queue.push_back(m);
      }
    }
  };
  fill_from(basepoint);
  for (std::size_t n = 0; n < n_nodes; ++n) {
    if (!seen[n]) fill_from(n);
  }

  double defect = 0.0;
  for (std::size_t n = 0; n < n_nodes; ++n) {
    const Point zn = grid.node_position(n) - q;
    for (auto dir : {DyadicGrid::East, DyadicGrid::North}) {
      const std::int32_t nb = grid.neighbor(n, dir);
      if (nb == kNoNode) continue;
      const auto m = static_cast<std::size_t>(nb);
      if (parent[m] == static_cast<std::int32_t>(n) || parent[n] == nb) continue;
      const Point zm = grid.node_position(m) - q;
      const double mismatch =
          std::abs(out.values[n].imag() + std::arg(zm / zn) - out.values[m].imag());
      defect = std::max(defect, mismatch);
    }
  }
  out.closure_defect = defect;
  if (defect > kClosureTol) {
    throw Error(ErrorCode::MonodromyDetected,
                "log branch fails to close around a grid loop (defect " + std::to_string(defect) +
                    ")");
  }

  out.bound = -std::numeric_limits<double>::infinity();
  for (const Complex& v : out.values) out.bound = std::max(out.bound, v.real());
  return out;
}

BarrierFunction weak_barrier(const LogBranch& branch) {
  BarrierFunction bf;
  bf.q = branch.q;
  bf.bound = branch.bound;
  bf.values.reserve(branch.values.size());
  const double shift = branch.bound + 1.0;
  for (const Complex& l : branch.values) bf.values.push_back((1.0 / (l - shift)).real());
  return bf;
}

BarrierFunction weak_barrier(const DyadicGrid& grid, Point q) {
  return weak_barrier(log_branch(grid, q, grid.nearest_node({0.0, 0.0})));
}

BarrierReport verify_barrier(const DyadicGrid& grid, const BarrierFunction& bf, double epsilon) {
  BarrierReport rep;
  rep.q = bf.q;
  rep.bound = bf.bound;
  rep.epsilon = epsilon;
  rep.slack = 100.0 * std::ldexp(1.0, -2 * grid.level());

  rep.subharmonic = true;
  rep.negative = true;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    if (std::abs(grid.node_position(n) - bf.q) > epsilon) continue;
    ++rep.sampled_nodes;
    if (!(bf.values[n] < 0.0)) rep.negative = false;
    if (!grid.is_interior(n)) continue;
    double mean = 0.0;
    for (auto dir : kDirs) mean += 0.25 * bf.values[static_cast<std::size_t>(grid.neighbor(n, dir))];
    const double excess = bf.values[n] - mean;
    worst = std::max(worst, excess);
    if (excess > rep.slack) rep.subharmonic = false;
  }
  rep.worst_subharmonic_excess = std::isfinite(worst) ? worst : 0.0;

  for (double radius = epsilon;; radius *= 0.5) {
    ShellSample shell{radius, std::numeric_limits<double>::infinity(), 0};
    for (std::size_t n = 0; n < grid.node_count(); ++n) {
      if (std::abs(grid.node_position(n) - bf.q) > radius) continue;
      ++shell.nodes;
      shell.min_value = std::min(shell.min_value, bf.values[n]);
    }
    if (shell.nodes == 0) break;
    rep.shells.push_back(shell);
  }
  rep.limit_zero = rep.shells.size() >= 2;
  for (std::size_t k = 1; k < rep.shells.size(); ++k) {
    if (rep.shells[k].min_value < rep.shells[k - 1].min_value) rep.limit_zero = false;
  }
  if (rep.limit_zero && !(rep.shells.back().min_value > rep.shells.front().min_value)) {
    rep.limit_zero = false;
  }
  if (rep.sampled_nodes == 0) {
    rep.subharmonic = rep.negative = false;
  }
  return rep;
}

std::vector<Point> barrier_probes(const Domain& d) {
  std::vector<Point> out;
  if (d.is_disc()) {
    const Disc& c = d.disc();
    for (int k = 0; k < 8; ++k) out.push_back(c.center + std::polar(c.radius, 2.0 * M_PI * k / 8.0));
    return out;
  }
  const auto& v = d.polygon().vertices;
  out = v;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(0.5 * (v[k] + v[(k + 1) % v.size()]));
  return out;
}

double barrier_radius(const Domain& d) {
  const auto [lo, hi] = d.bounds();
  return 0.25 * std::min(hi.real() - lo.real(), hi.imag() - lo.imag());
}

}  // namespace riemann
