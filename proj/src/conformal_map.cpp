#include "riemann/conformal_map.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "riemann/error.hpp"

namespace riemann {

namespace {

struct Bilinear {
  std::array<std::size_t, 4> corners;  // ll, lr, ur, ul
  std::array<double, 4> weights;
};

Bilinear bilinear(const DyadicGrid& grid, Point z) {
  const auto cell = grid.locate(z);
  if (!cell) throw Error(ErrorCode::OutsideGrid, "point is not inside S_N");
  const Point ll = grid.position(grid.cells()[*cell]);
  const double s = std::clamp((z.real() - ll.real()) / grid.spacing(), 0.0, 1.0);
  const double t = std::clamp((z.imag() - ll.imag()) / grid.spacing(), 0.0, 1.0);
  return {grid.cell_corners(*cell),
          {(1 - s) * (1 - t), s * (1 - t), s * t, (1 - s) * t}};
}

template <typename Sampler>
auto blend(const Bilinear& b, Sampler&& sample) {
  auto acc = b.weights[0] * sample(b.corners[0]);
  for (int k = 1; k < 4; ++k) acc += b.weights[k] * sample(b.corners[k]);
  return acc;
}

// Conjugate increment when moving from cell c to its neighbour in `dir`:
// the discrete normal flux of g through the shared edge.
double conjugate_step(const DyadicGrid& grid, const std::vector<double>& g, Lattice c,
                      DyadicGrid::Dir dir) {
  auto at = [&](std::int64_t i, std::int64_t j) { return g[*grid.node_index({i, j})]; };
  switch (dir) {
    case DyadicGrid::East: return -(at(c.i + 1, c.j + 1) - at(c.i + 1, c.j));
    case DyadicGrid::North: return at(c.i + 1, c.j + 1) - at(c.i, c.j + 1);
    case DyadicGrid::West: return at(c.i, c.j + 1) - at(c.i, c.j);
    case DyadicGrid::South: return -(at(c.i + 1, c.j) - at(c.i, c.j));
  }
  return 0.0;
}

Lattice step(Lattice c, DyadicGrid::Dir dir) {
  switch (dir) {
    case DyadicGrid::East: return {c.i + 1, c.j};
    case DyadicGrid::North: return {c.i, c.j + 1};
    case DyadicGrid::West: return {c.i - 1, c.j};
    case DyadicGrid::South: return {c.i, c.j - 1};
  }
  return c;
}

std::size_t cell_nearest(const DyadicGrid& grid, Point z) {
  if (const auto c = grid.locate(z)) return *c;
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid.cell_count(); ++k) {
    const double d = std::norm(grid.cell_center(k) - z);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

constexpr DyadicGrid::Dir kDirs[] = {DyadicGrid::East, DyadicGrid::North, DyadicGrid::West,
                                     DyadicGrid::South};

}  // namespace

HarmonicConjugate harmonic_conjugate(const DyadicGrid& grid, const ScalarField& g) {
  if (g.values.size() != grid.node_count()) {
    throw Error(ErrorCode::MalformedInput, "field does not match the grid");
  }
  const std::size_t n_cells = grid.cell_count();
  const auto cells = grid.cells();

  HarmonicConjugate out;
  out.dual.assign(n_cells, 0.0);
  std::vector<std::uint8_t> seen(n_cells, 0);
  std::vector<std::int64_t> parent(n_cells, -1);

  auto fill_from = [&](std::size_t root) {
    ++out.components;
    out.dual[root] = 0.0;
    seen[root] = 1;
    std::deque<std::size_t> queue{root};
    while (!queue.empty()) {
      const std::size_t k = queue.front();
      queue.pop_front();
      for (auto dir : kDirs) {
        const auto nb = grid.cell_index(step(cells[k], dir));
        if (!nb || seen[*nb]) continue;
        out.dual[*nb] = out.dual[k] + conjugate_step(grid, g.values, cells[k], dir);
        parent[*nb] = static_cast<std::int64_t>(k);
        seen[*nb] = 1;
        queue.push_back(*nb);
      }
    }
  };
  fill_from(cell_nearest(grid, {0.0, 0.0}));
  for (std::size_t k = 0; k < n_cells; ++k) {
    if (!seen[k]) fill_from(k);
  }

  double defect = 0.0;
  for (std::size_t k = 0; k < n_cells; ++k) {
    for (auto dir : {DyadicGrid::East, DyadicGrid::North}) {
      const auto nb = grid.cell_index(step(cells[k], dir));
      if (!nb) continue;
      if (parent[*nb] == static_cast<std::int64_t>(k) || parent[k] == static_cast<std::int64_t>(*nb)) {
        continue;
      }
      const double mismatch =
          out.dual[k] + conjugate_step(grid, g.values, cells[k], dir) - out.dual[*nb];
      defect = std::max(defect, std::abs(mismatch));
    }
  }
  out.closure_residual = defect;

  double g_max = 0.0;
  for (double v : g.values) g_max = std::max(g_max, std::abs(v));
  if (defect > 1e-6 * (1.0 + g_max)) {
    throw Error(ErrorCode::ClosureFailure,
                "conjugate differential does not close (defect " + std::to_string(defect) + ")");
  }

  // Node value = mean over the adjacent cells of (centre value + integral of
  // the conjugate differential from the centre to the node), using each
  // cell's bilinear gradient. Exact for linear g.
  const double h = grid.spacing();
  out.primal.values.assign(grid.node_count(), 0.0);
  std::vector<int> hits(grid.node_count(), 0);
  for (std::size_t k = 0; k < n_cells; ++k) {
    const auto corners = grid.cell_corners(k);
    const double g00 = g.values[corners[0]], g10 = g.values[corners[1]];
    const double g11 = g.values[corners[2]], g01 = g.values[corners[3]];
    const double gx = ((g10 + g11) - (g00 + g01)) / (2.0 * h);
    const double gy = ((g01 + g11) - (g00 + g10)) / (2.0 * h);
    const Point centre = grid.cell_center(k);
    for (std::size_t n : corners) {
      const Point d = grid.node_position(n) - centre;
      out.primal.values[n] += out.dual[k] - gy * d.real() + gx * d.imag();
      ++hits[n];
    }
  }
  for (std::size_t n = 0; n < grid.node_count(); ++n) out.primal.values[n] /= hits[n];
  out.primal.residual = defect;
  return out;
}

ConformalMap::ConformalMap(std::shared_ptr<const DyadicGrid> grid, ScalarField g,
                           HarmonicConjugate conj)
    : grid_(std::move(grid)),
      g_(std::move(g)),
      conj_(std::move(conj.primal)),
      closure_residual_(conj.closure_residual) {
  const DyadicGrid& gr = *grid_;
  const std::size_t n_nodes = gr.node_count();
  const double hsp = gr.spacing();
  h_.resize(n_nodes);
  H_.resize(n_nodes);
  gx_.resize(n_nodes);
  gy_.resize(n_nodes);
  one_sided_.assign(n_nodes, 0);

  auto diff = [&](std::size_t n, DyadicGrid::Dir plus, DyadicGrid::Dir minus) {
    const std::int32_t a = gr.neighbor(n, plus), b = gr.neighbor(n, minus);
    const auto& v = g_.values;
    if (a != kNoNode && b != kNoNode) {
      return (v[static_cast<std::size_t>(a)] - v[static_cast<std::size_t>(b)]) / (2.0 * hsp);
    }
    one_sided_[n] = 1;
    if (a != kNoNode) return (v[static_cast<std::size_t>(a)] - v[n]) / hsp;
    if (b != kNoNode) return (v[n] - v[static_cast<std::size_t>(b)]) / hsp;
    return 0.0;
  };

  for (std::size_t n = 0; n < n_nodes; ++n) {
    h_[n] = std::exp(Complex{g_.values[n], conj_.values[n]});
    H_[n] = gr.node_position(n) * h_[n];
    gx_[n] = diff(n, DyadicGrid::East, DyadicGrid::West);
    gy_[n] = diff(n, DyadicGrid::North, DyadicGrid::South);
  }
  for (std::size_t n = 0; n < n_nodes; ++n) {
    max_derivative_ = std::max(max_derivative_, std::abs(node_derivative(n)));
  }
}

Complex ConformalMap::node_derivative(std::size_t node) const {
  const Point z = grid_->node_position(node);
  return h_[node] * (1.0 + z * Complex{gx_[node], -gy_[node]});
}

double interpolate(const DyadicGrid& grid, const std::vector<double>& values, Point z) {
  const Bilinear b = bilinear(grid, z);
  return blend(b, [&](std::size_t n) { return values[n]; });
}

ConformalMap assemble_map(std::shared_ptr<const DyadicGrid> grid, ScalarField g,
                          HarmonicConjugate conj) {
  const double offset = interpolate(*grid, conj.primal.values, {0.0, 0.0});
  for (double& v : conj.primal.values) v -= offset;
  for (double& v : conj.dual) v -= offset;
  return ConformalMap(std::move(grid), std::move(g), std::move(conj));
}

Complex eval_map(const ConformalMap& m, Point z) {
  const Bilinear b = bilinear(m.grid(), z);
  return blend(b, [&](std::size_t n) { return m.H()[n]; });
}

DerivativeSample eval_derivative(const ConformalMap& m, Point z) {
  const Bilinear b = bilinear(m.grid(), z);
  const double g = blend(b, [&](std::size_t n) { return m.g().values[n]; });
  const double gc = blend(b, [&](std::size_t n) { return m.conjugate().values[n]; });
  const double gx = blend(b, [&](std::size_t n) { return m.gx(n); });
  const double gy = blend(b, [&](std::size_t n) { return m.gy(n); });
  DerivativeSample out;
  out.value = std::exp(Complex{g, gc}) * (1.0 + z * Complex{gx, -gy});
  for (std::size_t n : b.corners) out.one_sided = out.one_sided || m.one_sided(n);
  return out;
}

ConformalMap construct_map(const Domain& domain, const MapBuildOptions& options) {
  auto grid = std::make_shared<const DyadicGrid>(build_grid(domain, options.level, options.shift));
  const BoundaryData data = boundary_data(*grid);
  ScalarField g = solve_dirichlet(*grid, data, {options.tol, std::nullopt});
  HarmonicConjugate conj = harmonic_conjugate(*grid, g);
  return assemble_map(std::move(grid), std::move(g), std::move(conj));
}

}  // namespace riemann
