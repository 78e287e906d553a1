#include <algorithm>
#include <cmath>
#include <limits>

#include "riemann/error.hpp"
#include "riemann/geometry.hpp"

namespace riemann {

namespace {

bool row_major_less(const Lattice& a, const Lattice& b) {
  return a.j != b.j ? a.j < b.j : a.i < b.i;
}

}  // namespace

double dyadic_spacing(int level) { return std::ldexp(1.0, -level); }

double default_shift(int level) { return std::ldexp(1.0, -level - 4); }

bool contains_square(const Domain& d, Point lower_left, double side) {
  const Point lo = lower_left;
  const Point hi = lower_left + Point{side, side};
  const double half = 0.5 * side;
  const Point probes[] = {
      lo,
      {hi.real(), lo.imag()},
      hi,
      {lo.real(), hi.imag()},
      {lo.real() + half, lo.imag()},
      {hi.real(), lo.imag() + half},
      {lo.real() + half, hi.imag()},
      {lo.real(), lo.imag() + half},
  };
  for (const Point& p : probes) {
    if (!contains(d, p)) return false;
  }
  if (d.is_polygon()) {
    const auto& v = d.polygon().vertices;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (segment_meets_box(v[k], v[(k + 1) % v.size()], lo, hi)) return false;
    }
  }
  return true;
}

DyadicGrid build_grid(const Domain& d, int level, double shift) {
  if (level < 1) throw Error(ErrorCode::MalformedInput, "grid level must be >= 1");
  const double h = dyadic_spacing(level);
  if (!(shift >= 0.0) || !(shift < h)) {
    throw Error(ErrorCode::MalformedInput, "grid shift must satisfy 0 <= shift < 2^-N");
  }
  const auto [lo, hi] = d.bounds();
  const auto i0 = static_cast<std::int64_t>(std::floor((lo.real() - shift) / h)) - 1;
  const auto i1 = static_cast<std::int64_t>(std::ceil((hi.real() - shift) / h)) + 1;
  const auto j0 = static_cast<std::int64_t>(std::floor((lo.imag() - shift) / h)) - 1;
  const auto j1 = static_cast<std::int64_t>(std::ceil((hi.imag() - shift) / h)) + 1;

  DyadicGrid grid;
  grid.level_ = level;
  grid.shift_ = shift;
  grid.spacing_ = h;
  for (std::int64_t j = j0; j < j1; ++j) {
    for (std::int64_t i = i0; i < i1; ++i) {
      const Lattice c{i, j};
      if (contains_square(d, grid.position(c), h)) grid.cells_.push_back(c);
    }
  }
  if (grid.cells_.empty()) {
    throw Error(ErrorCode::EmptyGrid,
                "no dyadic square of level " + std::to_string(level) + " fits in the domain");
  }
  grid.finalize();
  return grid;
}

DyadicGrid grid_from_cells(std::vector<Lattice> cells, int level, double shift) {
  if (cells.empty()) throw Error(ErrorCode::EmptyGrid, "empty cell set");
  DyadicGrid grid;
  grid.level_ = level;
  grid.shift_ = shift;
  grid.spacing_ = dyadic_spacing(level);
  std::sort(cells.begin(), cells.end(), row_major_less);
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  grid.cells_ = std::move(cells);
  grid.finalize();
  return grid;
}

void DyadicGrid::finalize() {
  std::int64_t i0 = std::numeric_limits<std::int64_t>::max(), j0 = i0;
  std::int64_t i1 = std::numeric_limits<std::int64_t>::min(), j1 = i1;
  for (const Lattice& c : cells_) {
    i0 = std::min(i0, c.i);
    j0 = std::min(j0, c.j);
    i1 = std::max(i1, c.i + 1);
    j1 = std::max(j1, c.j + 1);
  }
  origin_ = {i0, j0};
  width_ = i1 - i0 + 1;
  height_ = j1 - j0 + 1;
  const auto slots = static_cast<std::size_t>(width_ * height_);
  cell_lookup_.assign(slots, kNoNode);
  node_lookup_.assign(slots, kNoNode);
  auto slot = [&](Lattice p) { return static_cast<std::size_t>((p.j - j0) * width_ + (p.i - i0)); };

  for (std::size_t k = 0; k < cells_.size(); ++k) cell_lookup_[slot(cells_[k])] = static_cast<std::int32_t>(k);

  std::vector<std::uint8_t> count(slots, 0);
  for (const Lattice& c : cells_) {
    ++count[slot({c.i, c.j})];
    ++count[slot({c.i + 1, c.j})];
    ++count[slot({c.i, c.j + 1})];
    ++count[slot({c.i + 1, c.j + 1})];
  }
  // Slot order is already row-major in (j, i).
  nodes_.clear();
  for (std::int64_t j = j0; j <= j1; ++j) {
    for (std::int64_t i = i0; i <= i1; ++i) {
      const std::size_t s = slot({i, j});
      if (count[s] == 0) continue;
      node_lookup_[s] = static_cast<std::int32_t>(nodes_.size());
      nodes_.push_back({i, j});
      multiplicity_.push_back(count[s]);
      kinds_.push_back(count[s] == 4 ? NodeKind::Interior : NodeKind::Boundary);
    }
  }

  // Neighbours along cell edges only.
  neighbors_.assign(4 * nodes_.size(), kNoNode);
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    const auto [i, j] = nodes_[n];
    auto link = [&](Dir dir, Lattice other, Lattice cell_a, Lattice cell_b) {
      if (has_cell(cell_a) || has_cell(cell_b)) {
        neighbors_[4 * n + dir] = static_cast<std::int32_t>(*node_index(other));
      }
    };
    link(East, {i + 1, j}, {i, j}, {i, j - 1});
    link(North, {i, j + 1}, {i, j}, {i - 1, j});
    link(West, {i - 1, j}, {i - 1, j}, {i - 1, j - 1});
    link(South, {i, j - 1}, {i, j - 1}, {i - 1, j - 1});
  }

  boundary_edges_.clear();
  for (const Lattice& c : cells_) {
    const Lattice ll{c.i, c.j}, lr{c.i + 1, c.j}, ur{c.i + 1, c.j + 1}, ul{c.i, c.j + 1};
    if (!has_cell({c.i, c.j - 1})) boundary_edges_.push_back({ll, lr});
    if (!has_cell({c.i + 1, c.j})) boundary_edges_.push_back({lr, ur});
    if (!has_cell({c.i, c.j + 1})) boundary_edges_.push_back({ur, ul});
    if (!has_cell({c.i - 1, c.j})) boundary_edges_.push_back({ul, ll});
  }
}

std::optional<std::size_t> DyadicGrid::node_index(Lattice p) const {
  const std::int64_t di = p.i - origin_.i, dj = p.j - origin_.j;
  if (di < 0 || dj < 0 || di >= width_ || dj >= height_) return std::nullopt;
  const std::int32_t k = node_lookup_[static_cast<std::size_t>(dj * width_ + di)];
  if (k == kNoNode) return std::nullopt;
  return static_cast<std::size_t>(k);
}

std::optional<std::size_t> DyadicGrid::cell_index(Lattice c) const {
  const std::int64_t di = c.i - origin_.i, dj = c.j - origin_.j;
  if (di < 0 || dj < 0 || di >= width_ || dj >= height_) return std::nullopt;
  const std::int32_t k = cell_lookup_[static_cast<std::size_t>(dj * width_ + di)];
  if (k == kNoNode) return std::nullopt;
  return static_cast<std::size_t>(k);
}

std::array<std::size_t, 4> DyadicGrid::cell_corners(std::size_t cell) const {
  const Lattice c = cells_[cell];
  return {*node_index({c.i, c.j}), *node_index({c.i + 1, c.j}), *node_index({c.i + 1, c.j + 1}),
          *node_index({c.i, c.j + 1})};
}

std::optional<std::size_t> DyadicGrid::locate(Point p) const {
  constexpr double kTol = 1e-9;  // in lattice units
  const double u = (p.real() - shift_) / spacing_;
  const double v = (p.imag() - shift_) / spacing_;
  if (!(std::abs(u) < 1e15) || !(std::abs(v) < 1e15)) return std::nullopt;
  const auto fu = static_cast<std::int64_t>(std::floor(u));
  const auto fv = static_cast<std::int64_t>(std::floor(v));
  for (std::int64_t dj = -1; dj <= 1; ++dj) {
    for (std::int64_t di = -1; di <= 1; ++di) {
      const Lattice c{fu + di, fv + dj};
      const auto k = cell_index(c);
      if (!k) continue;
      const double ru = u - static_cast<double>(c.i);
      const double rv = v - static_cast<double>(c.j);
      if (ru >= -kTol && ru <= 1.0 + kTol && rv >= -kTol && rv <= 1.0 + kTol) return k;
    }
  }
  return std::nullopt;
}

std::size_t DyadicGrid::nearest_node(Point p) const {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    const double d = std::norm(node_position(n) - p);
    if (d < best_d) {
      best_d = d;
      best = n;
    }
  }
  return best;
}

double DyadicGrid::distance_to(Point p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Lattice& c : cells_) {
    const Point lo = position(c);
    const double dx = std::max({lo.real() - p.real(), 0.0, p.real() - lo.real() - spacing_});
    const double dy = std::max({lo.imag() - p.imag(), 0.0, p.imag() - lo.imag() - spacing_});
    best = std::min(best, std::hypot(dx, dy));
  }
  return best;
}

std::vector<OrientedEdge> boundary_edges(const DyadicGrid& grid) {
  const auto edges = grid.boundary_edges();
  return {edges.begin(), edges.end()};
}

}  // namespace riemann
