#include "riemann/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "riemann/error.hpp"

namespace riemann {

namespace {

constexpr DyadicGrid::Dir kDirs[] = {DyadicGrid::East, DyadicGrid::North, DyadicGrid::West,
                                     DyadicGrid::South};

double neighbor_sum(const DyadicGrid& grid, const std::vector<double>& v, std::size_t n) {
  double s = 0.0;
  for (auto dir : kDirs) s += v[static_cast<std::size_t>(grid.neighbor(n, dir))];
  return s;
}

bool origin_inside(const DyadicGrid& grid) {
  const Point origin{0.0, 0.0};
  if (!grid.locate(origin)) return false;
  for (const auto& e : grid.boundary_edges()) {
    if (on_segment(grid.position(e.start), grid.position(e.end), origin)) return false;
  }
  return true;
}

}  // namespace

double BoundaryData::min() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < values.size(); ++n) {
    if (fixed[n]) m = std::min(m, values[n]);
  }
  return m;
}

double BoundaryData::max() const {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < values.size(); ++n) {
    if (fixed[n]) m = std::max(m, values[n]);
  }
  return m;
}

BoundaryData boundary_data(const DyadicGrid& grid, const std::function<double(Point)>& f,
                           std::string generator) {
  BoundaryData data;
  data.values.assign(grid.node_count(), 0.0);
  data.fixed.assign(grid.node_count(), 0);
  data.generator = std::move(generator);
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    if (grid.is_interior(n)) continue;
    data.fixed[n] = 1;
    data.values[n] = f(grid.node_position(n));
  }
  return data;
}

BoundaryData boundary_data(const DyadicGrid& grid) {
  if (!origin_inside(grid)) {
    throw Error(ErrorCode::OriginOnBoundary,
                "origin is not strictly inside S_N at level " + std::to_string(grid.level()));
  }
  return boundary_data(
      grid, [](Point p) { return -std::log(std::abs(p)); }, "-ln|z|");
}

double mean_value_residual(const DyadicGrid& grid, const BoundaryData& data,
                           const std::vector<double>& values) {
  double worst = 0.0;
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    if (data.is_fixed(n)) continue;
    worst = std::max(worst, std::abs(0.25 * neighbor_sum(grid, values, n) - values[n]));
  }
  return worst;
}

namespace {

void check_shape(const DyadicGrid& grid, const BoundaryData& data) {
  if (data.values.size() != grid.node_count() || data.fixed.size() != grid.node_count()) {
    throw Error(ErrorCode::MalformedInput, "boundary data does not match the grid");
  }
}

}  // namespace

ScalarField solve_dirichlet(const DyadicGrid& grid, const BoundaryData& data,
                            const SolveOptions& options) {
  const std::size_t node_count = grid.node_count();
  check_shape(grid, data);
  if (!(options.tol > 0.0) || !std::isfinite(options.tol)) {
    throw Error(ErrorCode::MalformedInput, "solver tolerance must be positive");
  }

  std::vector<std::size_t> unknowns;
  for (std::size_t n = 0; n < node_count; ++n) {
    if (!data.is_fixed(n)) unknowns.push_back(n);
  }
  if (options.ordering_seed) {
    std::mt19937_64 rng(*options.ordering_seed);
    std::shuffle(unknowns.begin(), unknowns.end(), rng);
  }
  const std::size_t m = unknowns.size();

  // slot[n] = position of node n among the unknowns, or -1 when fixed.
  std::vector<std::int64_t> slot(node_count, -1);
  for (std::size_t k = 0; k < m; ++k) slot[unknowns[k]] = static_cast<std::int64_t>(k);

  std::vector<double> rhs(m, 0.0);
  std::vector<std::array<std::int64_t, 4>> coupling(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t n = unknowns[k];
    for (int d = 0; d < 4; ++d) {
      const auto nb = static_cast<std::size_t>(grid.neighbor(n, kDirs[d]));
      coupling[k][d] = slot[nb];
      if (slot[nb] < 0) rhs[k] += data.values[nb];
    }
  }
  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t k = 0; k < m; ++k) {
      double acc = 4.0 * x[k];
      for (std::int64_t c : coupling[k]) {
        if (c >= 0) acc -= x[static_cast<std::size_t>(c)];
      }
      y[k] = acc;
    }
  };
  auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
  };
  auto max_abs = [](const std::vector<double>& a) {
    double w = 0.0;
    for (double v : a) w = std::max(w, std::abs(v));
    return w;
  };

  const double threshold = options.tol * (data.max() - data.min() + 1.0);
  const std::size_t cap = 50 * node_count;

  std::vector<double> x(m, 0.0), r = rhs, p = rhs, ap(m);
  double rr = dot(r, r);
  std::size_t it = 0;
  while (0.25 * max_abs(r) > threshold) {
    if (it >= cap) {
      throw Error(ErrorCode::NoConvergence,
                  "conjugate gradient hit the iteration cap of " + std::to_string(cap));
    }
    apply(p, ap);
    const double alpha = rr / dot(p, ap);
    for (std::size_t k = 0; k < m; ++k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * ap[k];
    }
    ++it;
    double rr_next = dot(r, r);
    if (0.25 * max_abs(r) <= threshold) {
      // Confirm against the true residual before stopping.
      apply(x, ap);
      for (std::size_t k = 0; k < m; ++k) r[k] = rhs[k] - ap[k];
      rr_next = dot(r, r);
      if (0.25 * max_abs(r) <= threshold) break;
      p = r;
      rr = rr_next;
      continue;
    }
    const double beta = rr_next / rr;
    for (std::size_t k = 0; k < m; ++k) p[k] = r[k] + beta * p[k];
    rr = rr_next;
  }

  ScalarField out;
  out.values.assign(node_count, 0.0);
  for (std::size_t n = 0; n < node_count; ++n) {
    if (data.is_fixed(n)) out.values[n] = data.values[n];
  }
  for (std::size_t k = 0; k < m; ++k) out.values[unknowns[k]] = x[k];
  out.residual = mean_value_residual(grid, data, out.values);
  out.iterations = it;
  return out;
}

PerronIteration::PerronIteration(const DyadicGrid& grid, const BoundaryData& data)
    : grid_(&grid), data_(&data) {
  check_shape(grid, data);
  const double floor_value = data.min();
  values_.assign(grid.node_count(), floor_value);
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    if (data.is_fixed(n)) {
      values_[n] = data.values[n];
    } else {
      free_.push_back(n);
    }
  }
}

bool PerronIteration::sweep() {
  bool changed = false;
  for (std::size_t n : free_) {
    const double mean = 0.25 * neighbor_sum(*grid_, values_, n);
    if (mean > values_[n]) {
      values_[n] = mean;
      changed = true;
    }
  }
  ++sweeps_;
  return changed;
}

ScalarField PerronIteration::field() const {
  ScalarField f;
  f.values = values_;
  f.residual = mean_value_residual(*grid_, *data_, values_);
  f.iterations = sweeps_;
  return f;
}

ScalarField perron_iterate(const DyadicGrid& grid, const BoundaryData& data, std::size_t sweeps) {
  PerronIteration perron(grid, data);
  for (std::size_t k = 0; k < sweeps; ++k) {
    if (!perron.sweep()) break;
  }
  return perron.field();
}

double dirichlet_energy(const DyadicGrid& grid, const std::vector<double>& values) {
  double energy = 0.0;
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    for (auto dir : {DyadicGrid::East, DyadicGrid::North}) {
      const std::int32_t nb = grid.neighbor(n, dir);
      if (nb == kNoNode) continue;
      const double d = values[static_cast<std::size_t>(nb)] - values[n];
      energy += d * d;
    }
  }
  return energy;
}

MaxPrincipleReport check_max_principle(const DyadicGrid& grid, const ScalarField& f) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  MaxPrincipleReport rep{inf, -inf, inf, -inf, 10.0 * f.residual, false};
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    const double v = f.values[n];
    if (grid.is_interior(n)) {
      rep.interior_min = std::min(rep.interior_min, v);
      rep.interior_max = std::max(rep.interior_max, v);
    } else {
      rep.boundary_min = std::min(rep.boundary_min, v);
      rep.boundary_max = std::max(rep.boundary_max, v);
    }
  }
  if (rep.interior_min > rep.interior_max) {
    // No interior nodes: nothing can violate the principle.
    rep.interior_min = rep.boundary_min;
    rep.interior_max = rep.boundary_max;
  }
  rep.pass = rep.interior_min >= rep.boundary_min - rep.slack &&
             rep.interior_max <= rep.boundary_max + rep.slack;
  return rep;
}

PuncturedDiscResult punctured_disc(int level, double tol) {
  const DyadicGrid grid = build_grid(make_disc({0.0, 0.0}, 1.0), level, 0.0);
  BoundaryData data = boundary_data(grid, [](Point) { return 1.0; }, "rim=1, origin pinned to 0");
  const auto origin = grid.node_index({0, 0});
  if (!origin || !grid.is_interior(*origin)) {
    throw Error(ErrorCode::OriginOnBoundary, "origin is not an interior node");
  }
  data.pin(*origin, 0.0);

  PuncturedDiscResult res;
  res.level = level;
  res.field = solve_dirichlet(grid, data, {tol, std::nullopt});
  const std::size_t probe = grid.nearest_node({0.5, 0.0});
  res.probe = grid.node_position(probe);
  res.value = res.field.values[probe];
  const double log_h = std::log(dyadic_spacing(level));
  res.predicted = (std::log(std::abs(res.probe)) - log_h) / -log_h;
  return res;
}

}  // namespace riemann
