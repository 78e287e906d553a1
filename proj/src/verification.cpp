#include "riemann/verification.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <random>

namespace riemann {

namespace {

constexpr int kEdgeSamples = 8;
constexpr int kMaxEdgeSamples = 64;
constexpr double kIntegralSlack = 0.1;
constexpr double kNewtonTol = 1e-6;
constexpr int kNewtonSteps = 50;

Point lerp(Point a, Point b, double t) { return a + (b - a) * t; }

}  // namespace

MapFamily::MapFamily(Domain domain, int level, double tol)
    : domain_(std::move(domain)), level_(level), tol_(tol) {}

std::shared_ptr<const ConformalMap> MapFamily::at(double shift) {
  auto it = cache_.find(shift);
  if (it != cache_.end()) return it->second;
  auto m = std::make_shared<const ConformalMap>(construct_map(domain_, {level_, shift, tol_}));
  cache_.emplace(shift, m);
  return m;
}

MapRebuilder MapFamily::rebuilder() {
  return [this](double shift) { return at(shift); };
}

BoundaryModulus boundary_modulus_report(const ConformalMap& m) {
  const DyadicGrid& grid = m.grid();
  BoundaryModulus out;
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& e : grid.boundary_edges()) {
    const Point a = grid.position(e.start), b = grid.position(e.end);
    for (int k = 0; k < kEdgeSamples; ++k) {
      const double dev = std::abs(std::abs(eval_map(m, lerp(a, b, double(k) / kEdgeSamples))) - 1.0);
      out.max = std::max(out.max, dev);
      sum += dev;
      ++count;
    }
  }
  out.mean = count ? sum / static_cast<double>(count) : 0.0;
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    if (!grid.is_interior(n)) out.node_max = std::max(out.node_max, std::abs(std::abs(m.H()[n]) - 1.0));
  }
  return out;
}

Winding boundary_winding(const ConformalMap& m, Complex w) {
  const DyadicGrid& grid = m.grid();
  Winding out;
  out.clearance = std::numeric_limits<double>::infinity();
  double total = 0.0;
  std::vector<Complex> samples;
  for (const auto& e : grid.boundary_edges()) {
    const Point a = grid.position(e.start), b = grid.position(e.end);
    for (int per_edge = kEdgeSamples;; per_edge *= 2) {
      samples.clear();
      for (int k = 0; k <= per_edge; ++k) samples.push_back(eval_map(m, lerp(a, b, double(k) / per_edge)) - w);
      bool coarse = false;
      for (int k = 0; k < per_edge; ++k) {
        if (std::abs(std::arg(samples[k + 1] / samples[k])) > 0.5 * std::numbers::pi) coarse = true;
      }
      if (!coarse || per_edge >= kMaxEdgeSamples) break;
    }
    for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
      total += std::arg(samples[k + 1] / samples[k]);
    }
    for (const Complex& s : samples) out.clearance = std::min(out.clearance, std::abs(s));
  }
  out.raw = total / (2.0 * std::numbers::pi);
  return out;
}

namespace {

struct Attempt {
  double shift = 0.0;
  Winding winding;
  double threshold = 0.0;
  bool clean() const { return winding.clearance >= threshold; }
};

Attempt attempt_count(const ConformalMap& m, Complex w) {
  const DyadicGrid& grid = m.grid();
  const double margin = 2.0 * boundary_modulus_report(m).max;
  const double r = std::abs(w);
  double rim_min = std::numeric_limits<double>::infinity(), rim_max = 0.0;
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    if (grid.is_interior(n)) continue;
    rim_min = std::min(rim_min, std::abs(m.H()[n]));
    rim_max = std::max(rim_max, std::abs(m.H()[n]));
  }
  const bool inner_ok = r < 1.0 - margin && rim_min - r > margin;
  const bool outer_ok = r > 1.0 + margin && r - rim_max > margin;
  if (!inner_ok && !outer_ok) {
    throw Error(ErrorCode::TooCoarse, "probe lies within the boundary-modulus margin " +
                                          std::to_string(margin) + "; increase N");
  }
  Attempt a;
  a.shift = grid.shift();
  a.winding = boundary_winding(m, w);
  a.threshold = 10.0 * grid.spacing() * m.max_derivative();
  return a;
}

}  // namespace

PreimageCount count_preimages(const ConformalMap& m, Complex w, const CountOptions& options) {
  Attempt best = attempt_count(m, w);
  int attempts = 1;
  bool shifted = false;
  if (!best.clean() && options.rebuild) {
    // Redo the construction on shifted grids; keep the first clean attempt,
    // or else the one with the most clearance.
    shifted = true;
    std::optional<Attempt> chosen;
    double shift = default_shift(m.grid().level());
    for (int k = 0; k < options.max_shift_attempts; ++k, shift *= 0.5) {
      const Attempt a = attempt_count(*options.rebuild(shift), w);
      ++attempts;
      if (!chosen || a.winding.clearance > chosen->winding.clearance) chosen = a;
      if (a.clean()) break;
    }
    if (chosen) best = *chosen;
  }

  PreimageCount out;
  out.w = w;
  out.level = m.grid().level();
  out.shift = best.shift;
  out.raw = best.winding.raw;
  out.count = static_cast<int>(std::lround(best.winding.raw));
  out.distance = std::abs(out.raw - out.count);
  out.clearance = best.winding.clearance;
  out.hazard_threshold = best.threshold;
  out.shifted = shifted;
  out.hazard_unresolved = !best.clean();
  out.attempts = attempts;
  if (out.distance > kIntegralSlack) {
    throw Error(ErrorCode::Indeterminate,
                "winding " + std::to_string(out.raw) + " is not within 0.1 of an integer");
  }
  return out;
}

std::vector<int> rim_distance(const DyadicGrid& grid) {
  std::vector<int> hops(grid.node_count(), -1);
  std::deque<std::size_t> queue;
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    if (!grid.is_interior(n)) {
      hops[n] = 0;
      queue.push_back(n);
    }
  }
  while (!queue.empty()) {
    const std::size_t n = queue.front();
    queue.pop_front();
    for (auto dir : {DyadicGrid::East, DyadicGrid::North, DyadicGrid::West, DyadicGrid::South}) {
      const std::int32_t nb = grid.neighbor(n, dir);
      if (nb == kNoNode || hops[static_cast<std::size_t>(nb)] >= 0) continue;
      hops[static_cast<std::size_t>(nb)] = hops[n] + 1;
      queue.push_back(static_cast<std::size_t>(nb));
    }
  }
  return hops;
}

double conformality_residual(const DyadicGrid& grid, const std::vector<Complex>& samples,
                             double scale, double depth) {
  const double h = grid.spacing();
  const auto hops = rim_distance(grid);
  auto residual_over = [&](int min_hops) {
    double worst = -1.0;
    for (std::size_t k = 0; k < grid.cell_count(); ++k) {
      const auto c = grid.cell_corners(k);
      if (!std::all_of(c.begin(), c.end(), [&](std::size_t n) { return hops[n] >= min_hops; })) {
        continue;
      }
      const Complex f00 = samples[c[0]], f10 = samples[c[1]], f11 = samples[c[2]], f01 = samples[c[3]];
      const Complex fx = ((f10 + f11) - (f00 + f01)) / (2.0 * h);
      const Complex fy = ((f01 + f11) - (f00 + f10)) / (2.0 * h);
      worst = std::max(worst, std::abs(fx.real() - fy.imag()) + std::abs(fy.real() + fx.imag()));
    }
    return worst;
  };
  const int min_hops = std::max(1, static_cast<int>(std::ceil(depth / h - 1e-9)));
  double worst = residual_over(min_hops);
  if (worst < 0.0) worst = residual_over(1);  // grid too coarse for the requested depth
  worst = std::max(worst, 0.0);
  return scale > 0.0 ? worst / scale : worst;
}

double conformality_residual(const ConformalMap& m) {
  return conformality_residual(m.grid(), m.H(), m.max_derivative());
}

InverseResult inverse_map(const ConformalMap& m, Complex w) {
  const DyadicGrid& grid = m.grid();
  std::size_t start = 0;
  double start_r = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    const double r = std::abs(m.H()[n] - w);
    if (r < start_r) {
      start_r = r;
      start = n;
    }
  }
  Point z = grid.node_position(start);
  Point best = z;
  double best_r = start_r;
  for (int it = 0; it <= kNewtonSteps; ++it) {
    const Complex residual = eval_map(m, z) - w;
    const double r = std::abs(residual);
    if (r < best_r) {
      best_r = r;
      best = z;
    }
    if (r <= kNewtonTol) return {z, r, it};
    if (it == kNewtonSteps) break;
    Complex step = residual / eval_derivative(m, z).value;
    int halvings = 0;
    while (!grid.locate(z - step) && halvings < 30) {
      step *= 0.5;
      ++halvings;
    }
    if (!grid.locate(z - step)) break;
    z -= step;
  }
  throw NewtonStalled(best, best_r);
}

std::vector<Complex> sweep_probes(double radius, std::size_t probes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Complex> out;
  out.reserve(probes);
  for (std::size_t k = 0; k < probes; ++k) {
    const double rho = radius * std::sqrt(unit(rng));
    const double theta = 2.0 * std::numbers::pi * unit(rng);
    out.push_back(std::polar(rho, theta));
  }
  return out;
}

SweepSummary bijectivity_sweep(const ConformalMap& m, double radius, std::size_t probes,
                               std::uint64_t seed, const CountOptions& options) {
  SweepSummary out;
  out.radius = radius;
  out.probes = probes;
  out.seed = seed;
  const auto ws = sweep_probes(radius, probes, seed);
  std::size_t ok = 0;
  for (std::size_t k = 0; k < ws.size(); ++k) {
    try {
      PreimageCount c = count_preimages(m, ws[k], options);
      if (c.count == 1) {
        ++ok;
      } else {
        out.exceptions.push_back(k);
      }
      out.counts.push_back(c);
    } catch (const Error& e) {
      out.failures.push_back({k, ws[k], e.code(), e.what()});
      out.exceptions.push_back(k);
    }
  }
  out.ok_fraction = probes ? static_cast<double>(ok) / static_cast<double>(probes) : 0.0;

  for (int k = 0; k < 8; ++k) {
    OntoWitness witness;
    witness.w = std::polar(radius, 2.0 * std::numbers::pi * k / 8.0);
    try {
      const InverseResult inv = inverse_map(m, witness.w);
      witness.z = inv.z;
      witness.residual = inv.residual;
      witness.found = m.grid().locate(inv.z).has_value();
    } catch (const NewtonStalled& e) {
      witness.z = e.best();
      witness.residual = e.residual();
    }
    out.onto.push_back(witness);
  }
  return out;
}

VerificationReport verify_map(MapFamily& family, double shift, double radius, std::size_t probes,
                              std::uint64_t seed) {
  const auto m = family.at(shift);
  CountOptions options;
  options.rebuild = family.rebuilder();

  VerificationReport rep;
  rep.level = family.level();
  rep.shift = shift;
  std::vector<Complex> fixed{{0.0, 0.0}};
  for (int k = 0; k < 4; ++k) fixed.push_back(std::polar(1.1, 0.5 * std::numbers::pi * k));
  for (std::size_t k = 0; k < fixed.size(); ++k) {
    try {
      rep.probes.push_back(count_preimages(*m, fixed[k], options));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Indeterminate) rep.indeterminate = true;
      rep.failures.push_back({k, fixed[k], e.code(), e.what()});
    }
  }
  rep.boundary = boundary_modulus_report(*m);
  rep.cr_residual = conformality_residual(*m);
  rep.sweep = bijectivity_sweep(*m, radius, probes, seed, options);
  for (const auto& f : rep.sweep.failures) {
    if (f.code == ErrorCode::Indeterminate) rep.indeterminate = true;
  }
  rep.probes.insert(rep.probes.end(), rep.sweep.counts.begin(), rep.sweep.counts.end());
  return rep;
}

}  // namespace riemann
