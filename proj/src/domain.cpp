#include "riemann/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "riemann/error.hpp"

namespace riemann {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedSpec: return "MalformedSpec";
    case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::EmptyInterior: return "EmptyInterior";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::OriginOnBoundary: return "OriginOnBoundary";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::QTooClose: return "QTooClose";
    case ErrorCode::MonodromyDetected: return "MonodromyDetected";
    case ErrorCode::ClosureFailure: return "ClosureFailure";
    case ErrorCode::OutsideGrid: return "OutsideGrid";
    case ErrorCode::TooCoarse: return "TooCoarse";
    case ErrorCode::Indeterminate: return "Indeterminate";
    case ErrorCode::NewtonStalled: return "NewtonStalled";
    case ErrorCode::MalformedInput: return "MalformedInput";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// predicates

double signed_area(std::span<const Point> ring) {
  double twice = 0.0;
  for (std::size_t k = 0; k < ring.size(); ++k) {
    const Point a = ring[k];
    const Point b = ring[(k + 1) % ring.size()];
    twice += a.real() * b.imag() - b.real() * a.imag();
  }
  return 0.5 * twice;
}

int orientation(Point a, Point b, Point c) {
  const double det = (b.real() - a.real()) * (c.imag() - a.imag()) -
                     (b.imag() - a.imag()) * (c.real() - a.real());
  return (det > 0.0) - (det < 0.0);
}

bool on_segment(Point a, Point b, Point p) {
  if (orientation(a, b, p) != 0) return false;
  return std::min(a.real(), b.real()) <= p.real() && p.real() <= std::max(a.real(), b.real()) &&
         std::min(a.imag(), b.imag()) <= p.imag() && p.imag() <= std::max(a.imag(), b.imag());
}

bool segments_intersect(Point a, Point b, Point c, Point d) {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  return on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) || on_segment(c, d, b);
}

bool segment_meets_box(Point a, Point b, Point lo, Point hi) {
  auto inside = [&](Point p) {
    return lo.real() <= p.real() && p.real() <= hi.real() && lo.imag() <= p.imag() &&
           p.imag() <= hi.imag();
  };
  if (inside(a) || inside(b)) return true;
  const Point c0 = lo;
  const Point c1{hi.real(), lo.imag()};
  const Point c2 = hi;
  const Point c3{lo.real(), hi.imag()};
  return segments_intersect(a, b, c0, c1) || segments_intersect(a, b, c1, c2) ||
         segments_intersect(a, b, c2, c3) || segments_intersect(a, b, c3, c0);
}

bool is_simple(std::span<const Point> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return false;
  for (std::size_t k = 0; k < n; ++k) {
    if (ring[k] == ring[(k + 1) % n]) return false;
  }
  for (std::size_t e = 0; e < n; ++e) {
    const Point a = ring[e];
    const Point b = ring[(e + 1) % n];
    for (std::size_t f = e + 1; f < n; ++f) {
      const Point c = ring[f];
      const Point d = ring[(f + 1) % n];
      const bool next = (f == e + 1);
      const bool wrap = (e == 0 && f == n - 1);
      if (next) {
        // Shared vertex b == c; only a fold back along the same line counts.
        if (on_segment(a, b, d) || on_segment(c, d, a)) return false;
      } else if (wrap) {
        // Shared vertex a == d.
        if (on_segment(a, b, c) || on_segment(c, d, b)) return false;
      } else if (segments_intersect(a, b, c, d)) {
        return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Domain

std::pair<Point, Point> Domain::bounds() const {
  if (is_disc()) {
    const auto& c = disc();
    return {c.center - Point{c.radius, c.radius}, c.center + Point{c.radius, c.radius}};
  }
  const auto& v = polygon().vertices;
  double x0 = v.front().real(), x1 = x0, y0 = v.front().imag(), y1 = y0;
  for (const Point& p : v) {
    x0 = std::min(x0, p.real());
    x1 = std::max(x1, p.real());
    y0 = std::min(y0, p.imag());
    y1 = std::max(y1, p.imag());
  }
  return {{x0, y0}, {x1, y1}};
}

Domain make_polygon(std::vector<Point> vertices) {
  if (vertices.size() < 3) {
    throw Error(ErrorCode::DegenerateGeometry, "polygon needs at least 3 vertices");
  }
  for (const Point& p : vertices) {
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) {
      throw Error(ErrorCode::DegenerateGeometry, "non-finite vertex coordinate");
    }
  }
  if (!is_simple(vertices)) {
    throw Error(ErrorCode::DegenerateGeometry, "polygon is self-intersecting");
  }
  if (!(signed_area(vertices) > 0.0)) {
    throw Error(ErrorCode::DegenerateGeometry, "polygon is not counterclockwise");
  }
  return Domain{Polygon{std::move(vertices)}, {0.0, 0.0}};
}

Domain make_disc(Point center, double radius) {
  if (!std::isfinite(center.real()) || !std::isfinite(center.imag()) || !std::isfinite(radius)) {
    throw Error(ErrorCode::DegenerateGeometry, "non-finite disc parameters");
  }
  if (!(radius > 0.0)) throw Error(ErrorCode::DegenerateGeometry, "disc radius must be positive");
  return Domain{Disc{center, radius}, {0.0, 0.0}};
}

namespace {

Point parse_point(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorCode::MalformedSpec, "expected a coordinate pair [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

Domain load_domain(const nlohmann::json& spec) {
  if (!spec.is_object() || !spec.contains("type") || !spec["type"].is_string()) {
    throw Error(ErrorCode::MalformedSpec, "domain spec must be an object with a string \"type\"");
  }
  const auto type = spec["type"].get<std::string>();
  if (type == "polygon") {
    if (!spec.contains("vertices") || !spec["vertices"].is_array()) {
      throw Error(ErrorCode::MalformedSpec, "polygon spec needs a \"vertices\" array");
    }
    std::vector<Point> vertices;
    for (const auto& v : spec["vertices"]) vertices.push_back(parse_point(v));
    return make_polygon(std::move(vertices));
  }
  if (type == "disc") {
    if (!spec.contains("center") || !spec.contains("radius") || !spec["radius"].is_number()) {
      throw Error(ErrorCode::MalformedSpec, "disc spec needs \"center\" and numeric \"radius\"");
    }
    return make_disc(parse_point(spec["center"]), spec["radius"].get<double>());
  }
  throw Error(ErrorCode::MalformedSpec, "unknown domain type '" + type + "'");
}

Domain load_domain_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedSpec, e.what());
  }
  return load_domain(j);
}

Domain load_domain_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedSpec, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_domain_text(buf.str());
}

nlohmann::json to_json(const Domain& d) {
  nlohmann::json j;
  const Point t = d.translation;
  if (d.is_disc()) {
    const Point c = d.to_original(d.disc().center);
    j = {{"type", "disc"}, {"center", {c.real(), c.imag()}}, {"radius", d.disc().radius}};
  } else {
    nlohmann::json verts = nlohmann::json::array();
    for (const Point& p : d.polygon().vertices) {
      const Point q = d.to_original(p);
      verts.push_back({q.real(), q.imag()});
    }
    j = {{"type", "polygon"}, {"vertices", verts}};
  }
  j["translation"] = {t.real(), t.imag()};
  return j;
}

bool contains(const Domain& d, Point p) {
  if (d.is_disc()) {
    const auto& c = d.disc();
    return std::norm(p - c.center) < c.radius * c.radius;
  }
  const auto& v = d.polygon().vertices;
  const std::size_t n = v.size();
  bool inside = false;
  for (std::size_t k = 0; k < n; ++k) {
    const Point a = v[k];
    const Point b = v[(k + 1) % n];
    if (on_segment(a, b, p)) return false;
    // Half-open rule: an edge counts when it straddles the horizontal line
    // through p with its lower endpoint included and upper excluded.
    if (a.imag() <= p.imag() && p.imag() < b.imag()) {
      if (orientation(a, b, p) > 0) inside = !inside;
    } else if (b.imag() <= p.imag() && p.imag() < a.imag()) {
      if (orientation(a, b, p) < 0) inside = !inside;
    }
  }
  return inside;
}

namespace {

Domain translated(const Domain& d, Point offset) {
  Domain out = d;
  if (out.is_disc()) {
    std::get<Disc>(out.shape).center += offset;
  } else {
    for (Point& p : std::get<Polygon>(out.shape).vertices) p += offset;
  }
  out.translation += offset;
  return out;
}

Point polygon_centroid(std::span<const Point> v) {
  double cx = 0.0, cy = 0.0;
  const double area = signed_area(v);
  for (std::size_t k = 0; k < v.size(); ++k) {
    const Point a = v[k];
    const Point b = v[(k + 1) % v.size()];
    const double cross = a.real() * b.imag() - b.real() * a.imag();
    cx += (a.real() + b.real()) * cross;
    cy += (a.imag() + b.imag()) * cross;
  }
  return {cx / (6.0 * area), cy / (6.0 * area)};
}

constexpr int kScanLevels = 8;

}  // namespace

Domain normalize_origin(const Domain& d) {
  if (contains(d, {0.0, 0.0})) return d;

  const Point centroid = d.is_disc() ? d.disc().center : polygon_centroid(d.polygon().vertices);
  if (contains(d, centroid)) return translated(d, -centroid);

  for (int level = 1; level <= kScanLevels; ++level) {
    try {
      const DyadicGrid scan = build_grid(d, level, 0.0);
      return translated(d, -scan.cell_center(0));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EmptyGrid) throw;
    }
  }
  throw Error(ErrorCode::EmptyInterior, "no interior point found by the coarse grid scan");
}

}  // namespace riemann
