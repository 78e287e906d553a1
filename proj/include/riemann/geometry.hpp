#pragma once

#include <complex>
#include <cstddef>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace riemann {

using Point = std::complex<double>;

struct Polygon {
  std::vector<Point> vertices;  // counterclockwise, first vertex not repeated
};

struct Disc {
  Point center;
  double radius = 0.0;
};

/// A bounded simply connected open set. `shape` is stored in working
/// coordinates; `translation` maps original coordinates to working ones
/// (working = original + translation).
struct Domain {
  std::variant<Polygon, Disc> shape;
  Point translation{0.0, 0.0};

  bool is_polygon() const noexcept { return std::holds_alternative<Polygon>(shape); }
  bool is_disc() const noexcept { return std::holds_alternative<Disc>(shape); }
  const Polygon& polygon() const { return std::get<Polygon>(shape); }
  const Disc& disc() const { return std::get<Disc>(shape); }

  /// Axis-aligned bounding box {lower-left, upper-right} in working coordinates.
  std::pair<Point, Point> bounds() const;

  Point to_original(Point working) const noexcept { return working - translation; }
};

Domain make_polygon(std::vector<Point> vertices);
Domain make_disc(Point center, double radius);

/// Parses `{"type":"polygon","vertices":[[x,y],...]}` or
/// `{"type":"disc","center":[x,y],"radius":r}`.
Domain load_domain(const nlohmann::json& spec);
Domain load_domain_text(const std::string& text);
Domain load_domain_file(const std::string& path);
nlohmann::json to_json(const Domain& d);

/// Strict interiority; points on the boundary are outside.
bool contains(const Domain& d, Point p);

Domain normalize_origin(const Domain& d);

// Exact-sign geometric predicates shared by the grid builder and the tests.
double signed_area(std::span<const Point> ring);
int orientation(Point a, Point b, Point c);
bool on_segment(Point a, Point b, Point p);
bool segments_intersect(Point a, Point b, Point c, Point d);
bool segment_meets_box(Point a, Point b, Point lo, Point hi);
bool is_simple(std::span<const Point> ring);

struct Lattice {
  std::int64_t i = 0;
  std::int64_t j = 0;
  friend bool operator==(const Lattice&, const Lattice&) = default;
};

struct OrientedEdge {
  Lattice start;
  Lattice end;
};

enum class NodeKind : std::uint8_t { Interior, Boundary };

inline constexpr std::int32_t kNoNode = -1;

/// Dyadic squares of side 2^-level, offset by (shift, shift), that are
/// contained in the domain. Lattice point (i, j) sits at
/// (i * spacing + shift, j * spacing + shift); cell (n1, n2) has lower-left
/// corner (n1, n2).
class DyadicGrid {
 public:
  enum Dir { East = 0, North = 1, West = 2, South = 3 };

  int level() const noexcept { return level_; }
  double shift() const noexcept { return shift_; }
  double spacing() const noexcept { return spacing_; }

  std::span<const Lattice> cells() const noexcept { return cells_; }
  std::span<const Lattice> nodes() const noexcept { return nodes_; }
  std::span<const OrientedEdge> boundary_edges() const noexcept { return boundary_edges_; }

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t cell_count() const noexcept { return cells_.size(); }
  NodeKind kind(std::size_t node) const { return kinds_[node]; }
  bool is_interior(std::size_t node) const { return kinds_[node] == NodeKind::Interior; }
  /// Number of cells having this node as a corner (1..4).
  int cell_multiplicity(std::size_t node) const { return multiplicity_[node]; }

  /// Lattice neighbour of `node` in direction `dir`, or kNoNode.
  std::int32_t neighbor(std::size_t node, Dir dir) const { return neighbors_[4 * node + dir]; }

  std::optional<std::size_t> node_index(Lattice p) const;
  std::optional<std::size_t> cell_index(Lattice c) const;
  bool has_cell(Lattice c) const { return cell_index(c).has_value(); }

  Point position(Lattice p) const noexcept {
    return {static_cast<double>(p.i) * spacing_ + shift_, static_cast<double>(p.j) * spacing_ + shift_};
  }
  Point node_position(std::size_t node) const { return position(nodes_[node]); }
  Point cell_center(std::size_t cell) const {
    return position(cells_[cell]) + Point{0.5 * spacing_, 0.5 * spacing_};
  }

  /// Node indices of the cell's corners in counterclockwise order starting
  /// at the lower-left corner.
  std::array<std::size_t, 4> cell_corners(std::size_t cell) const;

  /// Cell containing p (closed cells; ties resolved toward any member cell).
  std::optional<std::size_t> locate(Point p) const;

  /// Node minimising |position - p|.
  std::size_t nearest_node(Point p) const;

  /// Euclidean distance from p to the union of cells.
  double distance_to(Point p) const;

  friend DyadicGrid build_grid(const Domain& d, int level, double shift);
  friend DyadicGrid grid_from_cells(std::vector<Lattice> cells, int level, double shift);

 private:
  void finalize();

  int level_ = 0;
  double shift_ = 0.0;
  double spacing_ = 1.0;
  std::vector<Lattice> cells_;  // sorted by (j, i)
  std::vector<Lattice> nodes_;  // sorted by (j, i)
  std::vector<NodeKind> kinds_;
  std::vector<std::uint8_t> multiplicity_;
  std::vector<std::int32_t> neighbors_;
  std::vector<OrientedEdge> boundary_edges_;

  // Dense lookup over the lattice bounding box of the nodes.
  Lattice origin_{};
  std::int64_t width_ = 0;
  std::int64_t height_ = 0;
  std::vector<std::int32_t> node_lookup_;
  std::vector<std::int32_t> cell_lookup_;
};

/// Spacing of the dyadic lattice at `level`.
double dyadic_spacing(int level);

/// Shift used when a grid must be moved off the lattice: 2^-(level+4).
double default_shift(int level);

/// All cells of the (shift-offset) level-`level` lattice whose closed square
/// lies in the open domain.
DyadicGrid build_grid(const Domain& d, int level, double shift = 0.0);

/// Grid made from an explicit cell set; used for synthetic grids in tests.
DyadicGrid grid_from_cells(std::vector<Lattice> cells, int level, double shift = 0.0);

std::vector<OrientedEdge> boundary_edges(const DyadicGrid& grid);

/// Closed-square containment used by build_grid.
bool contains_square(const Domain& d, Point lower_left, double side);

}  // namespace riemann
