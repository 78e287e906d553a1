#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "riemann/barrier.hpp"
#include "riemann/conformal_map.hpp"
#include "riemann/dirichlet.hpp"
#include "riemann/verification.hpp"

namespace riemann {

/// Shortest decimal that round-trips to the same double.
std::string format_number(double v);

/// `x,y,value` per node in (j, i) order; coordinates reported in the
/// domain's original frame.
std::string field_csv(const DyadicGrid& grid, const std::vector<double>& values, Point translation);

/// `x,y,g,gconj,reH,imH` per node, same row order as field_csv.
std::string map_csv(const ConformalMap& m, Point translation);

nlohmann::json to_json(const BoundaryModulus& b);
nlohmann::json to_json(const PreimageCount& c);
nlohmann::json to_json(const BarrierReport& r, Point translation);
nlohmann::json to_json(const VerificationReport& r, const Domain& domain);
nlohmann::json to_json(const MaxPrincipleReport& r);

struct SvgStyle {
  std::string stroke = "#1f4e79";
  std::string circle_stroke = "#888888";
  double stroke_width = 0.004;
  int pixels = 800;
};

/// Images under H of the lattice lines of S_N (one polyline per maximal run
/// of cell edges) inside the unit circle.
std::string render_grid_image(const ConformalMap& m, const SvgStyle& style = {});

/// Writes to `path.tmp` and renames onto `path`.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace riemann
