#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "riemann/error.hpp"
#include "riemann/geometry.hpp"

namespace fixtures {

using riemann::Point;

inline riemann::Domain unit_disc() { return riemann::make_disc({0.0, 0.0}, 1.0); }
inline riemann::Domain offset_disc() { return riemann::make_disc({0.3, 0.0}, 1.0); }
inline riemann::Domain unit_square() {
  return riemann::normalize_origin(riemann::make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
}
inline riemann::Domain l_polygon() {
  return riemann::make_polygon({{-0.5, -0.5}, {1.5, -0.5}, {1.5, 0.5}, {0.5, 0.5}, {0.5, 1.5}, {-0.5, 1.5}});
}

struct Named {
  const char* name;
  riemann::Domain domain;
};

inline std::vector<Named> test_domains() {
  return {{"unit disc", unit_disc()},
          {"offset disc", offset_disc()},
          {"unit square", unit_square()},
          {"L polygon", l_polygon()}};
}

/// Möbius oracle for the disc |z - 0.3| < 1: the normalised map onto the unit disc.
inline std::complex<double> offset_disc_map(std::complex<double> z) { return z / (0.91 + 0.3 * z); }

/// Code of the riemann::Error thrown by f, or nullopt if it returns normally.
template <class F>
std::optional<riemann::ErrorCode> error_of(F&& f) {
  try {
    f();
  } catch (const riemann::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

/// Random star-shaped polygon around `center`: sorted angles with jitter,
/// radii in [rmin, rmax]. Always simple and counterclockwise.
inline std::vector<Point> star_polygon(std::mt19937_64& rng, Point center, int vertices, double rmin,
                                       double rmax) {
  std::uniform_real_distribution<double> jitter(-0.3, 0.3), radius(rmin, rmax);
  std::vector<Point> out;
  for (int k = 0; k < vertices; ++k) {
    const double theta = 2.0 * M_PI * (k + 0.5 + jitter(rng)) / vertices;
    out.push_back(center + std::polar(radius(rng), theta));
  }
  return out;
}

inline Point uniform_in_disc(std::mt19937_64& rng, Point center, double r) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return center + std::polar(r * std::sqrt(u(rng)), 2.0 * M_PI * u(rng));
}

}  // namespace fixtures
