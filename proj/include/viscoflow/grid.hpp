#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace viscoflow {

enum class Geometry { planar, spherical };
enum class Boundary { reference, periodic, reflective };

inline const char* to_string(Geometry g) { return g == Geometry::planar ? "planar" : "spherical"; }
inline const char* to_string(Boundary b) {
  switch (b) {
    case Boundary::reference:
      return "reference";
    case Boundary::periodic:
      return "periodic";
    case Boundary::reflective:
      return "reflective";
  }
  return "?";
}

class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Uniform 1-D grid. In spherical geometry x is the radius, the domain starts
/// at r = 0 and the inner boundary is reflective.
struct Grid1D {
  static constexpr std::size_t n_ghost = 2;

  Geometry geometry = Geometry::planar;
  std::size_t n_cells = 0;
  double x_min = 0.0;
  double x_max = 1.0;
  Boundary lower = Boundary::reference;
  Boundary upper = Boundary::reference;

  static Grid1D planar(std::size_t n, double x_min, double x_max, Boundary bc = Boundary::reference) {
    Grid1D g{Geometry::planar, n, x_min, x_max, bc, bc};
    g.validate();
    return g;
  }
  static Grid1D spherical(std::size_t n, double r_max) {
    Grid1D g{Geometry::spherical, n, 0.0, r_max, Boundary::reflective, Boundary::reference};
    g.validate();
    return g;
  }

  void validate() const {
    if (n_cells < 4) throw GridError("grid needs at least 4 cells");
    if (!(x_max > x_min)) throw GridError("grid requires x_max > x_min");
    if (geometry == Geometry::spherical) {
      if (x_min != 0.0) throw GridError("spherical grid must start at r = 0");
      if (lower != Boundary::reflective) throw GridError("spherical grid needs a reflective inner boundary");
      if (upper == Boundary::periodic) throw GridError("spherical grid cannot be periodic");
    } else {
      if (lower == Boundary::reflective || upper == Boundary::reflective)
        throw GridError("reflective boundaries are only used at r = 0 in spherical geometry");
      if ((lower == Boundary::periodic) != (upper == Boundary::periodic))
        throw GridError("periodic boundaries must be periodic at both ends");
    }
  }

  double dx() const { return (x_max - x_min) / static_cast<double>(n_cells); }
  double face(std::size_t f) const { return x_min + dx() * static_cast<double>(f); }
  double center(std::size_t i) const { return x_min + dx() * (static_cast<double>(i) + 0.5); }
  double length() const { return x_max - x_min; }

  /// Face area per unit solid angle (spherical) or per unit transverse area (planar).
  double area(std::size_t f) const {
    if (geometry == Geometry::planar) return 1.0;
    const double r = face(f);
    return r * r;
  }
  double volume(std::size_t i) const {
    if (geometry == Geometry::planar) return dx();
    const double lo = face(i);
    const double hi = face(i + 1);
    return (hi * hi * hi - lo * lo * lo) / 3.0;
  }
  /// Factor turning sum(f_i * volume(i)) into the integral over all space
  /// (4 pi for spherical, 1 per unit area for planar).
  double measure_factor() const { return geometry == Geometry::spherical ? 4.0 * M_PI : 1.0; }
};

}  // namespace viscoflow
