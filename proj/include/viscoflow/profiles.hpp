#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "viscoflow/equations.hpp"
#include "viscoflow/linear_stability.hpp"
#include "viscoflow/solver.hpp"

namespace viscoflow {

class ProfileError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// C-infinity bump exp(1 - 1/(1 - s^2)) on |s| < 1, zero outside, peak 1 at s = 0.
inline double bump(double s) {
  const double s2 = s * s;
  if (s2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s2));
}

/// Amplitudes of the built-in compactly supported initial data, all supported
/// in |x - origin| < R:
///   rho = rho_bar + density * bump(s)
///   u   = v_bar + velocity * s * bump(s)       (odd in s, so regular at r = 0)
///   Pi  = Pi_bar + stress * bump(s)            (isotropic part for the shear system)
///   v2  = transverse * bump(s), Pi12 = shear_stress * bump(s)   (shear system only)
/// with s = (x - origin) / R.
struct BumpProfile {
  double density = 0.0;
  double velocity = 0.0;
  double stress = 0.0;
  double transverse = 0.0;
  double shear_stress = 0.0;

  friend bool operator==(const BumpProfile&, const BumpProfile&) = default;
};

namespace detail {
inline constexpr std::array<double, 5> gl_nodes = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                                   0.5384693101056831, 0.9061798459386640};
inline constexpr std::array<double, 5> gl_weights = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                                     0.4786286704993665, 0.2369268850561891};

/// Volume average over cell i of f(x) (weight r^2 in spherical geometry).
template <class F>
double cell_average(const Grid1D& g, std::size_t i, F&& f) {
  const double lo = g.face(i);
  const double hi = g.face(i + 1);
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t q = 0; q < gl_nodes.size(); ++q) {
    const double x = mid + half * gl_nodes[q];
    const double w = gl_weights[q] * (g.geometry == Geometry::spherical ? x * x : 1.0);
    num += w * f(x);
    den += w;
  }
  return num / den;
}
}  // namespace detail

/// Fills the simulation with the bump profile around sim.origin() and re-arms the monitor.
template <class System>
void apply_profile(Simulation<System>& sim, const BumpProfile& p) {
  const auto& g = sim.grid();
  const auto& ref = sim.reference();
  const double R = ref.R;
  const double x0 = sim.origin();
  auto s_of = [&](double x) { return (x - x0) / R; };
  auto& cells = sim.cells();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto q = System::reference_cell(ref);
    auto avg = [&](auto&& f) { return detail::cell_average(g, i, f); };
    const double lo = std::abs(g.face(i) - x0);
    const double hi = std::abs(g.face(i + 1) - x0);
    const bool crosses = (g.face(i) - x0) * (g.face(i + 1) - x0) < 0.0;
    if (std::min(lo, hi) >= R && !crosses) {
      cells[i] = q;  // exterior stays exactly at the reference values
      continue;
    }
    q[System::rho] += p.density * avg([&](double x) { return bump(s_of(x)); });
    q[System::vel] += p.velocity * avg([&](double x) { return s_of(x) * bump(s_of(x)); });
    if constexpr (System::n_vars == BulkEquations::n_vars) {
      q[BulkEquations::stress] += p.stress * avg([&](double x) { return bump(s_of(x)); });
    } else {
      const double b = avg([&](double x) { return bump(s_of(x)); });
      q[ShearEquations::s(0, 0)] += p.stress * b;
      q[ShearEquations::s(1, 1)] += p.stress * b;
      q[ShearEquations::s(2, 2)] += p.stress * b;
      q[ShearEquations::s(0, 1)] += p.shear_stress * b;
      q[2] += p.transverse * b;
    }
    if (!(q[System::rho] > 0.0)) throw ProfileError("initial density must stay positive (cell " + std::to_string(i) + ")");
    cells[i] = q;
  }
  sim.arm_monitor();
}

/// Seeds reference + amplitude * Re(shape * exp(i k x)), cell averaged exactly.
/// The bulk system takes shape entries 0, 1 and 4.
template <class System>
void apply_plane_wave(Simulation<System>& sim, double k, const PlaneWaveMode& mode, double amplitude) {
  const auto& g = sim.grid();
  const double dx = g.dx();
  const double kh = 0.5 * k * dx;
  const double filter = kh == 0.0 ? 1.0 : std::sin(kh) / kh;
  auto& cells = sim.cells();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::complex<double> phase = std::polar(amplitude * filter, k * g.center(i));
    auto q = System::reference_cell(sim.reference());
    if constexpr (System::n_vars == BulkEquations::n_vars) {
      q[0] += (mode.shape[0] * phase).real();
      q[1] += (mode.shape[1] * phase).real();
      q[2] += (mode.shape[4] * phase).real();
    } else {
      for (std::size_t c = 0; c < System::n_vars; ++c) q[c] += (mode.shape[c] * phase).real();
    }
    cells[i] = q;
  }
  sim.arm_monitor();
}

}  // namespace viscoflow
