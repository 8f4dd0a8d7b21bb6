#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "viscoflow/fluid_model.hpp"
#include "viscoflow/polynomial.hpp"

namespace viscoflow {

/// Uniform equilibrium the system is linearized around (Pi = 0).
struct Background {
  double rho0 = 1.0;
  double c_s = 1.0;
  double zeta = 1.0;
  double eta = 1.0;
  double tau = 1.0;
  Vec3 v0{};

  static Background from(const ReferenceState& ref, const MaterialLaw& law) {
    const BulkState eq{ref.rho_bar, ref.v_bar, 0.0};
    const auto tc = eval_transport(law, eq);
    return {ref.rho_bar, sound_speed(law, ref.rho_bar), tc.zeta, tc.eta, tc.tau, ref.v_bar};
  }
};

/// Dispersion polynomial in x = -i Omega, Omega = omega - v0.k.
struct DispersionProblem {
  Vec3 k{};
  Background background;
  Polynomial poly;
  double shift = 0.0;  // v0.k
};

enum class Stability { stable, marginal, unstable };

inline const char* to_string(Stability s) {
  switch (s) {
    case Stability::stable:
      return "stable";
    case Stability::marginal:
      return "marginal";
    case Stability::unstable:
      return "unstable";
  }
  return "?";
}

struct StabilityVerdict {
  std::vector<double> deltas;  // Hurwitz determinants
  bool stable = false;         // all deltas > 0
  std::vector<std::complex<double>> roots;
  double max_real_part = -std::numeric_limits<double>::infinity();
  Stability classification = Stability::marginal;
};

inline constexpr double default_marginal_band = 1e-9;

/// tau x^3 + x^2 + tau k^2 (c_s^2 + zeta/rho0) x + k^2 c_s^2
inline DispersionProblem bulk_dispersion(const Background& bg, const Vec3& k) {
  const double k2 = dot(k, k);
  const double cs2 = bg.c_s * bg.c_s;
  return {k, bg, {bg.tau, 1.0, bg.tau * k2 * (cs2 + bg.zeta / bg.rho0), k2 * cs2}, dot(bg.v0, k)};
}

/// Deltas and the flag they imply; roots are left empty.
inline StabilityVerdict routh_hurwitz(const DispersionProblem& problem) {
  StabilityVerdict v;
  v.deltas = hurwitz_determinants(problem.poly);
  v.stable = !v.deltas.empty() && std::all_of(v.deltas.begin(), v.deltas.end(), [](double d) { return d > 0.0; });
  return v;
}

namespace detail {
inline Stability classify(double max_re, double band) {
  if (max_re < -band) return Stability::stable;
  if (max_re > band) return Stability::unstable;
  return Stability::marginal;
}

/// Max real part over roots, skipping exact neutral modes (|x| <= band) when requested.
inline double max_real_part(const std::vector<std::complex<double>>& roots, bool skip_neutral, double band) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& r : roots) {
    if (skip_neutral && std::abs(r) <= band) continue;
    m = std::max(m, r.real());
  }
  return m;
}
}  // namespace detail

/// Hurwitz determinants plus roots and the root-based classification. Roots with
/// real part inside [-band, band] make the verdict marginal. At k = 0 the x = 0
/// roots are neutral modes and are left out of the classification.
inline StabilityVerdict analyze(const DispersionProblem& problem, double band = default_marginal_band) {
  StabilityVerdict v = routh_hurwitz(problem);
  v.roots = poly_roots(problem.poly).roots;
  const bool k_zero = dot(problem.k, problem.k) == 0.0;
  v.max_real_part = detail::max_real_part(v.roots, k_zero, band);
  v.classification = detail::classify(v.max_real_part, band);
  return v;
}

/// omega = i x + v0.k for a root x of the dispersion polynomial.
inline std::complex<double> omega_from_root(std::complex<double> x, double shift) {
  return std::complex<double>(0.0, 1.0) * x + shift;
}

// ---------------------------------------------------------------------------
// Shear + bulk system

enum class AcousticCubic {
  derived,   // rho tau x^3 + rho x^2 + (zeta + 4 eta/3 + c_s^2 rho tau) k^2 x + c_s^2 rho k^2
  published  // same with (3 zeta + 4 eta + c_s^2 rho tau) k^2 as the linear coefficient
};

struct ShearDispersion {
  Vec3 k{};
  Background background;
  Polynomial relaxation;  // tau x + 1, multiplicity 3
  Polynomial shear;       // rho tau x^2 + rho x + eta k^2, multiplicity 2
  Polynomial acoustic;    // cubic
  double shift = 0.0;

  /// Full determinant polynomial (up to a constant factor).
  Polynomial product() const {
    Polynomial p = relaxation;
    p = multiply(p, relaxation);
    p = multiply(p, relaxation);
    p = multiply(p, shear);
    p = multiply(p, shear);
    return multiply(p, acoustic);
  }
};

inline ShearDispersion shear_dispersion(const Background& bg, const Vec3& k, AcousticCubic form = AcousticCubic::derived) {
  const double k2 = dot(k, k);
  const double cs2 = bg.c_s * bg.c_s;
  const double rt = bg.rho0 * bg.tau;
  const double viscous = form == AcousticCubic::derived ? bg.zeta + 4.0 * bg.eta / 3.0 : 3.0 * bg.zeta + 4.0 * bg.eta;
  ShearDispersion d;
  d.k = k;
  d.background = bg;
  d.relaxation = {bg.tau, 1.0};
  d.shear = {rt, bg.rho0, bg.eta * k2};
  d.acoustic = {rt, bg.rho0, (viscous + cs2 * rt) * k2, cs2 * bg.rho0 * k2};
  d.shift = dot(bg.v0, k);
  return d;
}

struct ShearStabilityVerdict {
  StabilityVerdict relaxation;
  StabilityVerdict shear;
  StabilityVerdict acoustic;
  double max_real_part = -std::numeric_limits<double>::infinity();
  Stability classification = Stability::marginal;
  bool hurwitz_stable = false;  // every factor's deltas positive
};

inline ShearStabilityVerdict analyze(const ShearDispersion& d, double band = default_marginal_band) {
  ShearStabilityVerdict v;
  v.relaxation = analyze(DispersionProblem{d.k, d.background, d.relaxation, d.shift}, band);
  v.shear = analyze(DispersionProblem{d.k, d.background, d.shear, d.shift}, band);
  v.acoustic = analyze(DispersionProblem{d.k, d.background, d.acoustic, d.shift}, band);
  v.max_real_part = std::max({v.relaxation.max_real_part, v.shear.max_real_part, v.acoustic.max_real_part});
  v.classification = detail::classify(v.max_real_part, band);
  v.hurwitz_stable = v.relaxation.stable && v.shear.stable && v.acoustic.stable;
  return v;
}

// ---------------------------------------------------------------------------
// Plane-wave eigenmodes (k along x), used to seed linear-regime runs.

enum class WaveMode { acoustic, shear_transverse };

/// Primitive amplitudes in the order (rho, v1, v2, v3, Pi11, Pi12, Pi13, Pi22, Pi23, Pi33).
/// The bulk system uses (rho, v1, Pi) = (shape[0], shape[1], shape[4]).
struct PlaneWaveMode {
  std::complex<double> x;  // growth exponent: fields ~ exp(x t + i k x)
  std::array<std::complex<double>, 10> shape{};
};

namespace detail {
/// Root with the largest real part; among a conjugate pair the one with Im <= 0.
inline std::complex<double> least_damped(const std::vector<std::complex<double>>& roots) {
  std::complex<double> best = roots.front();
  for (const auto& r : roots) {
    if (r.real() > best.real() + 1e-12 || (std::abs(r.real() - best.real()) <= 1e-12 && r.imag() < best.imag()))
      best = r;
  }
  return best;
}
}  // namespace detail

/// Least-damped eigenmode of the bulk system at wavenumber k (> 0).
inline PlaneWaveMode bulk_plane_wave(const Background& bg, double k) {
  const auto problem = bulk_dispersion(bg, {k, 0.0, 0.0});
  PlaneWaveMode m;
  m.x = detail::least_damped(poly_roots(problem.poly).roots);
  const std::complex<double> I(0.0, 1.0);
  m.shape[1] = 1.0;
  m.shape[0] = -I * bg.rho0 * k / m.x;
  m.shape[4] = -I * bg.zeta * k / (1.0 + bg.tau * m.x);
  return m;
}

/// Least-damped eigenmode of the shear system for the chosen polarization.
/// Uses the derived acoustic cubic, which is what the evolution equations obey.
inline PlaneWaveMode shear_plane_wave(const Background& bg, double k, WaveMode mode) {
  const auto d = shear_dispersion(bg, {k, 0.0, 0.0});
  const std::complex<double> I(0.0, 1.0);
  PlaneWaveMode m;
  if (mode == WaveMode::shear_transverse) {
    m.x = detail::least_damped(poly_roots(d.shear).roots);
    m.shape[2] = 1.0;
    m.shape[5] = -I * bg.eta * k / (1.0 + bg.tau * m.x);
  } else {
    m.x = detail::least_damped(poly_roots(d.acoustic).roots);
    const auto relax = 1.0 + bg.tau * m.x;
    m.shape[1] = 1.0;
    m.shape[0] = -I * bg.rho0 * k / m.x;
    m.shape[4] = -I * (bg.zeta + 4.0 * bg.eta / 3.0) * k / relax;
    m.shape[7] = -I * (bg.zeta - 2.0 * bg.eta / 3.0) * k / relax;
    m.shape[9] = m.shape[7];
  }
  return m;
}

}  // namespace viscoflow
