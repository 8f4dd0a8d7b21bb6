#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "viscoflow/solver.hpp"

namespace viscoflow {

/// Integral of x rho u (spherical: 4 pi int r^3 rho u dr). Planar runs measure x
/// from sim.origin(); that variant has no blow-up theorem behind it.
template <class System>
double sideris_F(const Simulation<System>& sim) {
  const auto& g = sim.grid();
  double sum = 0.0;
  for (std::size_t i = 0; i < sim.cells().size(); ++i) {
    const auto& q = sim.cells()[i];
    sum += (g.center(i) - sim.origin()) * q[System::rho] * q[System::vel] * g.volume(i);
  }
  return g.measure_factor() * sum;
}

/// Integral of rho - rho_bar.
template <class System>
double relative_mass(const Simulation<System>& sim) {
  const auto& g = sim.grid();
  const double rho_bar = sim.reference().rho_bar;
  double sum = 0.0;
  for (std::size_t i = 0; i < sim.cells().size(); ++i) sum += (sim.cells()[i][System::rho] - rho_bar) * g.volume(i);
  return g.measure_factor() * sum;
}

/// Integral of Pi - Pi_bar (bulk) or of the stress trace minus its reference value (shear).
template <class System>
double bulk_G(const Simulation<System>& sim) {
  const auto& g = sim.grid();
  const double ref = System::stress_trace(System::reference_cell(sim.reference()));
  const double per_trace = System::n_vars == BulkEquations::n_vars ? 1.0 / 3.0 : 1.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < sim.cells().size(); ++i)
    sum += per_trace * (System::stress_trace(sim.cells()[i]) - ref) * g.volume(i);
  return g.measure_factor() * sum;
}

class CertificateRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SiderisCertificate {
  double R = 0.0;
  double c_bar_v = 0.0;
  double max_rho0 = 0.0;
  double threshold = 0.0;
  double F0 = 0.0;
  double dM0 = 0.0;
  double G0 = 0.0;
  bool satisfied = false;
};

/// (16 pi / 3) c_v R^4 max rho0
inline double sideris_threshold(double c_bar_v, double R, double max_rho0) {
  return 16.0 * M_PI / 3.0 * c_bar_v * std::pow(R, 4) * max_rho0;
}

inline SiderisCertificate make_certificate(double R, double c_bar_v, double max_rho0, double F0, double dM0,
                                           double G0) {
  SiderisCertificate c{R, c_bar_v, max_rho0, sideris_threshold(c_bar_v, R, max_rho0), F0, dM0, G0, false};
  c.satisfied = dM0 >= 0.0 && G0 >= 0.0 && F0 > c.threshold;
  return c;
}

/// Evaluates the blow-up certificate on initial data. Refused unless the run is
/// spherical, the bulk coefficients are constant, the background is at rest
/// with no stress, and every cell beyond R holds the reference state exactly.
template <class System>
SiderisCertificate certificate(const Simulation<System>& sim) {
  const auto& g = sim.grid();
  const auto& ref = sim.reference();
  if (g.geometry != Geometry::spherical) throw CertificateRefused("certificate requires spherical geometry");
  if (!sim.law().constant_bulk_coefficients())
    throw CertificateRefused("certificate requires constant zeta and tau");
  if (ref.Pi_bar != 0.0 || norm(ref.v_bar) != 0.0)
    throw CertificateRefused("certificate requires a background at rest with zero stress");
  const auto exterior = System::reference_cell(ref);
  double max_rho = 0.0;
  for (std::size_t i = 0; i < sim.cells().size(); ++i) {
    const auto& q = sim.cells()[i];
    max_rho = std::max(max_rho, q[System::rho]);
    if (g.face(i) >= ref.R && q != exterior)
      throw CertificateRefused("initial data differ from the reference state beyond R (cell " + std::to_string(i) +
                               ")");
  }
  return make_certificate(ref.R, sim.front_speed(), max_rho, sideris_F(sim), relative_mass(sim), bulk_G(sim));
}

struct SeriesRow {
  double t = 0.0;
  double dt = 0.0;
  double F = 0.0;
  double dM = 0.0;
  double G = 0.0;
  double max_grad_u = 0.0;
  double max_grad_rho = 0.0;
};

struct BreakdownReport {
  std::vector<SeriesRow> series;
  std::optional<double> breakdown_time;
  std::string verdict;
};

template <class System>
SeriesRow sample(const Simulation<System>& sim, double dt) {
  const auto g = sim.gradients();
  return {sim.time(), dt, sideris_F(sim), relative_mass(sim), bulk_G(sim), g.u, g.rho};
}

class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GrowthCheck {
  std::vector<double> times;
  std::vector<double> margins;
  std::vector<double> tolerances;
  double fraction_ok = 0.0;         // share of samples with margin >= -tol
  double fraction_monotone = 0.0;   // share of consecutive pairs with F nondecreasing
};

struct GrowthOptions {
  double rel_tol = 1e-6;  // floor relative to |dF/dt| estimate

  friend bool operator==(const GrowthOptions&, const GrowthOptions&) = default;
};

/// margin_n = (F_{n+1} - F_n)/dt_n - F_n^2 / ((4 pi / 3)(R + c_v t_n)^5 max rho0).
/// tol_n estimates the error of the forward difference from the next
/// difference: |D_{n+1} - D_n| / 2, plus rel_tol * |D_n|.
inline GrowthCheck check_growth(const std::vector<SeriesRow>& series, const SiderisCertificate& cert,
                                const GrowthOptions& opt = {}) {
  if (series.size() < 10) throw InsufficientData("growth check needs at least 10 samples");
  GrowthCheck out;
  std::vector<double> d(series.size() - 1);
  for (std::size_t n = 0; n + 1 < series.size(); ++n)
    d[n] = (series[n + 1].F - series[n].F) / (series[n + 1].t - series[n].t);
  std::size_t ok = 0;
  std::size_t monotone = 0;
  for (std::size_t n = 0; n + 1 < series.size(); ++n) {
    const double t = series[n].t;
    const double F = series[n].F;
    const double bound = F * F / (4.0 * M_PI / 3.0 * std::pow(cert.R + cert.c_bar_v * t, 5) * cert.max_rho0);
    const double margin = d[n] - bound;
    const double curvature = n + 1 < d.size() ? 0.5 * std::abs(d[n + 1] - d[n]) : (n > 0 ? 0.5 * std::abs(d[n] - d[n - 1]) : 0.0);
    const double tol = curvature + opt.rel_tol * std::abs(d[n]);
    out.times.push_back(t);
    out.margins.push_back(margin);
    out.tolerances.push_back(tol);
    if (margin >= -tol) ++ok;
    if (series[n + 1].F >= series[n].F) ++monotone;
  }
  out.fraction_ok = static_cast<double>(ok) / static_cast<double>(d.size());
  out.fraction_monotone = static_cast<double>(monotone) / static_cast<double>(d.size());
  return out;
}

struct C1Monitor {
  double max_grad = 0.0;
  double threshold = 0.0;
  bool breakdown = false;
  std::string reason;
};

/// Gradient check against grad_factor * (initial max gradient + c_v / R), plus state validity.
template <class System>
C1Monitor monitor_c1(const Simulation<System>& sim) {
  C1Monitor m;
  m.max_grad = sim.gradients().max();
  m.threshold = sim.gradient_threshold();
  if (auto bad = sim.find_invalid(sim.cells())) {
    m.breakdown = true;
    m.reason = bad->second;
  } else if (m.max_grad > m.threshold) {
    m.breakdown = true;
    m.reason = "gradient above threshold";
  }
  return m;
}

}  // namespace viscoflow
