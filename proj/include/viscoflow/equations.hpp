#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "viscoflow/fluid_model.hpp"
#include "viscoflow/grid.hpp"

namespace viscoflow {

/// Per-face quantities shared by the two adjacent cells.
template <std::size_t N>
struct FaceTerms {
  std::array<double, N> flux{};     // numerical flux including Rusanov dissipation
  std::array<double, N> central{};  // arithmetic means of nonconservative potentials
  double speed = 0.0;
};

/// Cell geometry entering the update of one cell.
struct CellMetric {
  double area_lo = 1.0;
  double area_hi = 1.0;
  double volume = 1.0;
  double dx = 1.0;
};

namespace detail {
inline double pow_eos(const MaterialLaw& law, double rho) { return law.A * std::pow(rho, law.gamma); }
inline double cs2_eos(const MaterialLaw& law, double rho) {
  return law.A * law.gamma * std::pow(rho, law.gamma - 1.0);
}
}  // namespace detail

/// Bulk-viscous system in planar or spherically symmetric form, fields (rho, u, Pi):
///   d_t rho + r^-m d_r (r^m rho u) = 0
///   d_t u + d_r (u^2/2) + (1/rho) d_r (P + Pi) = 0
///   d_t Pi + r^-m d_r (r^m u Pi) + (zeta/tau) r^-m d_r (r^m u) = -Pi/tau
/// with m = 0 (planar) or 2 (spherical).
struct BulkEquations {
  static constexpr std::size_t n_vars = 3;
  static constexpr std::size_t rho = 0;
  static constexpr std::size_t vel = 1;
  static constexpr std::size_t stress = 2;
  using Cell = std::array<double, n_vars>;
  static constexpr const char* name = "bulk";

  static std::vector<std::string> field_names() { return {"rho", "u", "Pi"}; }
  static constexpr bool is_stress(std::size_t k) { return k == stress; }
  static constexpr bool is_velocity(std::size_t k) { return k == vel; }

  static Cell reference_cell(const ReferenceState& ref) { return {ref.rho_bar, ref.v_bar[0], ref.Pi_bar}; }
  static Cell mirror(const Cell& q) { return {q[rho], -q[vel], q[stress]}; }

  static BulkState state(const Cell& q) { return {q[rho], {q[vel], 0.0, 0.0}, q[stress]}; }
  /// Trace of the viscous stress tensor.
  static double stress_trace(const Cell& q) { return 3.0 * q[stress]; }
  static double bulk_scalar(const Cell& q) { return q[stress]; }

  /// zeta and tau only; the shear viscosity law is never consulted.
  static TransportCoefficients coefficients(const Cell& q, const MaterialLaw& law) {
    const StressInvariants inv{q[rho], q[stress], 3.0 * q[stress] * q[stress]};
    return {detail::checked_coefficient(law.zeta, inv, "zeta"), 1.0, detail::checked_coefficient(law.tau, inv, "tau")};
  }

  /// Fastest local characteristic speed |u| + c_v.
  static double max_speed(const Cell& q, const MaterialLaw& law) {
    const auto tc = coefficients(q, law);
    const double visc = std::max(tc.zeta, tc.zeta + tc.tau * q[stress]);
    return std::abs(q[vel]) + std::sqrt(detail::cs2_eos(law, q[rho]) + visc / (q[rho] * tc.tau));
  }

  /// Reference front speed c_v = sqrt(c_s^2 + zeta / (rho tau)) at the background.
  static double front_speed(const ReferenceState& ref, const MaterialLaw& law) {
    return max_speed(reference_cell({ref.rho_bar, ref.Pi_bar, {}, ref.R}), law);
  }

  static FaceTerms<n_vars> face(const Cell& L, const Cell& R, double speed, const MaterialLaw& law) {
    FaceTerms<n_vars> f;
    f.speed = speed;
    const double h = 0.5 * speed;
    f.flux[rho] = 0.5 * (L[rho] * L[vel] + R[rho] * R[vel]) - h * (R[rho] - L[rho]);
    f.flux[vel] = 0.25 * (L[vel] * L[vel] + R[vel] * R[vel]) - h * (R[vel] - L[vel]);
    f.flux[stress] = 0.5 * (L[vel] * L[stress] + R[vel] * R[stress]) - h * (R[stress] - L[stress]);
    f.central[vel] = 0.5 * (L[vel] + R[vel]);
    f.central[stress] = 0.5 * (detail::pow_eos(law, L[rho]) + L[stress] + detail::pow_eos(law, R[rho]) + R[stress]);
    return f;
  }

  static Cell rate(const Cell& q, const FaceTerms<n_vars>& lo, const FaceTerms<n_vars>& hi, const CellMetric& m,
                   const MaterialLaw& law) {
    const auto tc = coefficients(q, law);
    Cell d;
    d[rho] = -(m.area_hi * hi.flux[rho] - m.area_lo * lo.flux[rho]) / m.volume;
    d[vel] = -(hi.flux[vel] - lo.flux[vel]) / m.dx - (hi.central[stress] - lo.central[stress]) / (q[rho] * m.dx);
    d[stress] = -(m.area_hi * hi.flux[stress] - m.area_lo * lo.flux[stress]) / m.volume -
                (tc.zeta / tc.tau) * (m.area_hi * hi.central[vel] - m.area_lo * lo.central[vel]) / m.volume;
    return d;
  }

  /// Exact update of d_t Pi = -Pi / tau over h with tau frozen.
  static void relax(Cell& q, double h, const MaterialLaw& law) {
    const double tau = coefficients(q, law).tau;
    q[stress] *= std::exp(-h / tau);
  }
};

/// Shear + bulk system in planar geometry (all fields depend on x only),
/// fields (rho, v1, v2, v3, Pi11, Pi12, Pi13, Pi22, Pi23, Pi33).
struct ShearEquations {
  static constexpr std::size_t n_vars = 10;
  static constexpr std::size_t rho = 0;
  static constexpr std::size_t vel = 1;
  static constexpr std::size_t stress0 = 4;
  using Cell = std::array<double, n_vars>;
  static constexpr const char* name = "shear";

  static constexpr std::size_t s(int i, int j) { return stress0 + SymTensor3::index(i, j); }

  static std::vector<std::string> field_names() {
    return {"rho", "u", "v2", "v3", "Pi11", "Pi12", "Pi13", "Pi22", "Pi23", "Pi33"};
  }
  static constexpr bool is_stress(std::size_t k) { return k >= stress0; }
  static constexpr bool is_velocity(std::size_t k) { return k >= 1 && k <= 3; }

  static Cell reference_cell(const ReferenceState& ref) {
    Cell q{};
    q[rho] = ref.rho_bar;
    for (int k = 0; k < 3; ++k) q[1 + k] = ref.v_bar[k];
    q[s(0, 0)] = q[s(1, 1)] = q[s(2, 2)] = ref.Pi_bar;
    return q;
  }

  static ShearState state(const Cell& q) {
    ShearState st;
    st.rho = q[rho];
    st.v = {q[1], q[2], q[3]};
    for (std::size_t c = 0; c < 6; ++c) st.Pi.components()[c] = q[stress0 + c];
    return st;
  }
  static Cell from_state(const ShearState& st) {
    Cell q{};
    q[rho] = st.rho;
    for (int k = 0; k < 3; ++k) q[1 + k] = st.v[k];
    for (std::size_t c = 0; c < 6; ++c) q[stress0 + c] = st.Pi.components()[c];
    return q;
  }
  static double stress_trace(const Cell& q) { return q[s(0, 0)] + q[s(1, 1)] + q[s(2, 2)]; }
  static double bulk_scalar(const Cell& q) { return stress_trace(q) / 3.0; }

  static TransportCoefficients coefficients(const Cell& q, const MaterialLaw& law) {
    return eval_transport(law, invariants(state(q)));
  }

  static double max_speed(const Cell& q, const MaterialLaw& law) {
    const auto tc = coefficients(q, law);
    const double rt = q[rho] * tc.tau;
    const double longitudinal = tc.zeta + 4.0 * tc.eta / 3.0;
    const double visc = std::max({longitudinal, longitudinal + tc.tau * q[s(0, 0)], tc.eta});
    return std::abs(q[vel]) + std::sqrt(detail::cs2_eos(law, q[rho]) + visc / rt);
  }

  static double front_speed(const ReferenceState& ref, const MaterialLaw& law) {
    return max_speed(reference_cell({ref.rho_bar, ref.Pi_bar, {}, ref.R}), law);
  }

  // central[] slots
  static constexpr std::size_t c_v1 = 1, c_v2 = 2, c_v3 = 3, c_total_xx = 4, c_pi12 = 5, c_pi13 = 6;

  static FaceTerms<n_vars> face(const Cell& L, const Cell& R, double speed, const MaterialLaw& law) {
    FaceTerms<n_vars> f;
    f.speed = speed;
    const double h = 0.5 * speed;
    f.flux[rho] = 0.5 * (L[rho] * L[vel] + R[rho] * R[vel]) - h * (R[rho] - L[rho]);
    f.flux[vel] = 0.25 * (L[vel] * L[vel] + R[vel] * R[vel]) - h * (R[vel] - L[vel]);
    // transverse velocities: advective form, only the dissipation is a flux
    f.flux[2] = -h * (R[2] - L[2]);
    f.flux[3] = -h * (R[3] - L[3]);
    for (std::size_t c = stress0; c < n_vars; ++c)
      f.flux[c] = 0.5 * (L[vel] * L[c] + R[vel] * R[c]) - h * (R[c] - L[c]);
    f.central[c_v1] = 0.5 * (L[1] + R[1]);
    f.central[c_v2] = 0.5 * (L[2] + R[2]);
    f.central[c_v3] = 0.5 * (L[3] + R[3]);
    f.central[c_total_xx] =
        0.5 * (detail::pow_eos(law, L[rho]) + L[s(0, 0)] + detail::pow_eos(law, R[rho]) + R[s(0, 0)]);
    f.central[c_pi12] = 0.5 * (L[s(0, 1)] + R[s(0, 1)]);
    f.central[c_pi13] = 0.5 * (L[s(0, 2)] + R[s(0, 2)]);
    return f;
  }

  static Cell rate(const Cell& q, const FaceTerms<n_vars>& lo, const FaceTerms<n_vars>& hi, const CellMetric& m,
                   const MaterialLaw& law) {
    const auto tc = coefficients(q, law);
    const double inv_dx = 1.0 / m.dx;
    auto diff_flux = [&](std::size_t k) { return (hi.flux[k] - lo.flux[k]) * inv_dx; };
    auto diff_central = [&](std::size_t k) { return (hi.central[k] - lo.central[k]) * inv_dx; };
    Cell d{};
    d[rho] = -diff_flux(rho);
    d[1] = -diff_flux(1) - diff_central(c_total_xx) / q[rho];
    d[2] = -q[1] * diff_central(c_v2) - diff_flux(2) - diff_central(c_pi12) / q[rho];
    d[3] = -q[1] * diff_central(c_v3) - diff_flux(3) - diff_central(c_pi13) / q[rho];
    const double dv1 = diff_central(c_v1);
    const double dv[3] = {dv1, diff_central(c_v2), diff_central(c_v3)};
    const double lame = tc.zeta - 2.0 * tc.eta / 3.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        // eta (d_i v_j + d_j v_i) with only d_1 nonzero
        double src = 0.0;
        if (i == 0) src += tc.eta * dv[j];
        if (j == 0) src += tc.eta * dv[i];
        if (i == j) src += lame * dv1;
        const std::size_t k = s(i, j);
        d[k] = -diff_flux(k) - src / tc.tau;
      }
    }
    return d;
  }

  static void relax(Cell& q, double h, const MaterialLaw& law) {
    const double decay = std::exp(-h / coefficients(q, law).tau);
    for (std::size_t c = stress0; c < n_vars; ++c) q[c] *= decay;
  }

  static Cell mirror(const Cell&) { throw GridError("shear system supports planar geometry only"); }
};

}  // namespace viscoflow
