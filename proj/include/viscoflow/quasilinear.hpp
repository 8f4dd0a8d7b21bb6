#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "viscoflow/fluid_model.hpp"

namespace viscoflow {

class AssemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coefficient matrices of  A0 d_t Phi + A1 d_1 Phi + A2 d_2 Phi + A3 d_3 Phi + B Phi = 0
/// evaluated at one state point.
///
/// Row r of the system equals equation_scale[r] times the residual of the r-th
/// evolution equation written in its natural form (mass, momentum per unit
/// density, relaxation equation).
struct QuasilinearSystem {
  std::size_t dim = 0;
  std::array<Eigen::MatrixXd, 4> a;
  Eigen::MatrixXd b;
  Eigen::VectorXd equation_scale;

  /// xi0 A0 + xi_i A^i
  Eigen::MatrixXd principal_symbol(double xi0, const Vec3& xi) const {
    Eigen::MatrixXd L = xi0 * a[0];
    for (int i = 0; i < 3; ++i) L += xi[i] * a[i + 1];
    return L;
  }
};

// Variable ordering.
//   bulk:  (rho, v1, v2, v3, Pi)
//   shear: (rho, v1, v2, v3, Pi11, Pi12, Pi13, Pi22, Pi23, Pi33)
namespace var {
inline constexpr std::size_t rho = 0;
inline constexpr std::size_t v1 = 1;
inline constexpr std::size_t bulk_Pi = 4;
inline constexpr std::size_t stress0 = 4;
inline constexpr std::size_t stress(int i, int j) { return stress0 + SymTensor3::index(i, j); }
}  // namespace var

/// Effective bulk coefficient zeta + tau*Pi multiplying div v once the
/// tau d_i(v^i Pi) term is expanded.
inline double effective_bulk_viscosity(const TransportCoefficients& tc, double Pi) { return tc.zeta + tc.tau * Pi; }

/// Bulk system from raw point values. No positivity checks beyond what is
/// needed to form the entries, so degenerate coefficient sets can be studied.
inline QuasilinearSystem assemble_bulk(const BulkState& s, double c_s, const TransportCoefficients& tc) {
  const double zeta_eff = effective_bulk_viscosity(tc, s.Pi);
  if (s.rho == 0.0 || c_s == 0.0 || zeta_eff == 0.0)
    throw AssemblyError("assemble_bulk: rho, c_s and zeta + tau*Pi must be nonzero");
  const double cs2 = c_s * c_s;
  QuasilinearSystem sys;
  sys.dim = 5;
  for (auto& m : sys.a) m = Eigen::MatrixXd::Zero(5, 5);
  sys.b = Eigen::MatrixXd::Zero(5, 5);

  const double diag[5] = {1.0 / s.rho, s.rho / cs2, s.rho / cs2, s.rho / cs2, tc.tau / (zeta_eff * cs2)};
  for (int r = 0; r < 5; ++r) sys.a[0](r, r) = diag[r];
  for (int k = 0; k < 3; ++k) {
    auto& ak = sys.a[k + 1];
    for (int r = 0; r < 5; ++r) ak(r, r) = s.v[k] * diag[r];
    ak(0, 1 + k) = ak(1 + k, 0) = 1.0;
    ak(4, 1 + k) = ak(1 + k, 4) = 1.0 / cs2;
  }
  sys.b(4, 4) = 1.0 / (zeta_eff * cs2);

  sys.equation_scale.resize(5);
  sys.equation_scale << 1.0 / s.rho, 1.0 / cs2, 1.0 / cs2, 1.0 / cs2, 1.0 / (zeta_eff * cs2);
  return sys;
}

inline QuasilinearSystem assemble_bulk(const BulkState& s, const MaterialLaw& law) {
  try {
    validate_state(s);
    const double c_s = sound_speed(law, s.rho);
    const auto tc = eval_transport(law, s);
    if (!(effective_bulk_viscosity(tc, s.Pi) > 0.0))
      throw AssemblyError("assemble_bulk: zeta + tau*Pi must be positive");
    return assemble_bulk(s, c_s, tc);
  } catch (const AssemblyError&) {
    throw;
  } catch (const std::exception& e) {
    throw AssemblyError(std::string("assemble_bulk: ") + e.what());
  }
}

/// Shear + bulk system. Stress rows are scaled by 1/(2 eta c_s^2) (diagonal
/// components) and 1/(eta c_s^2) (off-diagonal), which makes every matrix
/// symmetric when zeta = 2 eta / 3 and Pi_ij = 0.
inline QuasilinearSystem assemble_shear(const ShearState& s, double c_s, const TransportCoefficients& tc) {
  if (s.rho == 0.0 || c_s == 0.0 || tc.eta == 0.0)
    throw AssemblyError("assemble_shear: rho, c_s and eta must be nonzero");
  const double cs2 = c_s * c_s;
  QuasilinearSystem sys;
  sys.dim = 10;
  for (auto& m : sys.a) m = Eigen::MatrixXd::Zero(10, 10);
  sys.b = Eigen::MatrixXd::Zero(10, 10);
  sys.equation_scale = Eigen::VectorXd::Ones(10);

  Eigen::VectorXd diag(10);
  diag(0) = 1.0 / s.rho;
  for (int k = 0; k < 3; ++k) diag(1 + k) = s.rho / cs2;
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      const std::size_t r = var::stress(i, j);
      const double scale = (i == j) ? 1.0 / (2.0 * tc.eta * cs2) : 1.0 / (tc.eta * cs2);
      sys.equation_scale(r) = scale;
      diag(r) = tc.tau * scale;
      sys.b(r, r) = scale;
    }
  }
  for (int r = 0; r < 10; ++r) sys.a[0](r, r) = diag(r);

  const double lame = tc.zeta - 2.0 * tc.eta / 3.0;
  for (int k = 0; k < 3; ++k) {
    auto& ak = sys.a[k + 1];
    for (int r = 0; r < 10; ++r) ak(r, r) = s.v[k] * diag(r);
    // mass: d_k v^k ; momentum: d_i rho
    ak(0, 1 + k) = 1.0;
    ak(1 + k, 0) = 1.0;
    // momentum i: (1/c_s^2) d_j Pi_ij  -> column stress(i,k) in A^k
    for (int i = 0; i < 3; ++i) ak(1 + i, var::stress(i, k)) += 1.0 / cs2;
  }
  // stress rows: eta (d_i v_j + d_j v_i) + delta_ij (zeta - 2 eta/3) d_k v^k + tau Pi_ij d_k v^k
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      const std::size_t r = var::stress(i, j);
      const double scale = sys.equation_scale(r);
      sys.a[i + 1](r, 1 + j) += scale * tc.eta;
      sys.a[j + 1](r, 1 + i) += scale * tc.eta;
      const double div_coeff = (i == j ? lame : 0.0) + tc.tau * s.Pi(i, j);
      for (int k = 0; k < 3; ++k) sys.a[k + 1](r, 1 + k) += scale * div_coeff;
    }
  }
  return sys;
}

inline QuasilinearSystem assemble_shear(const ShearState& s, const MaterialLaw& law) {
  try {
    validate_state(s);
    const double c_s = sound_speed(law, s.rho);
    const auto tc = eval_transport(law, s);
    return assemble_shear(s, c_s, tc);
  } catch (const AssemblyError&) {
    throw;
  } catch (const std::exception& e) {
    throw AssemblyError(std::string("assemble_shear: ") + e.what());
  }
}

/// Residual A0 dPhi/dt + A^i dPhi/dx_i + B Phi for given point values and derivatives.
inline Eigen::VectorXd contract(const QuasilinearSystem& sys, const Eigen::VectorXd& phi, const Eigen::VectorXd& dphi_dt,
                                const std::array<Eigen::VectorXd, 3>& dphi_dx) {
  Eigen::VectorXd r = sys.a[0] * dphi_dt + sys.b * phi;
  for (int k = 0; k < 3; ++k) r += sys.a[k + 1] * dphi_dx[k];
  return r;
}

// ---------------------------------------------------------------------------
// Closed-form characteristic speeds

namespace detail {
inline void require_unit(const Vec3& n) {
  if (std::abs(norm(n) - 1.0) > 1e-12) throw DomainError("direction must be a unit vector");
}
}  // namespace detail

/// c_v = sqrt(c_s^2 + zeta_eff / (rho tau)).
inline double bulk_fast_speed(double rho, double c_s, const TransportCoefficients& tc, double Pi = 0.0) {
  return std::sqrt(c_s * c_s + effective_bulk_viscosity(tc, Pi) / (rho * tc.tau));
}

/// Sorted {v.n (x3), v.n - c_v, v.n + c_v}.
inline std::vector<double> characteristic_speeds_bulk_closed(const BulkState& s, const MaterialLaw& law,
                                                             const Vec3& n) {
  detail::require_unit(n);
  const double c_s = sound_speed(law, s.rho);
  const auto tc = eval_transport(law, s);
  const double cv = bulk_fast_speed(s.rho, c_s, tc, s.Pi);
  const double vn = dot(s.v, n);
  return {vn - cv, vn, vn, vn, vn + cv};
}

struct ShearSpeeds {
  double advective = 0.0;  // v.n
  double shear = 0.0;      // sqrt(eta / (rho tau))
  double fast = 0.0;       // sqrt(c_s^2 + (zeta + 4 eta/3 + tau Pi_nn) / (rho tau))

  /// The distinct characteristic speeds, sorted.
  std::vector<double> set() const {
    std::vector<double> s{advective - fast, advective - shear, advective, advective + shear, advective + fast};
    std::sort(s.begin(), s.end());
    return s;
  }
};

inline ShearSpeeds shear_speeds(const ShearState& s, double c_s, const TransportCoefficients& tc, const Vec3& n) {
  const double rt = s.rho * tc.tau;
  return {dot(s.v, n), std::sqrt(tc.eta / rt),
          std::sqrt(c_s * c_s + (tc.zeta + 4.0 * tc.eta / 3.0 + tc.tau * s.Pi.normal_component(n)) / rt)};
}

/// Distinct speed set {v.n, v.n +- shear, v.n +- fast}. Multiplicities (4, 2, 2, 1, 1)
/// come from the numeric oracle.
inline std::vector<double> characteristic_speeds_shear_closed(const ShearState& s, const MaterialLaw& law,
                                                              const Vec3& n) {
  detail::require_unit(n);
  return shear_speeds(s, sound_speed(law, s.rho), eval_transport(law, s), n).set();
}

// ---------------------------------------------------------------------------
// Numeric oracle

enum class HyperbolicVerdict { fosh, strongly_hyperbolic, degenerate };

inline const char* to_string(HyperbolicVerdict v) {
  switch (v) {
    case HyperbolicVerdict::fosh:
      return "FOSH";
    case HyperbolicVerdict::strongly_hyperbolic:
      return "strongly-hyperbolic";
    case HyperbolicVerdict::degenerate:
      return "degenerate";
  }
  return "?";
}

struct SpeedMultiplicity {
  double speed = 0.0;
  int algebraic = 0;
  int geometric = 0;
};

struct CharacteristicReport {
  Vec3 direction{};
  std::vector<double> speeds;  // sorted, counted with multiplicity
  std::vector<SpeedMultiplicity> multiplicities;
  double eigenvector_condition = std::numeric_limits<double>::infinity();
  double max_imag = 0.0;
  bool symmetric = false;
  bool a0_posdef = false;
  HyperbolicVerdict hyperbolic_verdict = HyperbolicVerdict::degenerate;
  std::string note;
};

struct CharacteristicOptions {
  double condition_cap = 1e8;
  double cluster_tol = 1e-7;      // relative, groups repeated eigenvalues
  double symmetry_tol = 1e-13;    // relative
  double singular_tol = 1e-14;    // rcond of A0
  double imag_tol = 1e-9;         // relative

  friend bool operator==(const CharacteristicOptions&, const CharacteristicOptions&) = default;
};

namespace detail {
inline bool is_symmetric(const Eigen::MatrixXd& m, double tol) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}
inline double condition_number(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  return smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
}
}  // namespace detail

/// Eigen-decomposition of A0^{-1} (n_i A^i): the characteristic speeds in
/// direction n, their multiplicities, and a hyperbolicity verdict.
inline CharacteristicReport characteristic_speeds_numeric(const QuasilinearSystem& sys, const Vec3& direction,
                                                          const CharacteristicOptions& opt = {}) {
  detail::require_unit(direction);
  CharacteristicReport rep;
  rep.direction = direction;
  const Eigen::Index n = static_cast<Eigen::Index>(sys.dim);

  rep.symmetric = true;
  for (const auto& m : sys.a) rep.symmetric = rep.symmetric && detail::is_symmetric(m, opt.symmetry_tol);
  if (detail::is_symmetric(sys.a[0], opt.symmetry_tol)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sys.a[0], Eigen::EigenvaluesOnly);
    rep.a0_posdef = es.eigenvalues().minCoeff() > 0.0;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> a0svd(sys.a[0]);
  const auto& a0sv = a0svd.singularValues();
  if (!(a0sv(n - 1) > opt.singular_tol * a0sv(0))) {
    rep.hyperbolic_verdict = HyperbolicVerdict::degenerate;
    rep.note = "A0 singular";
    return rep;
  }

  Eigen::MatrixXd an = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < 3; ++k) an += direction[k] * sys.a[k + 1];

  Eigen::VectorXcd lambda;
  Eigen::MatrixXcd vectors;
  Eigen::MatrixXd M;
  const bool symmetric_path = rep.symmetric && rep.a0_posdef;
  if (symmetric_path) {
    // A0 = L L^T;  L^{-1} An L^{-T} is symmetric with the same spectrum.
    Eigen::LLT<Eigen::MatrixXd> llt(sys.a[0]);
    const Eigen::MatrixXd Linv = llt.matrixL().solve(Eigen::MatrixXd::Identity(n, n));
    Eigen::MatrixXd S = Linv * an * Linv.transpose();
    S = 0.5 * (S + S.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    lambda = es.eigenvalues().cast<std::complex<double>>();
    vectors = (Linv.transpose() * es.eigenvectors()).cast<std::complex<double>>();
  } else {
    M = sys.a[0].partialPivLu().solve(an);
    Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
    lambda = es.eigenvalues();
  }

  const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
  rep.max_imag = lambda.imag().cwiseAbs().maxCoeff();
  if (rep.max_imag > opt.imag_tol * scale) {
    rep.hyperbolic_verdict = HyperbolicVerdict::degenerate;
    rep.note = "complex characteristic speeds";
    for (Eigen::Index i = 0; i < n; ++i) rep.speeds.push_back(lambda(i).real());
    std::sort(rep.speeds.begin(), rep.speeds.end());
    return rep;
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index x, Eigen::Index y) { return lambda(x).real() < lambda(y).real(); });
  for (auto i : order) rep.speeds.push_back(lambda(i).real());

  // clusters of repeated eigenvalues
  std::vector<std::pair<std::size_t, std::size_t>> clusters;  // [begin, end)
  for (std::size_t i = 0; i < rep.speeds.size();) {
    std::size_t j = i + 1;
    while (j < rep.speeds.size() && rep.speeds[j] - rep.speeds[j - 1] <= opt.cluster_tol * scale) ++j;
    clusters.emplace_back(i, j);
    i = j;
  }

  bool complete = true;
  Eigen::MatrixXcd basis(n, n);
  Eigen::Index col = 0;
  for (const auto& [begin, end] : clusters) {
    double mean = 0.0;
    for (std::size_t i = begin; i < end; ++i) mean += rep.speeds[i];
    mean /= static_cast<double>(end - begin);
    const int alg = static_cast<int>(end - begin);
    int geo = alg;
    if (symmetric_path) {
      for (std::size_t i = begin; i < end; ++i) basis.col(col++) = vectors.col(order[i]);
    } else {
      const Eigen::MatrixXd shifted = M - mean * Eigen::MatrixXd::Identity(n, n);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(shifted, Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      const double null_tol = 1e-7 * std::max(1.0, sv(0));
      geo = 0;
      for (Eigen::Index k = 0; k < n; ++k)
        if (sv(k) <= null_tol) ++geo;
      for (int k = 0; k < alg; ++k) basis.col(col++) = svd.matrixV().col(n - 1 - k).cast<std::complex<double>>();
    }
    if (geo < alg) complete = false;
    rep.multiplicities.push_back({mean, alg, geo});
  }
  rep.eigenvector_condition = detail::condition_number(basis);

  if (!complete || !(rep.eigenvector_condition <= opt.condition_cap)) {
    rep.hyperbolic_verdict = HyperbolicVerdict::degenerate;
    rep.note = complete ? "eigenvector basis ill-conditioned" : "defective eigenvalue";
  } else if (rep.symmetric && rep.a0_posdef) {
    rep.hyperbolic_verdict = HyperbolicVerdict::fosh;
  } else {
    rep.hyperbolic_verdict = HyperbolicVerdict::strongly_hyperbolic;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Determinant of the principal symbol

inline double det_principal_symbol(const QuasilinearSystem& sys, double xi0, const Vec3& xi) {
  return sys.principal_symbol(xi0, xi).partialPivLu().determinant();
}

/// rho^2 alpha^3 tau / (zeta c_s^8) (alpha^2 - c_v^2 xi.xi),  alpha = xi0 + v.xi,
/// with zeta -> zeta + tau Pi.
inline double det_principal_symbol_closed(const BulkState& s, double c_s, const TransportCoefficients& tc, double xi0,
                                          const Vec3& xi) {
  const double alpha = xi0 + dot(s.v, xi);
  const double zeta_eff = effective_bulk_viscosity(tc, s.Pi);
  const double cv = bulk_fast_speed(s.rho, c_s, tc, s.Pi);
  const double cs8 = std::pow(c_s, 8);
  return s.rho * s.rho * alpha * alpha * alpha * tc.tau / (zeta_eff * cs8) * (alpha * alpha - cv * cv * dot(xi, xi));
}

inline double det_principal_symbol_closed(const BulkState& s, const MaterialLaw& law, double xi0, const Vec3& xi) {
  return det_principal_symbol_closed(s, sound_speed(law, s.rho), eval_transport(law, s), xi0, xi);
}

}  // namespace viscoflow
