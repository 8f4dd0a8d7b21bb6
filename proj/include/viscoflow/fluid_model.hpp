#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace viscoflow {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Raised when a physical function is evaluated outside its domain (e.g. rho <= 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a transport law evaluates to a non-positive or non-finite value.
class MaterialLawError : public std::runtime_error {
 public:
  MaterialLawError(std::string coefficient, const std::string& what)
      : std::runtime_error(what), coefficient_(std::move(coefficient)) {}
  const std::string& coefficient() const noexcept { return coefficient_; }

 private:
  std::string coefficient_;
};

/// Raised when a field state violates rho > 0 or contains non-finite values.
class InvalidStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Symmetric 3x3 tensor stored as its six independent components in the order
/// (11, 12, 13, 22, 23, 33). Writing (i,j) writes (j,i).
class SymTensor3 {
 public:
  SymTensor3() = default;
  explicit SymTensor3(const std::array<double, 6>& c) : c_(c) {}

  static constexpr std::size_t index(int i, int j) {
    if (i > j) std::swap(i, j);
    constexpr std::size_t table[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
    return table[i][j];
  }

  static SymTensor3 isotropic(double p) { return SymTensor3({p, 0.0, 0.0, p, 0.0, p}); }

  double operator()(int i, int j) const { return c_[index(i, j)]; }
  void set(int i, int j, double value) { c_[index(i, j)] = value; }

  double trace() const { return c_[0] + c_[3] + c_[5]; }
  /// Pi_ij Pi^ij (off-diagonal components counted twice).
  double contract() const {
    return c_[0] * c_[0] + c_[3] * c_[3] + c_[5] * c_[5] +
           2.0 * (c_[1] * c_[1] + c_[2] * c_[2] + c_[4] * c_[4]);
  }
  /// n_i Pi_ij n_j
  double normal_component(const Vec3& n) const {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s += n[i] * (*this)(i, j) * n[j];
    return s;
  }

  const std::array<double, 6>& components() const { return c_; }
  std::array<double, 6>& components() { return c_; }

  friend bool operator==(const SymTensor3&, const SymTensor3&) = default;

 private:
  std::array<double, 6> c_{};
};

struct BulkState {
  double rho = 1.0;
  Vec3 v{};
  double Pi = 0.0;
};

struct ShearState {
  double rho = 1.0;
  Vec3 v{};
  SymTensor3 Pi;

  /// Normalized trace Pi^i_i / 3; obeys the bulk relaxation equation.
  double bulk_scalar() const { return Pi.trace() / 3.0; }
};

/// Rotationally invariant inputs a transport law may depend on.
struct StressInvariants {
  double rho = 1.0;
  double Pi = 0.0;    // trace / 3
  double PiPi = 0.0;  // Pi_ij Pi^ij
};

inline StressInvariants invariants(const BulkState& s) { return {s.rho, s.Pi, 3.0 * s.Pi * s.Pi}; }
inline StressInvariants invariants(const ShearState& s) { return {s.rho, s.bulk_scalar(), s.Pi.contract()}; }

/// Named parametric law families that can be written to and read from configs.
///   constant c          -> c
///   power c p           -> c * rho^p
///   stress_lorentzian c s -> c / (1 + (Pi/s)^2)
struct LawSpec {
  enum class Kind { constant, power, stress_lorentzian };
  Kind kind = Kind::constant;
  std::vector<double> params{1.0};

  friend bool operator==(const LawSpec&, const LawSpec&) = default;
};

/// A transport coefficient law: either a constant, a named parametric family, or an
/// arbitrary user function of (rho, Pi, Pi:Pi).
class TransportLaw {
 public:
  using Function = std::function<double(const StressInvariants&)>;

  TransportLaw() : TransportLaw(constant(1.0)) {}

  static TransportLaw constant(double value) {
    TransportLaw law(Tag{});
    law.impl_ = LawSpec{LawSpec::Kind::constant, {value}};
    return law;
  }
  static TransportLaw named(LawSpec spec) {
    TransportLaw law(Tag{});
    law.impl_ = std::move(spec);
    return law;
  }
  static TransportLaw function(Function f) {
    TransportLaw law(Tag{});
    law.impl_ = std::move(f);
    return law;
  }

  bool is_constant() const {
    const auto* spec = std::get_if<LawSpec>(&impl_);
    return spec != nullptr && spec->kind == LawSpec::Kind::constant;
  }
  /// Present for constant and named laws; absent for user functions.
  const LawSpec* spec() const { return std::get_if<LawSpec>(&impl_); }

  double operator()(const StressInvariants& inv) const {
    if (const auto* spec = std::get_if<LawSpec>(&impl_)) {
      const auto& p = spec->params;
      switch (spec->kind) {
        case LawSpec::Kind::constant:
          return p.at(0);
        case LawSpec::Kind::power:
          return p.at(0) * std::pow(inv.rho, p.at(1));
        case LawSpec::Kind::stress_lorentzian: {
          const double x = inv.Pi / p.at(1);
          return p.at(0) / (1.0 + x * x);
        }
      }
    }
    return std::get<Function>(impl_)(inv);
  }

  friend bool operator==(const TransportLaw& a, const TransportLaw& b) {
    const auto* sa = a.spec();
    const auto* sb = b.spec();
    return sa != nullptr && sb != nullptr && *sa == *sb;
  }

 private:
  struct Tag {};
  explicit TransportLaw(Tag) {}
  std::variant<LawSpec, Function> impl_;
};

struct TransportCoefficients {
  double zeta = 1.0;
  double eta = 1.0;
  double tau = 1.0;
};

/// Barotropic power-law EOS P = A rho^gamma plus the three transport laws.
struct MaterialLaw {
  double A = 1.0;
  double gamma = 2.0;
  TransportLaw zeta = TransportLaw::constant(1.0);
  TransportLaw eta = TransportLaw::constant(1.0);
  TransportLaw tau = TransportLaw::constant(1.0);

  bool constant_bulk_coefficients() const { return zeta.is_constant() && tau.is_constant(); }

  void validate() const {
    if (!(A > 0.0) || !std::isfinite(A)) throw DomainError("EOS amplitude A must be positive");
    if (!(gamma > 1.0) || !std::isfinite(gamma)) throw DomainError("gamma must exceed 1");
  }

  friend bool operator==(const MaterialLaw&, const MaterialLaw&) = default;
};

/// Background state the initial data relaxes to outside radius R.
struct ReferenceState {
  double rho_bar = 1.0;
  double Pi_bar = 0.0;
  Vec3 v_bar{};
  double R = 1.0;

  friend bool operator==(const ReferenceState&, const ReferenceState&) = default;
};

inline double pressure(const MaterialLaw& law, double rho) {
  if (!(rho > 0.0)) throw DomainError("pressure: density must be positive");
  return law.A * std::pow(rho, law.gamma);
}

inline double sound_speed(const MaterialLaw& law, double rho) {
  if (!(rho > 0.0)) throw DomainError("sound_speed: density must be positive");
  return std::sqrt(law.A * law.gamma * std::pow(rho, law.gamma - 1.0));
}

namespace detail {
inline double checked_coefficient(const TransportLaw& law, const StressInvariants& inv, const char* name) {
  const double value = law(inv);
  if (!std::isfinite(value) || !(value > 0.0)) {
    throw MaterialLawError(name, std::string("transport coefficient ") + name + " evaluated to " +
                                     std::to_string(value) + " (must be positive and finite)");
  }
  return value;
}
}  // namespace detail

inline TransportCoefficients eval_transport(const MaterialLaw& law, const StressInvariants& inv) {
  return {detail::checked_coefficient(law.zeta, inv, "zeta"), detail::checked_coefficient(law.eta, inv, "eta"),
          detail::checked_coefficient(law.tau, inv, "tau")};
}
inline TransportCoefficients eval_transport(const MaterialLaw& law, const BulkState& s) {
  return eval_transport(law, invariants(s));
}
inline TransportCoefficients eval_transport(const MaterialLaw& law, const ShearState& s) {
  return eval_transport(law, invariants(s));
}

namespace detail {
inline bool finite(const Vec3& v) { return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]); }
}  // namespace detail

/// Throws InvalidStateError unless rho >= density_floor, rho > 0 and every field is finite.
inline void validate_state(const BulkState& s, double density_floor = 0.0) {
  if (!std::isfinite(s.rho) || !detail::finite(s.v) || !std::isfinite(s.Pi))
    throw InvalidStateError("state contains non-finite values");
  if (!(s.rho > 0.0) || s.rho < density_floor) throw InvalidStateError("density below floor");
}
inline void validate_state(const ShearState& s, double density_floor = 0.0) {
  if (!std::isfinite(s.rho) || !detail::finite(s.v)) throw InvalidStateError("state contains non-finite values");
  for (double c : s.Pi.components())
    if (!std::isfinite(c)) throw InvalidStateError("state contains non-finite values");
  if (!(s.rho > 0.0) || s.rho < density_floor) throw InvalidStateError("density below floor");
}

}  // namespace viscoflow
