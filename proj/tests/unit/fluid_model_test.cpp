#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "viscoflow/fluid_model.hpp"

using namespace viscoflow;

namespace {

MaterialLaw eos(double A, double gamma) {
  MaterialLaw m;
  m.A = A;
  m.gamma = gamma;
  return m;
}

}  // namespace

TEST(Pressure, KnownValues) {
  EXPECT_DOUBLE_EQ(pressure(eos(1, 2), 1), 1.0);
  EXPECT_DOUBLE_EQ(pressure(eos(1, 2), 2), 4.0);
  EXPECT_DOUBLE_EQ(pressure(eos(0.5, 1.4), 1), 0.5);
}

TEST(Pressure, RejectsNonPositiveDensity) {
  EXPECT_THROW(pressure(eos(1, 2), 0.0), DomainError);
  EXPECT_THROW(pressure(eos(1, 2), -1.0), DomainError);
}

TEST(SoundSpeed, KnownValues) {
  EXPECT_DOUBLE_EQ(sound_speed(eos(0.5, 2), 1), 1.0);
  EXPECT_NEAR(sound_speed(eos(1, 2), 1), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(sound_speed(eos(1, 5.0 / 3.0), 8), std::sqrt(20.0 / 3.0), 1e-14);
}

TEST(SoundSpeed, MatchesPressureDerivative) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> A(0.2, 3), g(1.1, 3), r(0.2, 4);
  for (int i = 0; i < 200; ++i) {
    const auto law = eos(A(rng), g(rng));
    const double rho = r(rng);
    const double h = 1e-5 * rho;
    const double dp = (pressure(law, rho + h) - pressure(law, rho - h)) / (2 * h);
    EXPECT_NEAR(sound_speed(law, rho) * sound_speed(law, rho), dp, 1e-7 * dp);
  }
}

TEST(MaterialLaw, ValidationMessages) {
  try {
    eos(1, 1).validate();
    FAIL() << "gamma = 1 accepted";
  } catch (const DomainError& e) {
    EXPECT_STREQ(e.what(), "gamma must exceed 1");
  }
  EXPECT_THROW(eos(0, 2).validate(), DomainError);
  EXPECT_NO_THROW(eos(1, 2).validate());
}

TEST(Transport, ConstantLaw) {
  MaterialLaw m;
  const auto tc = eval_transport(m, BulkState{3.0, {}, 0.7});
  EXPECT_EQ(tc.zeta, 1.0);
  EXPECT_EQ(tc.eta, 1.0);
  EXPECT_EQ(tc.tau, 1.0);
}

TEST(Transport, FunctionLaws) {
  MaterialLaw m;
  m.zeta = TransportLaw::function([](const StressInvariants& s) { return s.rho; });
  m.tau = TransportLaw::function([](const StressInvariants& s) { return 1.0 / (1.0 + s.Pi * s.Pi); });
  const auto tc = eval_transport(m, BulkState{2.0, {}, 0.0});
  EXPECT_EQ(tc.zeta, 2.0);
  EXPECT_EQ(tc.tau, 1.0);
  EXPECT_FALSE(m.constant_bulk_coefficients());
}

TEST(Transport, NamedLaws) {
  MaterialLaw m;
  m.zeta = TransportLaw::named({LawSpec::Kind::power, {2.0, 1.5}});
  m.tau = TransportLaw::named({LawSpec::Kind::stress_lorentzian, {1.0, 0.5}});
  const auto tc = eval_transport(m, BulkState{4.0, {}, 0.5});
  EXPECT_DOUBLE_EQ(tc.zeta, 16.0);
  EXPECT_DOUBLE_EQ(tc.tau, 0.5);
}

TEST(Transport, RejectsNonPositiveCoefficient) {
  MaterialLaw m;
  m.tau = TransportLaw::constant(-1.0);
  EXPECT_THROW(eval_transport(m, BulkState{}), MaterialLawError);
  m.tau = TransportLaw::function([](const StressInvariants&) { return std::nan(""); });
  EXPECT_THROW(eval_transport(m, BulkState{}), MaterialLawError);
}

TEST(ShearState, TraceIsRotationInvariantInput) {
  ShearState s;
  s.Pi.set(0, 0, 0.3);
  s.Pi.set(1, 1, -0.6);
  s.Pi.set(2, 2, 0.9);
  s.Pi.set(0, 1, 0.2);
  EXPECT_NEAR(s.bulk_scalar(), 0.2, 1e-15);
  const auto inv = invariants(s);
  EXPECT_NEAR(inv.PiPi, 0.09 + 0.36 + 0.81 + 2 * 0.04, 1e-15);
}

TEST(SymTensor3, Symmetric) {
  SymTensor3 t;
  t.set(2, 0, 1.5);
  EXPECT_EQ(t(0, 2), 1.5);
  EXPECT_EQ(t.normal_component({0, 0, 1}), 0.0);
  const double r = 1 / std::sqrt(2.0);
  EXPECT_NEAR(t.normal_component({r, 0, r}), 1.5, 1e-15);
}

TEST(StateValidation, RejectsBadStates) {
  EXPECT_THROW(validate_state(BulkState{-1.0, {}, 0.0}), InvalidStateError);
  EXPECT_THROW(validate_state(BulkState{1.0, {std::nan(""), 0, 0}, 0.0}), InvalidStateError);
  EXPECT_NO_THROW(validate_state(BulkState{}));
}
