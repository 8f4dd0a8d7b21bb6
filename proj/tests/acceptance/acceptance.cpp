// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance                 run everything
//   acceptance --criterion N   run one

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "viscoflow/viscoflow.hpp"

using namespace viscoflow;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  Vec3 vec(double a) { return {uniform(-a, a), uniform(-a, a), uniform(-a, a)}; }
  Vec3 direction() {
    std::normal_distribution<double> n;
    Vec3 v{n(rng_), n(rng_), n(rng_)};
    const double l = norm(v);
    return {v[0] / l, v[1] / l, v[2] / l};
  }
  MaterialLaw law() {
    MaterialLaw m;
    m.A = uniform(0.3, 3.0);
    m.gamma = uniform(1.1, 3.0);
    m.zeta = TransportLaw::constant(uniform(0.1, 3.0));
    m.eta = TransportLaw::constant(uniform(0.1, 3.0));
    m.tau = TransportLaw::constant(uniform(0.1, 3.0));
    return m;
  }
  bool coin() { return std::bernoulli_distribution(0.5)(rng_); }

 private:
  std::mt19937_64 rng_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Worst relative mismatch of the shear closed-form speeds against the numeric
// spectrum; `published` compares with the zero-stress formula instead.
double shear_speed_error(Sampler& s, bool with_stress) {
  const auto law = s.law();
  ShearState st;
  st.rho = s.uniform(0.3, 3.0);
  st.v = s.vec(1.0);
  const auto tc0 = eval_transport(law, st);
  if (with_stress)
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) st.Pi.set(i, j, s.uniform(-0.2, 0.2) * tc0.zeta / tc0.tau);
  const Vec3 n = s.direction();
  const auto rep = characteristic_speeds_numeric(assemble_shear(st, law), n);
  std::vector<double> expected;
  if (with_stress) {
    expected = characteristic_speeds_shear_closed(st, law, n);
  } else {
    const auto tc = eval_transport(law, st);
    const double cs = sound_speed(law, st.rho);
    const double vn = dot(st.v, n);
    const double sh = std::sqrt(tc.eta / (st.rho * tc.tau));
    const double fast = std::sqrt(cs * cs + (tc.zeta + 4.0 * tc.eta / 3.0) / (st.rho * tc.tau));
    expected = {vn, vn - sh, vn + sh, vn - fast, vn + fast};
  }
  double scale = 0.0;
  for (double e : expected) scale = std::max(scale, std::abs(e));
  double worst = 0.0;
  for (double e : expected) {
    double best = std::numeric_limits<double>::infinity();
    for (double x : rep.speeds) best = std::min(best, std::abs(x - e));
    worst = std::max(worst, best / scale);
  }
  return worst;
}

Outcome characteristic_speeds() {
  const auto t0 = std::chrono::steady_clock::now();
  Sampler s(1);
  double bulk_err = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto law = s.law();
    const auto tc = eval_transport(law, BulkState{});
    BulkState st{s.uniform(0.3, 3.0), s.vec(1.0), s.uniform(-0.5, 0.5) * tc.zeta / tc.tau};
    const Vec3 n = s.direction();
    const auto rep = characteristic_speeds_numeric(assemble_bulk(st, law), n);
    const auto expected = characteristic_speeds_bulk_closed(st, law, n);
    double scale = std::max(std::abs(expected.front()), std::abs(expected.back()));
    for (std::size_t k = 0; k < expected.size(); ++k)
      bulk_err = std::max(bulk_err, std::abs(rep.speeds.at(k) - expected[k]) / scale);
  }
  double shear_err = 0.0;
  double shear_stress_err = 0.0;
  for (int i = 0; i < 1000; ++i) shear_err = std::max(shear_err, shear_speed_error(s, false));
  for (int i = 0; i < 1000; ++i) shear_stress_err = std::max(shear_stress_err, shear_speed_error(s, true));
  const double secs = seconds_since(t0);
  const bool pass = bulk_err <= 1e-10 && shear_err <= 1e-10 && shear_stress_err <= 1e-10 && secs < 10.0;
  return {pass, fmt("bulk max rel err %.3g, shear %.3g (zero stress) %.3g (with stress), %.2f s", bulk_err, shear_err,
                    shear_stress_err, secs)};
}

Outcome determinant() {
  Sampler s(2);
  double worst = 0.0;
  double worst_ratio = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto law = s.law();
    const auto tc = eval_transport(law, BulkState{});
    BulkState st{s.uniform(0.3, 3.0), s.vec(1.0), s.coin() ? 0.0 : s.uniform(-0.5, 0.5) * tc.zeta / tc.tau};
    const double xi0 = s.uniform(-2.0, 2.0);
    const Vec3 xi = s.vec(2.0);
    const double numeric = det_principal_symbol(assemble_bulk(st, law), xi0, xi);
    const double closed = det_principal_symbol_closed(st, law, xi0, xi);
    // the closed form is a difference of two terms; measure against their size
    const double cs = sound_speed(law, st.rho);
    const double cv = bulk_fast_speed(st.rho, cs, tc, st.Pi);
    const double alpha = xi0 + dot(st.v, xi);
    const double zeta_eff = effective_bulk_viscosity(tc, st.Pi);
    const double prefactor = st.rho * st.rho * std::abs(alpha * alpha * alpha) * tc.tau / (zeta_eff * std::pow(cs, 8));
    const double scale = prefactor * (alpha * alpha + cv * cv * dot(xi, xi));
    worst = std::max(worst, std::abs(numeric - closed) / scale);
    if (st.Pi == 0.0 && std::abs(closed) > 1e-6 * scale) {
      const double without_rho2 = closed / (st.rho * st.rho);
      worst_ratio = std::max(worst_ratio, std::abs(numeric / without_rho2 / (st.rho * st.rho) - 1.0));
    }
  }
  return {worst <= 1e-10, fmt("max rel err %.3g; numeric / (form without rho^2) = rho^2 to %.3g", worst, worst_ratio)};
}

struct Tally {
  int agree = 0;
  int disagree = 0;
  int marginal = 0;
  void add(const StabilityVerdict& v) {
    if (v.classification == Stability::marginal) {
      ++marginal;
      return;
    }
    const bool roots_stable = v.classification == Stability::stable;
    (roots_stable == v.stable ? agree : disagree) += 1;
  }
};

Background random_background(Sampler& s) {
  auto sign = [&] { return s.uniform(0.0, 1.0) < 0.15 ? -1.0 : 1.0; };
  Background bg;
  bg.rho0 = sign() * s.uniform(0.2, 3.0);
  bg.c_s = s.uniform(0.2, 3.0);
  bg.zeta = sign() * s.uniform(0.05, 3.0);
  bg.eta = sign() * s.uniform(0.05, 3.0);
  bg.tau = sign() * s.uniform(0.05, 3.0);
  bg.v0 = s.vec(1.0);
  return bg;
}

Outcome routh_hurwitz_equivalence() {
  Sampler s(3);
  Tally bulk, shear;
  for (int i = 0; i < 1000; ++i) {
    const auto bg = random_background(s);
    const Vec3 k = s.vec(3.0);
    bulk.add(analyze(bulk_dispersion(bg, k)));
    const auto v = analyze(shear_dispersion(bg, k));
    shear.add(v.relaxation);
    shear.add(v.shear);
    shear.add(v.acoustic);
  }

  // each coefficient flipped in turn from the unit background must destabilize
  const Vec3 k{1.0, 0.0, 0.0};
  std::string flips;
  bool flips_ok = true;
  const std::pair<const char*, double Background::*> coeffs[] = {
      {"tau", &Background::tau}, {"rho", &Background::rho0}, {"zeta", &Background::zeta}, {"eta", &Background::eta}};
  for (const auto& [name, member] : coeffs) {
    Background bg;
    bg.*member = -1.0;
    if (member != &Background::eta) {
      const bool unstable = analyze(bulk_dispersion(bg, k)).classification == Stability::unstable;
      flips += fmt(" bulk/%s:%s", name, unstable ? "unstable" : "NOT-unstable");
      flips_ok = flips_ok && unstable;
    }
    const auto v = analyze(shear_dispersion(bg, k));
    const bool unstable = v.classification == Stability::unstable;
    flips += fmt(" shear/%s:%s", name, unstable ? "unstable" : "NOT-unstable");
    flips_ok = flips_ok && unstable;
  }
  const bool base_stable = analyze(bulk_dispersion(Background{}, k)).classification == Stability::stable &&
                           analyze(shear_dispersion(Background{}, k)).classification == Stability::stable;
  const bool pass = bulk.disagree == 0 && shear.disagree == 0 && flips_ok && base_stable;
  return {pass, fmt("bulk %d agree / %d disagree / %d marginal; shear factors %d / %d / %d; unit background %s;",
                    bulk.agree, bulk.disagree, bulk.marginal, shear.agree, shear.disagree, shear.marginal,
                    base_stable ? "stable" : "NOT stable") +
                    flips};
}

Outcome dispersion_vs_simulation() {
  const auto t0 = std::chrono::steady_clock::now();
  MaterialLaw law;
  law.A = 0.5;  // c_s = 1 with gamma = 2
  law.gamma = 2.0;
  RingdownOptions opt;
  opt.cells = 512;
  const auto rec = verify_against_simulation<BulkEquations>(law, ReferenceState{}, 1.0, opt);
  const double secs = seconds_since(t0);
  return {rec.within_tolerance && secs < 60.0,
          fmt("predicted x = %.6f%+.6fi, fitted %.6f%+.6fi, rate err %.3g, freq err %.3g, %zu steps, %.1f s",
              rec.predicted.real(), rec.predicted.imag(), rec.fitted.x.real(), rec.fitted.x.imag(), rec.rate_error,
              rec.frequency_error, rec.steps, secs)};
}

Outcome navier_stokes_limit() {
  MaterialLaw law;
  const double tau = 1e-3;
  law.tau = TransportLaw::constant(tau);
  const double zeta = 1.0;
  BulkSimulation sim(Grid1D::planar(256, 0.0, 2.0 * M_PI, Boundary::periodic), law, ReferenceState{});
  auto& c = sim.cells();
  const auto& g = sim.grid();
  for (std::size_t i = 0; i < c.size(); ++i) c[i][BulkEquations::vel] = 0.1 * std::sin(g.center(i));
  const auto res = run<BulkEquations>(sim, 10.0 * tau, nullptr, {});
  double dev = 0.0, ns = 0.0;
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double dv = (c[(i + 1) % n][BulkEquations::vel] - c[(i + n - 1) % n][BulkEquations::vel]) / (2.0 * g.dx());
    dev = std::max(dev, std::abs(c[i][BulkEquations::stress] + zeta * dv));
    ns = std::max(ns, std::abs(zeta * dv));
  }
  const double ratio = dev / ns;
  return {res.final.status == StepStatus::ok && ratio <= 0.05,
          fmt("max|Pi + zeta dv/dx| / max|zeta dv/dx| = %.4g at t = %g (%zu steps)", ratio, sim.time(),
              sim.step_count())};
}

// Max relative departure of G(t) from exp(-t/tau) G(0) over a series.
double g_law_error(const std::vector<SeriesRow>& series, double tau) {
  double err = 0.0;
  for (const auto& r : series) {
    const double expected = std::exp(-r.t / tau) * series.front().G;
    err = std::max(err, std::abs(r.G - expected) / std::abs(expected));
  }
  return err;
}

Outcome conservation_and_g_law() {
  MaterialLaw law;
  BulkSimulation sim(Grid1D::spherical(800, 4.0), law, ReferenceState{});
  BumpProfile p;
  p.density = 0.01;
  p.velocity = 0.01;
  p.stress = 0.02;
  apply_profile(sim, p);
  RunOptions ro;
  ro.cadence = 5;
  const auto res = run<BulkEquations>(sim, 1.0, nullptr, ro);
  const auto& s = res.report.series;
  double drift = 0.0;
  for (const auto& r : s) drift = std::max(drift, std::abs(r.dM - s.front().dM));
  const double rel = drift / (std::abs(s.front().dM) + 1.0);  // rho_bar R^3 = 1
  const double g_err = g_law_error(s, 1.0);
  const bool pass = res.final.status == StepStatus::ok && sim.time() == 1.0 && rel <= 1e-8 && s.front().G > 0.0 &&
                    g_err <= 0.01;
  return {pass, fmt("status %s, dM drift %.3g relative, G(0) = %.4g, G-law max rel err %.3g", to_string(res.final.status),
                    rel, s.front().G, g_err)};
}

ScenarioConfig breakdown_scenario(std::size_t cells, double grad_factor) {
  ScenarioConfig c;
  c.system = SystemKind::bulk;
  c.geometry = Geometry::spherical;
  c.material.A = 1.0;
  c.material.gamma = 2.0;
  c.material.zeta = TransportLaw::constant(1.0);
  c.material.tau = TransportLaw::constant(1.0);
  c.reference.rho_bar = 1.0;
  c.reference.R = 1.0;
  c.profile = ProfileKind::bump;
  c.bump.density = 1.0;
  c.bump.velocity = 1.0;
  c.F_factor = 1.1;
  c.n_cells = cells;
  c.x_min = 0.0;
  c.x_max = 2.0;
  c.t_end = 0.1;
  c.monitor.grad_factor = grad_factor;
  return c;
}

Outcome breakdown_scenario_check() {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool pass = true;
  std::vector<double> tb;
  for (std::size_t cells : {1024u, 2048u}) {
    const auto cfg = breakdown_scenario(cells, 10.0);
    auto sim = make_simulation<BulkEquations>(cfg);
    const auto cert = certificate(sim);
    RunOptions ro;
    const auto res = run<BulkEquations>(sim, cfg.t_end, nullptr, ro);
    auto smooth = res.report.series;
    const bool broke = res.final.status != StepStatus::ok && res.report.breakdown_time.has_value();
    if (broke) smooth.pop_back();  // the row that tripped the monitor
    const auto growth = check_growth(smooth, cert, cfg.growth);
    const bool ok = cert.satisfied && cert.dM0 >= 0.0 && cert.G0 == 0.0 && growth.fraction_monotone == 1.0 &&
                    growth.fraction_ok >= 0.99 && broke;
    pass = pass && ok;
    if (broke) tb.push_back(*res.report.breakdown_time);
    detail += fmt("[%zu cells: F0/threshold = %.4f (threshold %.4f), satisfied %s, monotone %.4f, margin ok %.4f, "
                  "t_b %s] ",
                  cells, cert.F0 / cert.threshold, cert.threshold, cert.satisfied ? "yes" : "no",
                  growth.fraction_monotone, growth.fraction_ok,
                  broke ? format_double(*res.report.breakdown_time).c_str() : "none");
  }
  if (tb.size() == 2) {
    const double spread = std::abs(tb[1] - tb[0]) / tb[0];
    pass = pass && spread <= 0.1;
    detail += fmt("t_b spread %.3g; ", spread);
  }
  {
    // informational: the default monitor factor
    const auto cfg = breakdown_scenario(1024, MonitorOptions{}.grad_factor);
    auto sim = make_simulation<BulkEquations>(cfg);
    const auto res = run<BulkEquations>(sim, cfg.t_end, nullptr, {});
    detail += fmt("default grad_factor %g: %s; ", cfg.monitor.grad_factor, res.report.verdict.c_str());
  }
  const double secs = seconds_since(t0);
  pass = pass && secs < 600.0;
  return {pass, detail + fmt("%.1f s", secs)};
}

Outcome shear_analog() {
  MaterialLaw law;
  ReferenceState ref;
  ref.R = 0.5;
  ShearSimulation sim(Grid1D::planar(1200, 0.0, 6.0), law, ref);
  sim.set_origin(3.0);
  BumpProfile p;
  p.density = 0.01;
  p.velocity = 0.01;
  p.stress = 0.02;
  p.transverse = 0.01;
  p.shear_stress = 0.01;
  apply_profile(sim, p);
  RunOptions ro;
  ro.cadence = 5;
  const auto res = run<ShearEquations>(sim, 1.0, nullptr, ro);
  const double g_err = g_law_error(res.report.series, 1.0);
  Sampler s(8);
  double speed_err = 0.0;
  for (int i = 0; i < 1000; ++i) speed_err = std::max(speed_err, shear_speed_error(s, i % 2 == 1));
  const bool pass = res.final.status == StepStatus::ok && g_err <= 0.01 && speed_err <= 1e-10;
  return {pass, fmt("status %s, trace G(0) = %.4g, G-law max rel err %.3g, shear speed max rel err %.3g",
                    to_string(res.final.status), res.report.series.front().G, g_err, speed_err)};
}

template <class System>
double equilibrium_drift(Grid1D grid, const ReferenceState& ref) {
  Simulation<System> sim(grid, MaterialLaw{}, ref);
  const auto initial = sim.cells();
  for (int k = 0; k < 1000; ++k)
    if (sim.step(1.0).status != StepStatus::ok) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < initial.size(); ++i)
    for (std::size_t j = 0; j < System::n_vars; ++j)
      worst = std::max(worst, std::abs(sim.cells()[i][j] - initial[i][j]) / std::max(1.0, std::abs(initial[i][j])));
  return worst;
}

Outcome equilibrium() {
  ReferenceState moving;
  moving.rho_bar = 1.3;
  moving.v_bar = {0.4, 0.0, 0.0};
  moving.Pi_bar = 0.0;
  ReferenceState rest;
  rest.rho_bar = 0.7;
  const double a = equilibrium_drift<BulkEquations>(Grid1D::planar(200, 0.0, 2.0, Boundary::periodic), moving);
  const double b = equilibrium_drift<BulkEquations>(Grid1D::spherical(200, 2.0), rest);
  const double c = equilibrium_drift<ShearEquations>(Grid1D::planar(200, 0.0, 2.0), moving);
  const double worst = std::max({a, b, c});
  return {worst <= 1e-14, fmt("max relative change after 1000 steps: planar bulk %.3g, spherical bulk %.3g, shear %.3g",
                              a, b, c)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"viscoflow acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-9)")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"characteristic speeds", characteristic_speeds},
      {"principal-symbol determinant", determinant},
      {"Routh-Hurwitz vs roots", routh_hurwitz_equivalence},
      {"dispersion vs simulation", dispersion_vs_simulation},
      {"Navier-Stokes limit", navier_stokes_limit},
      {"conservation and G-law", conservation_and_g_law},
      {"breakdown scenario", breakdown_scenario_check},
      {"shear analog", shear_analog},
      {"equilibrium fixed point", equilibrium},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<int>(i) + 1 != only) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %zu (%s): %s  %s\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
