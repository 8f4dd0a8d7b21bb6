#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "viscoflow/linear_stability.hpp"
#include "viscoflow/profiles.hpp"
#include "viscoflow/run.hpp"
#include "viscoflow/solver.hpp"

namespace viscoflow {

class FitError : public std::runtime_error {
 public:
  FitError(const std::string& what, double residual) : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Complex amplitude a(t) of one Fourier component.
struct ModeSample {
  double t = 0.0;
  std::complex<double> a;
};

struct RingdownFit {
  std::complex<double> x;  // fitted growth exponent: Re = rate, Im = angular frequency
  double residual = 0.0;   // rms misfit of log|a| and unwrapped phase
};

/// Least-squares line through log|a| and the unwrapped phase of a(t).
inline RingdownFit fit_ringdown(const std::vector<ModeSample>& samples, double max_residual = 1e-3) {
  if (samples.size() < 4) throw FitError("ring-down fit needs at least 4 samples", 0.0);
  const std::size_t n = samples.size();
  std::vector<double> t(n), la(n), ph(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(samples[i].a) == 0.0) throw FitError("mode amplitude vanished", 0.0);
    t[i] = samples[i].t;
    la[i] = std::log(std::abs(samples[i].a));
    ph[i] = std::arg(samples[i].a);
    if (i > 0) {
      while (ph[i] - ph[i - 1] > M_PI) ph[i] -= 2.0 * M_PI;
      while (ph[i] - ph[i - 1] < -M_PI) ph[i] += 2.0 * M_PI;
    }
  }
  double tm = 0.0, lm = 0.0, pm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    tm += t[i];
    lm += la[i];
    pm += ph[i];
  }
  tm /= n;
  lm /= n;
  pm /= n;
  double stt = 0.0, stl = 0.0, stp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    stt += (t[i] - tm) * (t[i] - tm);
    stl += (t[i] - tm) * (la[i] - lm);
    stp += (t[i] - tm) * (ph[i] - pm);
  }
  if (stt == 0.0) throw FitError("samples span no time", 0.0);
  const double rate = stl / stt;
  const double freq = stp / stt;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double el = la[i] - (lm + rate * (t[i] - tm));
    const double ep = ph[i] - (pm + freq * (t[i] - tm));
    ss += el * el + ep * ep;
  }
  const double residual = std::sqrt(ss / n);
  if (residual > max_residual)
    throw FitError("signal is not a single damped exponential (rms residual " + std::to_string(residual) + ")",
                   residual);
  return {{rate, freq}, residual};
}

/// Fourier coefficient at +k of field `field` minus its reference value
/// (unnormalized by the cell-average filter; only ratios in time matter).
template <class System>
std::complex<double> fourier_component(const Simulation<System>& sim, std::size_t field, double k) {
  const auto& g = sim.grid();
  const double ref = System::reference_cell(sim.reference())[field];
  std::complex<double> acc;
  for (std::size_t i = 0; i < sim.cells().size(); ++i)
    acc += (sim.cells()[i][field] - ref) * std::polar(1.0, -k * g.center(i));
  return acc / static_cast<double>(sim.cells().size());
}

struct RingdownOptions {
  std::size_t cells = 512;
  std::size_t wavelengths = 1;   // domain length = wavelengths * 2 pi / k
  double amplitude = 1e-6;       // relative to rho_bar
  double t_end = 8.0;
  std::size_t samples = 200;
  double rel_tol = 0.02;
  SolverOptions solver;
};

struct ComparisonRecord {
  std::complex<double> predicted;  // least-damped root x of the dispersion polynomial
  RingdownFit fitted;
  double rate_error = 0.0;       // relative error of Re x
  double frequency_error = 0.0;  // relative error of Im x
  bool within_tolerance = false;
  std::size_t steps = 0;
};

/// Seeds the least-damped eigenmode at wavenumber k on a periodic planar grid,
/// evolves it, and compares the fitted exponent with the predicted root.
/// Bulk: fits rho. Shear: fits rho for the acoustic branch, v2 for the transverse one.
template <class System>
ComparisonRecord verify_against_simulation(const MaterialLaw& law, const ReferenceState& ref, double k,
                                           const RingdownOptions& opt = {},
                                           WaveMode mode = WaveMode::acoustic) {
  if (!(k > 0.0)) throw std::invalid_argument("verify_against_simulation: k must be positive");
  const Background bg = Background::from(ref, law);
  PlaneWaveMode pw;
  std::size_t field = System::rho;
  if constexpr (System::n_vars == BulkEquations::n_vars) {
    pw = bulk_plane_wave(bg, k);
  } else {
    pw = shear_plane_wave(bg, k, mode);
    if (mode == WaveMode::shear_transverse) field = 2;
  }
  // scale so the largest entry is `amplitude * rho_bar`
  double peak = 0.0;
  for (const auto& c : pw.shape) peak = std::max(peak, std::abs(c));
  const double length = static_cast<double>(opt.wavelengths) * 2.0 * M_PI / k;
  Simulation<System> sim(Grid1D::planar(opt.cells, 0.0, length, Boundary::periodic), law, ref, opt.solver);
  apply_plane_wave(sim, k, pw, opt.amplitude * ref.rho_bar / peak);

  std::vector<ModeSample> samples;
  samples.push_back({0.0, fourier_component(sim, field, k)});
  RunOptions ro;
  for (std::size_t s = 1; s <= opt.samples; ++s)
    ro.snapshot_times.push_back(opt.t_end * static_cast<double>(s) / static_cast<double>(opt.samples));
  const auto res = run<System>(
      sim, opt.t_end,
      [&](const Simulation<System>& s, ObserverEvent e) {
        if (e == ObserverEvent::snapshot && s.time() > 0.0) samples.push_back({s.time(), fourier_component(s, field, k)});
      },
      ro);
  if (res.final.status != StepStatus::ok) throw FitError("linear run failed: " + res.report.verdict, 0.0);

  ComparisonRecord rec;
  rec.predicted = pw.x;
  rec.fitted = fit_ringdown(samples);
  rec.steps = sim.step_count();
  rec.rate_error = std::abs(rec.fitted.x.real() - pw.x.real()) / std::abs(pw.x.real());
  rec.frequency_error = pw.x.imag() == 0.0
                            ? std::abs(rec.fitted.x.imag())
                            : std::abs(rec.fitted.x.imag() - pw.x.imag()) / std::abs(pw.x.imag());
  rec.within_tolerance = rec.rate_error <= opt.rel_tol && rec.frequency_error <= opt.rel_tol;
  return rec;
}

}  // namespace viscoflow
