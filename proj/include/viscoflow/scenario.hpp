#pragma once

#include <chrono>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "viscoflow/config.hpp"
#include "viscoflow/csv.hpp"
#include "viscoflow/diagnostics.hpp"
#include "viscoflow/linear_stability.hpp"
#include "viscoflow/profiles.hpp"
#include "viscoflow/quasilinear.hpp"
#include "viscoflow/run.hpp"
#include "viscoflow/solver.hpp"

namespace viscoflow {

inline constexpr const char* version_string = "viscoflow 0.1.0";

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int config_error = 2;
inline constexpr int breakdown = 3;
inline constexpr int numerical_failure = 4;
}  // namespace exit_code

struct RunRecord {
  std::string command;
  std::string config_echo;  // print_config of the resolved config
  std::vector<std::string> outputs;
  std::string status;
  int exit_code = exit_code::ok;
  double wall_seconds = 0.0;
  std::string version = version_string;
};

inline std::string to_text(const RunRecord& r) {
  std::ostringstream os;
  os << "# run record\n";
  os << "# version: " << r.version << "\n";
  os << "# command: " << r.command << "\n";
  os << "# status: " << r.status << "\n";
  os << "# exit_code: " << r.exit_code << "\n";
  os << "# wall_seconds: " << format_double(r.wall_seconds) << "\n";
  for (const auto& o : r.outputs) os << "# output: " << o << "\n";
  os << r.config_echo;
  return os.str();
}

struct SweepSpec {
  double k_min = 0.0;
  double k_max = 1.0;
  std::size_t count = 2;
};

/// "kmin:kmax:n"
inline SweepSpec parse_sweep(const std::string& s) {
  const auto a = s.find(':');
  const auto b = a == std::string::npos ? a : s.find(':', a + 1);
  SweepSpec out;
  if (b == std::string::npos || !parse_double(s.substr(0, a), out.k_min) ||
      !parse_double(s.substr(a + 1, b - a - 1), out.k_max))
    throw ConfigError(std::vector<ConfigIssue>{{"--sweep", "expected kmin:kmax:n, got '" + s + "'"}});
  try {
    out.count = config_detail::to_count(s.substr(b + 1));
  } catch (const std::exception&) {
    throw ConfigError(std::vector<ConfigIssue>{{"--sweep", "sample count must be a positive integer in '" + s + "'"}});
  }
  if (out.count < 1 || !(out.k_max >= out.k_min) || out.k_min < 0.0)
    throw ConfigError(std::vector<ConfigIssue>{{"--sweep", "need 0 <= kmin <= kmax and n >= 1"}});
  return out;
}

struct DispatchOptions {
  std::string out_dir;  // empty: nothing written to disk
  bool diagnostics = false;
  std::optional<SweepSpec> sweep;
  std::string command_line;
};

/// Simulation with the configured initial data applied.
template <class System>
Simulation<System> make_simulation(const ScenarioConfig& c) {
  Simulation<System> sim(c.grid(), c.material, c.reference, c.solver, c.monitor);
  if (c.geometry == Geometry::planar) sim.set_origin(c.origin);
  if (c.profile == ProfileKind::bump) {
    BumpProfile p = c.bump;
    apply_profile(sim, p);
    if (c.F_factor > 0.0) {
      const auto cert = certificate(sim);
      if (!(cert.F0 > 0.0)) throw ConfigError(std::vector<ConfigIssue>{{"profile.F_factor", "velocity bump gives F(0) <= 0; cannot rescale"}});
      p.velocity *= c.F_factor * cert.threshold / cert.F0;
      apply_profile(sim, p);
    }
  } else {
    const Background bg = Background::from(c.reference, c.material);
    PlaneWaveMode mode;
    if constexpr (System::n_vars == BulkEquations::n_vars)
      mode = bulk_plane_wave(bg, c.wave_k);
    else
      mode = shear_plane_wave(bg, c.wave_k, c.wave_mode);
    double peak = 0.0;
    for (const auto& v : mode.shape) peak = std::max(peak, std::abs(v));
    apply_plane_wave(sim, c.wave_k, mode, c.wave_amplitude * c.reference.rho_bar / peak);
  }
  return sim;
}

namespace scenario_detail {

inline std::string vec_text(const Vec3& v) {
  return "(" + format_double(v[0]) + ", " + format_double(v[1]) + ", " + format_double(v[2]) + ")";
}

inline Vec3 unit(const Vec3& v) {
  const double n = norm(v);
  return {v[0] / n, v[1] / n, v[2] / n};
}

inline std::string complex_text(std::complex<double> z) {
  std::string s = format_double(z.real());
  s += z.imag() < 0.0 ? " - " : " + ";
  return s + format_double(std::abs(z.imag())) + "i";
}

inline std::ofstream open_output(const DispatchOptions& opt, const std::string& name, RunRecord& rec) {
  std::filesystem::create_directories(opt.out_dir);
  const auto path = std::filesystem::path(opt.out_dir) / name;
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  rec.outputs.push_back(path.string());
  return f;
}

inline void speeds(const ScenarioConfig& c, const DispatchOptions& opt, std::ostream& out, RunRecord& rec) {
  const Vec3 n = unit(c.direction);
  QuasilinearSystem sys;
  std::vector<double> closed;
  const auto& ref = c.reference;
  if (c.system == SystemKind::bulk) {
    const BulkState s{ref.rho_bar, ref.v_bar, ref.Pi_bar};
    sys = assemble_bulk(s, c.material);
    closed = characteristic_speeds_bulk_closed(s, c.material, n);
  } else {
    ShearState s{ref.rho_bar, ref.v_bar, SymTensor3::isotropic(ref.Pi_bar)};
    sys = assemble_shear(s, c.material);
    closed = characteristic_speeds_shear_closed(s, c.material, n);
  }
  const auto rep = characteristic_speeds_numeric(sys, n, c.characteristic);
  out << "system      " << (c.system == SystemKind::bulk ? "bulk" : "shear") << "\n";
  out << "state       rho=" << format_double(ref.rho_bar) << " v=" << vec_text(ref.v_bar)
      << " Pi=" << format_double(ref.Pi_bar) << "\n";
  out << "direction   " << vec_text(n) << "\n";
  out << "verdict     " << to_string(rep.hyperbolic_verdict) << (rep.note.empty() ? "" : " (" + rep.note + ")") << "\n";
  out << "symmetric   " << (rep.symmetric ? "yes" : "no") << "\n";
  out << "A0 pos.def. " << (rep.a0_posdef ? "yes" : "no") << "\n";
  out << "eigvec cond " << format_double(rep.eigenvector_condition) << "\n";
  out << "\n" << std::left << std::setw(26) << "speed" << std::setw(12) << "algebraic" << "geometric\n";
  for (const auto& m : rep.multiplicities)
    out << std::setw(26) << format_double(m.speed) << std::setw(12) << m.algebraic << m.geometric << "\n";
  out << "\nclosed form:";
  for (double s : closed) out << " " << format_double(s);
  out << "\n";
  if (!opt.out_dir.empty()) {
    auto f = open_output(opt, "speeds.csv", rec);
    CsvWriter w(f, {"speed", "algebraic", "geometric"});
    for (const auto& m : rep.multiplicities)
      w.row({m.speed, static_cast<double>(m.algebraic), static_cast<double>(m.geometric)});
  }
}

inline void print_verdict(std::ostream& out, const std::string& label, const Polynomial& p, const StabilityVerdict& v,
                          double shift) {
  out << label << "\n  coefficients:";
  for (double a : p) out << " " << format_double(a);
  out << "\n  hurwitz:";
  for (double d : v.deltas) out << " " << format_double(d);
  out << "  -> " << (v.stable ? "all positive" : "not all positive") << "\n";
  for (const auto& r : v.roots)
    out << "  root x = " << complex_text(r) << "   omega = " << complex_text(omega_from_root(r, shift)) << "\n";
  out << "  classification: " << to_string(v.classification) << "\n";
}

inline void stability(const ScenarioConfig& c, std::ostream& out) {
  const Background bg = Background::from(c.reference, c.material);
  out << "wavevector " << vec_text(c.wavevector) << "\n";
  if (c.system == SystemKind::bulk) {
    const auto problem = bulk_dispersion(bg, c.wavevector);
    const auto v = analyze(problem, c.marginal_band);
    print_verdict(out, "bulk cubic in x = -i Omega", problem.poly, v, problem.shift);
    out << "verdict " << to_string(v.classification) << "\n";
  } else {
    const auto d = shear_dispersion(bg, c.wavevector, c.acoustic_cubic);
    const auto v = analyze(d, c.marginal_band);
    print_verdict(out, "relaxation factor (multiplicity 3)", d.relaxation, v.relaxation, d.shift);
    print_verdict(out, "shear factor (multiplicity 2)", d.shear, v.shear, d.shift);
    print_verdict(out, std::string("acoustic factor (") +
                           (c.acoustic_cubic == AcousticCubic::derived ? "derived" : "published") + ")",
                  d.acoustic, v.acoustic, d.shift);
    out << "verdict " << to_string(v.classification) << "\n";
  }
}

inline void dispersion(const ScenarioConfig& c, const DispatchOptions& opt, std::ostream& out, RunRecord& rec) {
  const SweepSpec sw = opt.sweep.value_or(SweepSpec{0.0, norm(c.wavevector), 1});
  const Vec3 dir = norm(c.wavevector) > 0.0 ? unit(c.wavevector) : Vec3{1.0, 0.0, 0.0};
  const Background bg = Background::from(c.reference, c.material);
  const std::size_t branches = c.system == SystemKind::bulk ? 3 : 6;
  std::vector<std::string> header{"k"};
  for (std::size_t b = 1; b <= branches; ++b) {
    header.push_back("re_omega_" + std::to_string(b));
    header.push_back("im_omega_" + std::to_string(b));
  }
  std::ofstream file;
  if (!opt.out_dir.empty()) file = open_output(opt, "dispersion.csv", rec);
  std::ostream& dst = opt.out_dir.empty() ? out : file;
  CsvWriter w(dst, header);
  for (std::size_t i = 0; i < sw.count; ++i) {
    const double k = sw.count == 1 ? sw.k_min
                                   : sw.k_min + (sw.k_max - sw.k_min) * static_cast<double>(i) /
                                                    static_cast<double>(sw.count - 1);
    const Vec3 kv{k * dir[0], k * dir[1], k * dir[2]};
    std::vector<std::complex<double>> roots;
    double shift = 0.0;
    if (c.system == SystemKind::bulk) {
      const auto p = bulk_dispersion(bg, kv);
      roots = poly_roots(p.poly).roots;
      shift = p.shift;
    } else {
      const auto d = shear_dispersion(bg, kv, c.acoustic_cubic);
      shift = d.shift;
      for (const auto* f : {&d.relaxation, &d.shear, &d.acoustic}) {
        const auto r = poly_roots(*f).roots;
        roots.insert(roots.end(), r.begin(), r.end());
      }
    }
    std::vector<double> row{k};
    for (std::size_t b = 0; b < branches; ++b) {
      const auto om = b < roots.size() ? omega_from_root(roots[b], shift) : std::complex<double>(NAN, NAN);
      row.push_back(om.real());
      row.push_back(om.imag());
    }
    w.row(row);
  }
  if (!opt.out_dir.empty()) out << "wrote " << rec.outputs.back() << " (" << sw.count << " wavenumbers)\n";
}

template <class System>
std::vector<std::string> snapshot_header() {
  if constexpr (System::n_vars == BulkEquations::n_vars)
    return {"t", "cell_center", "rho", "u", "Pi"};
  else
    return {"t", "cell_center", "rho", "u", "v2", "v3", "Pi", "Pi11", "Pi12", "Pi13", "Pi22", "Pi23", "Pi33"};
}

template <class System>
void write_snapshot(CsvWriter& w, const Simulation<System>& sim) {
  for (std::size_t i = 0; i < sim.cells().size(); ++i) {
    const auto& q = sim.cells()[i];
    std::vector<double> row{sim.time(), sim.grid().center(i)};
    if constexpr (System::n_vars == BulkEquations::n_vars) {
      row.insert(row.end(), q.begin(), q.end());
    } else {
      row.insert(row.end(), q.begin(), q.begin() + 4);
      row.push_back(System::bulk_scalar(q));
      row.insert(row.end(), q.begin() + 4, q.end());
    }
    w.row(row);
  }
}

inline const std::vector<std::string> series_header = {"t", "dt", "F", "dM", "G", "max_grad_u", "max_grad_rho"};

inline std::vector<double> series_values(const SeriesRow& r) {
  return {r.t, r.dt, r.F, r.dM, r.G, r.max_grad_u, r.max_grad_rho};
}

template <class System>
int simulate(const ScenarioConfig& c, const DispatchOptions& opt, std::ostream& out, std::ostream& err,
             RunRecord& rec) {
  auto sim = make_simulation<System>(c);
  std::ofstream snap_file;
  std::optional<CsvWriter> snaps;
  if (!opt.out_dir.empty()) {
    snap_file = open_output(opt, "snapshots.csv", rec);
    snaps.emplace(snap_file, snapshot_header<System>());
  }
  std::optional<CsvWriter> stream;
  if (opt.diagnostics) stream.emplace(out, series_header);

  RunOptions ro;
  ro.cadence = c.series_cadence;
  ro.snapshot_times = c.snapshot_times;
  ro.max_steps = c.max_steps;
  std::size_t streamed = 0;
  double last_snapshot = -1.0;
  const auto res = run<System>(
      sim, c.t_end,
      [&](const Simulation<System>& s, ObserverEvent e) {
        if (e == ObserverEvent::snapshot && snaps) {
          write_snapshot(*snaps, s);
          last_snapshot = s.time();
        }
        if (stream && (e == ObserverEvent::start || e == ObserverEvent::series)) {
          stream->row(series_values(sample(s, s.last_dt())));
          ++streamed;
        }
      },
      ro);
  if (stream)
    for (std::size_t i = streamed; i < res.report.series.size(); ++i) stream->row(series_values(res.report.series[i]));
  if (snaps && last_snapshot != sim.time()) write_snapshot(*snaps, sim);

  if (!opt.out_dir.empty()) {
    auto f = open_output(opt, "series.csv", rec);
    CsvWriter w(f, series_header);
    for (const auto& r : res.report.series) w.row(series_values(r));
  }
  std::ostream& info = opt.diagnostics ? err : out;
  info << "status      " << to_string(res.final.status) << "\n";
  info << "t           " << format_double(sim.time()) << "\n";
  info << "steps       " << sim.step_count() << "\n";
  info << "verdict     " << res.report.verdict << "\n";
  if (res.report.breakdown_time) info << "breakdown   t = " << format_double(*res.report.breakdown_time) << "\n";
  rec.status = std::string(to_string(res.final.status)) + (res.final.diagnostic.empty() ? "" : ": " + res.final.diagnostic);
  return res.final.status == StepStatus::ok ? exit_code::ok : exit_code::breakdown;
}

inline void blowup_cert(const ScenarioConfig& c, std::ostream& out) {
  if (c.system != SystemKind::bulk) throw CertificateRefused("certificate requires the bulk system");
  const auto sim = make_simulation<BulkEquations>(c);
  const auto cert = certificate(sim);
  out << "R           " << format_double(cert.R) << "\n";
  out << "c_bar_v     " << format_double(cert.c_bar_v) << "\n";
  out << "max_rho0    " << format_double(cert.max_rho0) << "\n";
  out << "threshold   " << format_double(cert.threshold) << "\n";
  out << "F0          " << format_double(cert.F0) << "\n";
  out << "dM0         " << format_double(cert.dM0) << "\n";
  out << "G0          " << format_double(cert.G0) << "\n";
  out << "satisfied   " << (cert.satisfied ? "true" : "false") << "\n";
}

}  // namespace scenario_detail

/// Runs one subcommand. Never throws for configuration or numerical problems;
/// they end up in the record's status and exit code.
inline RunRecord dispatch(const std::string& subcommand, const ScenarioConfig& cfg, const DispatchOptions& opt,
                          std::ostream& out, std::ostream& err) {
  using namespace scenario_detail;
  RunRecord rec;
  rec.command = opt.command_line.empty() ? subcommand : opt.command_line;
  rec.config_echo = print_config(cfg);
  rec.status = "ok";
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (subcommand == "speeds") {
      speeds(cfg, opt, out, rec);
    } else if (subcommand == "stability") {
      stability(cfg, out);
    } else if (subcommand == "dispersion") {
      dispersion(cfg, opt, out, rec);
    } else if (subcommand == "simulate") {
      rec.exit_code = cfg.system == SystemKind::bulk ? simulate<BulkEquations>(cfg, opt, out, err, rec)
                                                     : simulate<ShearEquations>(cfg, opt, out, err, rec);
    } else if (subcommand == "blowup-cert") {
      blowup_cert(cfg, out);
    } else {
      throw ConfigError(std::vector<ConfigIssue>{{"command", "unknown subcommand '" + subcommand + "'"}});
    }
  } catch (const ConfigError& e) {
    rec.exit_code = exit_code::config_error;
    rec.status = "config error";
    err << e.what();
  } catch (const CertificateRefused& e) {
    rec.exit_code = exit_code::config_error;
    rec.status = std::string("certificate refused: ") + e.what();
    err << rec.status << "\n";
  } catch (const std::exception& e) {
    rec.exit_code = exit_code::numerical_failure;
    rec.status = std::string("numerical failure: ") + e.what();
    err << rec.status << "\n";
  }
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!opt.out_dir.empty()) {
    try {
      std::filesystem::create_directories(opt.out_dir);
      const auto path = (std::filesystem::path(opt.out_dir) / "run_record.txt").string();
      rec.outputs.push_back(path);
      std::ofstream(path) << to_text(rec);
    } catch (const std::exception& e) {
      err << "could not write run record: " << e.what() << "\n";
      if (rec.exit_code == exit_code::ok) rec.exit_code = exit_code::numerical_failure;
    }
  }
  return rec;
}

}  // namespace viscoflow
