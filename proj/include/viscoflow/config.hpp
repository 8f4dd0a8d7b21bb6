#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "viscoflow/csv.hpp"
#include "viscoflow/diagnostics.hpp"
#include "viscoflow/fluid_model.hpp"
#include "viscoflow/grid.hpp"
#include "viscoflow/linear_stability.hpp"
#include "viscoflow/profiles.hpp"
#include "viscoflow/quasilinear.hpp"
#include "viscoflow/solver.hpp"

namespace viscoflow {

enum class SystemKind { bulk, shear };
enum class ProfileKind { bump, plane_wave };

struct ScenarioConfig {
  // [model]
  SystemKind system = SystemKind::bulk;
  Geometry geometry = Geometry::planar;
  // [material]
  MaterialLaw material;
  // [reference]
  ReferenceState reference;
  // [profile]
  ProfileKind profile = ProfileKind::bump;
  BumpProfile bump;
  double F_factor = 0.0;  // > 0: velocity amplitude rescaled so F(0) = F_factor * threshold
  double origin = 0.0;
  double wave_k = 1.0;
  double wave_amplitude = 1e-6;
  WaveMode wave_mode = WaveMode::acoustic;
  // [grid]
  std::size_t n_cells = 512;
  double x_min = -4.0;  // ignored in spherical geometry, which starts at r = 0
  double x_max = 4.0;
  Boundary boundary = Boundary::reference;
  // [solver]
  SolverOptions solver;
  // [run]
  double t_end = 1.0;
  std::vector<double> snapshot_times;
  std::size_t series_cadence = 1;
  std::size_t max_steps = 100000000;
  bool deterministic = true;
  // [analysis]
  Vec3 direction{1.0, 0.0, 0.0};
  Vec3 wavevector{1.0, 0.0, 0.0};
  AcousticCubic acoustic_cubic = AcousticCubic::derived;
  // [tolerances]
  CharacteristicOptions characteristic;
  double marginal_band = default_marginal_band;
  MonitorOptions monitor;
  GrowthOptions growth;
  double ringdown_rel_tol = 0.02;
  double fit_residual = 1e-3;

  Grid1D grid() const {
    if (geometry == Geometry::spherical) return Grid1D::spherical(n_cells, x_max);
    return Grid1D::planar(n_cells, x_min, x_max, boundary);
  }

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

struct ConfigIssue {
  std::string where;  // "line N", "override N" or "config"
  std::string message;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues)
      : std::runtime_error(join(issues)), issues_(std::move(issues)) {}
  const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

 private:
  static std::string join(const std::vector<ConfigIssue>& issues) {
    std::string s;
    for (const auto& i : issues) s += i.where + ": " + i.message + "\n";
    return s;
  }
  std::vector<ConfigIssue> issues_;
};

namespace config_detail {

class ValueError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

inline double to_double(const std::string& s) {
  double v = 0.0;
  if (!parse_double(s, v)) throw ValueError("expected a number, got '" + s + "'");
  return v;
}

inline std::size_t to_count(const std::string& s) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty())
    throw ValueError("expected a non-negative integer, got '" + s + "'");
  return static_cast<std::size_t>(v);
}

inline bool to_bool(const std::string& s) {
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw ValueError("expected true or false, got '" + s + "'");
}

inline std::vector<double> to_list(const std::string& s) {
  std::string spaced = s;
  std::replace(spaced.begin(), spaced.end(), ',', ' ');
  std::vector<double> out;
  for (const auto& tok : split_ws(spaced)) out.push_back(to_double(tok));
  return out;
}

inline Vec3 to_vec3(const std::string& s) {
  const auto v = to_list(s);
  if (v.size() != 3) throw ValueError("expected three numbers, got '" + s + "'");
  return {v[0], v[1], v[2]};
}

inline std::string list_text(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_double(v[i]);
  return s;
}

template <class E>
E to_enum(const std::string& s, std::initializer_list<std::pair<const char*, E>> names) {
  std::string options;
  for (const auto& [name, value] : names) {
    if (s == name) return value;
    options += std::string(options.empty() ? "" : ", ") + name;
  }
  throw ValueError("expected one of {" + options + "}, got '" + s + "'");
}

/// "1.5" | "constant 1.5" | "power c p" | "stress_lorentzian c s"
inline TransportLaw to_law(const std::string& s) {
  const auto tok = split_ws(s);
  if (tok.empty()) throw ValueError("empty transport law");
  if (tok.size() == 1) return TransportLaw::constant(to_double(tok[0]));
  const auto kind = to_enum<LawSpec::Kind>(tok[0], {{"constant", LawSpec::Kind::constant},
                                                    {"power", LawSpec::Kind::power},
                                                    {"stress_lorentzian", LawSpec::Kind::stress_lorentzian}});
  const std::size_t arity = kind == LawSpec::Kind::constant ? 1 : 2;
  if (tok.size() != arity + 1)
    throw ValueError("law '" + tok[0] + "' takes " + std::to_string(arity) + " parameter(s)");
  std::vector<double> params;
  for (std::size_t i = 1; i < tok.size(); ++i) params.push_back(to_double(tok[i]));
  return TransportLaw::named({kind, params});
}

inline std::string law_text(const TransportLaw& law) {
  const auto* spec = law.spec();
  if (spec == nullptr) return "<function>";
  if (spec->kind == LawSpec::Kind::constant) return format_double(spec->params.at(0));
  std::string s = spec->kind == LawSpec::Kind::power ? "power" : "stress_lorentzian";
  for (double p : spec->params) s += " " + format_double(p);
  return s;
}

struct FieldDef {
  const char* section;
  const char* key;
  std::function<std::string(const ScenarioConfig&)> get;
  std::function<void(ScenarioConfig&, const std::string&)> set;
};

#define VF_NUM(sec, name, member)                                                   \
  FieldDef {                                                                        \
    sec, name, [](const ScenarioConfig& c) { return format_double(c.member); },     \
        [](ScenarioConfig& c, const std::string& v) { c.member = to_double(v); }    \
  }
#define VF_COUNT(sec, name, member)                                                 \
  FieldDef {                                                                        \
    sec, name, [](const ScenarioConfig& c) { return std::to_string(c.member); },    \
        [](ScenarioConfig& c, const std::string& v) { c.member = to_count(v); }     \
  }

inline const std::vector<FieldDef>& fields() {
  static const std::vector<FieldDef> defs = {
      {"model", "system", [](const ScenarioConfig& c) { return std::string(c.system == SystemKind::bulk ? "bulk" : "shear"); },
       [](ScenarioConfig& c, const std::string& v) {
         c.system = to_enum<SystemKind>(v, {{"bulk", SystemKind::bulk}, {"shear", SystemKind::shear}});
       }},
      {"model", "geometry", [](const ScenarioConfig& c) { return std::string(to_string(c.geometry)); },
       [](ScenarioConfig& c, const std::string& v) {
         c.geometry = to_enum<Geometry>(v, {{"planar", Geometry::planar}, {"spherical", Geometry::spherical}});
       }},

      VF_NUM("material", "A", material.A),
      VF_NUM("material", "gamma", material.gamma),
      {"material", "zeta", [](const ScenarioConfig& c) { return law_text(c.material.zeta); },
       [](ScenarioConfig& c, const std::string& v) { c.material.zeta = to_law(v); }},
      {"material", "eta", [](const ScenarioConfig& c) { return law_text(c.material.eta); },
       [](ScenarioConfig& c, const std::string& v) { c.material.eta = to_law(v); }},
      {"material", "tau", [](const ScenarioConfig& c) { return law_text(c.material.tau); },
       [](ScenarioConfig& c, const std::string& v) { c.material.tau = to_law(v); }},

      VF_NUM("reference", "rho_bar", reference.rho_bar),
      VF_NUM("reference", "Pi_bar", reference.Pi_bar),
      {"reference", "v_bar",
       [](const ScenarioConfig& c) { return list_text({c.reference.v_bar.begin(), c.reference.v_bar.end()}); },
       [](ScenarioConfig& c, const std::string& v) { c.reference.v_bar = to_vec3(v); }},
      VF_NUM("reference", "R", reference.R),

      {"profile", "kind", [](const ScenarioConfig& c) { return std::string(c.profile == ProfileKind::bump ? "bump" : "plane_wave"); },
       [](ScenarioConfig& c, const std::string& v) {
         c.profile = to_enum<ProfileKind>(v, {{"bump", ProfileKind::bump}, {"plane_wave", ProfileKind::plane_wave}});
       }},
      VF_NUM("profile", "density", bump.density),
      VF_NUM("profile", "velocity", bump.velocity),
      VF_NUM("profile", "stress", bump.stress),
      VF_NUM("profile", "transverse", bump.transverse),
      VF_NUM("profile", "shear_stress", bump.shear_stress),
      VF_NUM("profile", "F_factor", F_factor),
      VF_NUM("profile", "origin", origin),
      VF_NUM("profile", "k", wave_k),
      VF_NUM("profile", "amplitude", wave_amplitude),
      {"profile", "mode",
       [](const ScenarioConfig& c) { return std::string(c.wave_mode == WaveMode::acoustic ? "acoustic" : "shear_transverse"); },
       [](ScenarioConfig& c, const std::string& v) {
         c.wave_mode = to_enum<WaveMode>(v, {{"acoustic", WaveMode::acoustic}, {"shear_transverse", WaveMode::shear_transverse}});
       }},

      VF_COUNT("grid", "n_cells", n_cells),
      VF_NUM("grid", "x_min", x_min),
      VF_NUM("grid", "x_max", x_max),
      {"grid", "boundary", [](const ScenarioConfig& c) { return std::string(to_string(c.boundary)); },
       [](ScenarioConfig& c, const std::string& v) {
         c.boundary = to_enum<Boundary>(v, {{"reference", Boundary::reference}, {"periodic", Boundary::periodic}});
       }},

      VF_NUM("solver", "cfl", solver.cfl),
      {"solver", "limiter", [](const ScenarioConfig& c) { return std::string(to_string(c.solver.limiter)); },
       [](ScenarioConfig& c, const std::string& v) {
         c.solver.limiter = to_enum<Limiter>(v, {{"minmod", Limiter::minmod}, {"mc", Limiter::mc},
                                                  {"central", Limiter::central}, {"none", Limiter::none}});
       }},
      {"solver", "integrator", [](const ScenarioConfig& c) { return std::string(to_string(c.solver.integrator)); },
       [](ScenarioConfig& c, const std::string& v) {
         c.solver.integrator = to_enum<Integrator>(v, {{"ssp_rk2", Integrator::ssp_rk2}, {"ssp_rk3", Integrator::ssp_rk3}});
       }},
      VF_NUM("solver", "density_floor_rel", solver.density_floor_rel),
      VF_COUNT("solver", "threads", solver.threads),
      VF_COUNT("solver", "min_cells_per_thread", solver.min_cells_per_thread),

      VF_NUM("run", "t_end", t_end),
      {"run", "snapshot_times", [](const ScenarioConfig& c) { return list_text(c.snapshot_times); },
       [](ScenarioConfig& c, const std::string& v) { c.snapshot_times = to_list(v); }},
      VF_COUNT("run", "series_cadence", series_cadence),
      VF_COUNT("run", "max_steps", max_steps),
      {"run", "deterministic", [](const ScenarioConfig& c) { return std::string(c.deterministic ? "true" : "false"); },
       [](ScenarioConfig& c, const std::string& v) { c.deterministic = to_bool(v); }},

      {"analysis", "direction", [](const ScenarioConfig& c) { return list_text({c.direction.begin(), c.direction.end()}); },
       [](ScenarioConfig& c, const std::string& v) { c.direction = to_vec3(v); }},
      {"analysis", "wavevector", [](const ScenarioConfig& c) { return list_text({c.wavevector.begin(), c.wavevector.end()}); },
       [](ScenarioConfig& c, const std::string& v) { c.wavevector = to_vec3(v); }},
      {"analysis", "acoustic_cubic",
       [](const ScenarioConfig& c) { return std::string(c.acoustic_cubic == AcousticCubic::derived ? "derived" : "published"); },
       [](ScenarioConfig& c, const std::string& v) {
         c.acoustic_cubic = to_enum<AcousticCubic>(v, {{"derived", AcousticCubic::derived}, {"published", AcousticCubic::published}});
       }},

      VF_NUM("tolerances", "condition_cap", characteristic.condition_cap),
      VF_NUM("tolerances", "cluster_tol", characteristic.cluster_tol),
      VF_NUM("tolerances", "symmetry_tol", characteristic.symmetry_tol),
      VF_NUM("tolerances", "singular_tol", characteristic.singular_tol),
      VF_NUM("tolerances", "imag_tol", characteristic.imag_tol),
      VF_NUM("tolerances", "marginal_band", marginal_band),
      VF_NUM("tolerances", "grad_factor", monitor.grad_factor),
      VF_NUM("tolerances", "dt_floor", monitor.dt_floor),
      VF_NUM("tolerances", "front_tol", monitor.front_tol),
      VF_NUM("tolerances", "front_slack_cells", monitor.front_slack_cells),
      VF_NUM("tolerances", "growth_rel_tol", growth.rel_tol),
      VF_NUM("tolerances", "ringdown_rel_tol", ringdown_rel_tol),
      VF_NUM("tolerances", "fit_residual", fit_residual),
  };
  return defs;
}

#undef VF_NUM
#undef VF_COUNT

inline const FieldDef* find_field(const std::string& section, const std::string& key) {
  for (const auto& f : fields())
    if (key == f.key && (section.empty() || section == f.section)) return &f;
  return nullptr;
}

inline bool known_section(const std::string& s) {
  return std::any_of(fields().begin(), fields().end(), [&](const FieldDef& f) { return s == f.section; });
}

}  // namespace config_detail

/// Constraint checks on a fully populated config. `where` maps "section.key"
/// to the location that last set it.
inline std::vector<ConfigIssue> validate_config(const ScenarioConfig& c,
                                                const std::map<std::string, std::string>& where = {}) {
  std::vector<ConfigIssue> out;
  auto at = [&](const std::string& key) {
    const auto it = where.find(key);
    return it == where.end() ? std::string("config") : it->second;
  };
  auto need = [&](bool ok, const std::string& key, const std::string& msg) {
    if (!ok) out.push_back({at(key), msg});
  };
  auto finite_pos = [](double x) { return std::isfinite(x) && x > 0.0; };

  need(finite_pos(c.material.A), "material.A", "A must be positive");
  need(std::isfinite(c.material.gamma) && c.material.gamma > 1.0, "material.gamma", "gamma must exceed 1");
  auto check_law = [&](const TransportLaw& law, const char* name) {
    const auto* spec = law.spec();
    if (spec == nullptr) return;
    const std::string key = std::string("material.") + name;
    need(finite_pos(spec->params.at(0)), key, std::string(name) + " must be positive");
    if (spec->kind == LawSpec::Kind::stress_lorentzian)
      need(std::isfinite(spec->params.at(1)) && spec->params.at(1) != 0.0, key,
           std::string(name) + " stress scale must be nonzero");
    if (spec->kind == LawSpec::Kind::power)
      need(std::isfinite(spec->params.at(1)), key, std::string(name) + " exponent must be finite");
  };
  check_law(c.material.zeta, "zeta");
  check_law(c.material.eta, "eta");
  check_law(c.material.tau, "tau");

  need(finite_pos(c.reference.rho_bar), "reference.rho_bar", "rho_bar must be positive");
  need(std::isfinite(c.reference.Pi_bar), "reference.Pi_bar", "Pi_bar must be finite");
  need(finite_pos(c.reference.R), "reference.R", "R must be positive");

  if (c.system == SystemKind::shear && c.geometry == Geometry::spherical)
    out.push_back({at("model.geometry"), "unsupported combination: system=shear requires geometry=planar"});
  if (c.geometry == Geometry::spherical) {
    need(norm(c.reference.v_bar) == 0.0, "reference.v_bar", "spherical runs need v_bar = 0");
  } else {
    need(c.x_max > c.x_min, "grid.x_max", "x_max must exceed x_min");
  }
  need(c.n_cells >= 4, "grid.n_cells", "n_cells must be at least 4");
  need(finite_pos(c.x_max), "grid.x_max", "x_max must be positive");

  need(finite_pos(c.solver.cfl) && c.solver.cfl <= 1.0, "solver.cfl", "cfl must lie in (0, 1]");
  need(finite_pos(c.solver.density_floor_rel), "solver.density_floor_rel", "density_floor_rel must be positive");
  need(c.solver.min_cells_per_thread >= 1, "solver.min_cells_per_thread", "min_cells_per_thread must be at least 1");

  need(finite_pos(c.t_end), "run.t_end", "t_end must be positive");
  for (double t : c.snapshot_times)
    need(std::isfinite(t) && t >= 0.0 && t <= c.t_end, "run.snapshot_times", "snapshot times must lie in [0, t_end]");
  need(c.series_cadence >= 1, "run.series_cadence", "series_cadence must be at least 1");
  need(c.max_steps >= 1, "run.max_steps", "max_steps must be at least 1");

  need(norm(c.direction) > 0.0 && std::isfinite(norm(c.direction)), "analysis.direction", "direction must be nonzero");
  need(std::isfinite(norm(c.wavevector)), "analysis.wavevector", "wavevector must be finite");

  const std::pair<double, const char*> positives[] = {
      {c.characteristic.condition_cap, "condition_cap"}, {c.characteristic.cluster_tol, "cluster_tol"},
      {c.characteristic.symmetry_tol, "symmetry_tol"},   {c.characteristic.singular_tol, "singular_tol"},
      {c.characteristic.imag_tol, "imag_tol"},           {c.marginal_band, "marginal_band"},
      {c.monitor.grad_factor, "grad_factor"},            {c.monitor.dt_floor, "dt_floor"},
      {c.monitor.front_tol, "front_tol"},                {c.growth.rel_tol, "growth_rel_tol"},
      {c.ringdown_rel_tol, "ringdown_rel_tol"},          {c.fit_residual, "fit_residual"}};
  for (const auto& [v, name] : positives)
    need(finite_pos(v), std::string("tolerances.") + name, std::string(name) + " must be positive");
  need(std::isfinite(c.monitor.front_slack_cells) && c.monitor.front_slack_cells >= 0.0,
       "tolerances.front_slack_cells", "front_slack_cells must be non-negative");

  if (c.profile == ProfileKind::bump) {
    need(c.reference.rho_bar + std::min(0.0, c.bump.density) > 0.0, "profile.density",
         "density bump makes the initial density non-positive");
    need(std::isfinite(c.bump.velocity) && std::isfinite(c.bump.stress) && std::isfinite(c.bump.transverse) &&
             std::isfinite(c.bump.shear_stress),
         "profile.velocity", "profile amplitudes must be finite");
    need(std::isfinite(c.F_factor) && c.F_factor >= 0.0, "profile.F_factor", "F_factor must be non-negative");
    if (c.F_factor > 0.0) {
      need(c.geometry == Geometry::spherical && c.system == SystemKind::bulk, "profile.F_factor",
           "F_factor needs a spherical bulk run (the certificate applies only there)");
      need(c.bump.velocity != 0.0, "profile.F_factor", "F_factor rescales the velocity bump, which must be nonzero");
    }
    if (c.geometry == Geometry::spherical) need(c.origin == 0.0, "profile.origin", "spherical runs are centred at r = 0");
  } else {
    need(c.geometry == Geometry::planar && c.boundary == Boundary::periodic, "profile.kind",
         "plane_wave needs a planar periodic grid");
    need(finite_pos(c.wave_k), "profile.k", "k must be positive");
    need(finite_pos(c.wave_amplitude), "profile.amplitude", "amplitude must be positive");
    if (finite_pos(c.wave_k) && c.x_max > c.x_min) {
      const double waves = (c.x_max - c.x_min) * c.wave_k / (2.0 * M_PI);
      need(std::abs(waves - std::round(waves)) <= 1e-9 * std::max(1.0, waves) && std::round(waves) >= 1.0, "profile.k",
           "domain length must hold a whole number of wavelengths");
    }
    if (c.system == SystemKind::bulk)
      need(c.wave_mode == WaveMode::acoustic, "profile.mode", "the bulk system only has the acoustic plane wave");
  }

  // front containment for bounded (non-periodic) domains, only once the physics is sane
  if (out.empty() && c.profile == ProfileKind::bump && !(c.geometry == Geometry::planar && c.boundary == Boundary::periodic)) {
    try {
      const Background bg = Background::from(c.reference, c.material);
      double cv = 0.0;
      if (c.system == SystemKind::bulk)
        cv = std::sqrt(bg.c_s * bg.c_s + bg.zeta / (bg.rho0 * bg.tau));
      else
        cv = std::sqrt(bg.c_s * bg.c_s + (bg.zeta + 4.0 * bg.eta / 3.0) / (bg.rho0 * bg.tau));
      const double reach = c.reference.R + (cv + norm(c.reference.v_bar)) * c.t_end;
      const bool inside = c.geometry == Geometry::spherical
                              ? reach < c.x_max
                              : (c.origin + reach < c.x_max && c.origin - reach > c.x_min);
      need(inside, "grid.x_max",
           "domain does not contain the front R + c_v t_end = " + format_double(reach) + " around the origin");
    } catch (const std::exception& e) {
      out.push_back({at("material.zeta"), e.what()});
    }
  }
  return out;
}

/// Parses `text`, then applies each override "section.key=value" (or "key=value").
/// Collects every problem before throwing ConfigError.
inline ScenarioConfig parse_config(std::string_view text, const std::vector<std::string>& overrides = {}) {
  using namespace config_detail;
  ScenarioConfig cfg;
  std::vector<ConfigIssue> issues;
  std::map<std::string, std::string> where;

  auto assign = [&](const std::string& section, const std::string& key, const std::string& value,
                    const std::string& loc) {
    const FieldDef* f = find_field(section, key);
    if (f == nullptr) {
      issues.push_back({loc, "unknown key '" + (section.empty() ? key : section + "." + key) + "'"});
      return;
    }
    try {
      f->set(cfg, value);
      where[std::string(f->section) + "." + f->key] = loc;
    } catch (const ValueError& e) {
      issues.push_back({loc, std::string(f->section) + "." + f->key + ": " + e.what()});
    }
  };

  std::string section;
  std::size_t line_no = 0;
  std::istringstream is{std::string(text)};
  for (std::string raw; std::getline(is, raw);) {
    ++line_no;
    const std::string loc = "line " + std::to_string(line_no);
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        issues.push_back({loc, "malformed section header '" + line + "'"});
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      if (!known_section(section)) issues.push_back({loc, "unknown section [" + section + "]"});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      issues.push_back({loc, "expected key = value, got '" + line + "'"});
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known_section(section) && !section.empty()) continue;  // already reported
    assign(section, key, value, loc);
  }

  for (std::size_t i = 0; i < overrides.size(); ++i) {
    const std::string loc = "override " + std::to_string(i + 1);
    const auto eq = overrides[i].find('=');
    if (eq == std::string::npos) {
      issues.push_back({loc, "expected key=value, got '" + overrides[i] + "'"});
      continue;
    }
    std::string key = trim(overrides[i].substr(0, eq));
    std::string sec;
    if (const auto dot = key.find('.'); dot != std::string::npos) {
      sec = key.substr(0, dot);
      key = key.substr(dot + 1);
    }
    assign(sec, key, trim(overrides[i].substr(eq + 1)), loc);
  }

  if (issues.empty()) issues = validate_config(cfg, where);
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

/// Every key with its resolved value, grouped by section. parse_config(print_config(c)) == c.
inline std::string print_config(const ScenarioConfig& cfg) {
  std::string out;
  std::string section;
  for (const auto& f : config_detail::fields()) {
    if (section != f.section) {
      section = f.section;
      out += (out.empty() ? "[" : "\n[") + section + "]\n";
    }
    out += std::string(f.key) + " = " + f.get(cfg) + "\n";
  }
  return out;
}

}  // namespace viscoflow
