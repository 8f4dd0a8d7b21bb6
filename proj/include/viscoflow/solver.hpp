#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "viscoflow/equations.hpp"
#include "viscoflow/fluid_model.hpp"
#include "viscoflow/grid.hpp"
#include "viscoflow/parallel.hpp"

namespace viscoflow {

enum class Limiter { minmod, mc, central, none };
enum class Integrator { ssp_rk2, ssp_rk3 };

inline const char* to_string(Limiter l) {
  switch (l) {
    case Limiter::minmod:
      return "minmod";
    case Limiter::mc:
      return "mc";
    case Limiter::central:
      return "central";
    case Limiter::none:
      return "none";
  }
  return "?";
}
inline const char* to_string(Integrator i) { return i == Integrator::ssp_rk2 ? "ssp_rk2" : "ssp_rk3"; }

struct SolverOptions {
  double cfl = 0.4;
  Limiter limiter = Limiter::minmod;
  Integrator integrator = Integrator::ssp_rk2;
  double density_floor_rel = 1e-12;  // states with rho < floor * rho_bar are invalid
  std::size_t threads = 0;           // 0: VISCOFLOW_THREADS or hardware
  std::size_t min_cells_per_thread = 4096;

  friend bool operator==(const SolverOptions&, const SolverOptions&) = default;
};

struct MonitorOptions {
  double grad_factor = 1e3;
  double dt_floor = 1e-12;
  double front_tol = 1e-8;  // relative deviation allowed outside the front
  double front_slack_cells = 2.0;

  friend bool operator==(const MonitorOptions&, const MonitorOptions&) = default;
};

enum class StepStatus { ok, breakdown, invalid_state };

inline const char* to_string(StepStatus s) {
  switch (s) {
    case StepStatus::ok:
      return "ok";
    case StepStatus::breakdown:
      return "breakdown";
    case StepStatus::invalid_state:
      return "invalid_state";
  }
  return "?";
}

struct StepOutcome {
  StepStatus status = StepStatus::ok;
  double dt_used = 0.0;
  double max_wave_speed = 0.0;
  double max_gradient = 0.0;
  double max_grad_u = 0.0;
  double max_grad_rho = 0.0;
  double front_leak = 0.0;  // max relative deviation from reference beyond the front
  std::string diagnostic;
  std::optional<std::size_t> cell;
};

namespace detail {
inline double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return a > 0.0 ? std::min(a, b) : std::max(a, b);
}
inline double limited_slope(Limiter lim, double dl, double dr) {
  switch (lim) {
    case Limiter::minmod:
      return minmod(dl, dr);
    case Limiter::mc:
      return minmod(0.5 * (dl + dr), 2.0 * minmod(dl, dr));
    case Limiter::central:
      return 0.5 * (dl + dr);
    case Limiter::none:
      return 0.0;
  }
  return 0.0;
}
}  // namespace detail

/// Gradient maxima over neighbouring interior cells.
struct GradientSample {
  double u = 0.0;
  double rho = 0.0;
  double max() const { return std::max(u, rho); }
};

/// Finite-volume evolution of one equation system on a 1-D grid.
template <class System>
class Simulation {
 public:
  using Cell = typename System::Cell;
  static constexpr std::size_t n_vars = System::n_vars;
  static constexpr std::size_t ng = Grid1D::n_ghost;

  Simulation(Grid1D grid, MaterialLaw law, ReferenceState ref, SolverOptions opts = {}, MonitorOptions mon = {})
      : grid_(grid), law_(std::move(law)), ref_(ref), opts_(opts), mon_(mon) {
    grid_.validate();
    law_.validate();
    if (grid_.geometry == Geometry::spherical && n_vars != BulkEquations::n_vars)
      throw GridError("shear system supports planar geometry only");
    if (!(opts_.cfl > 0.0) || opts_.cfl > 1.0) throw std::invalid_argument("cfl must lie in (0, 1]");
    cells_.assign(grid_.n_cells, System::reference_cell(ref_));
    workers_ = opts_.threads == 0 ? default_worker_count() : opts_.threads;
    arm_monitor();
  }

  const Grid1D& grid() const { return grid_; }
  const MaterialLaw& law() const { return law_; }
  const ReferenceState& reference() const { return ref_; }
  const SolverOptions& options() const { return opts_; }
  const MonitorOptions& monitor() const { return mon_; }
  void set_monitor(const MonitorOptions& m) { mon_ = m; }

  const std::vector<Cell>& cells() const { return cells_; }
  /// Mutable access for initial data; call arm_monitor() afterwards.
  std::vector<Cell>& cells() { return cells_; }

  double time() const { return t_; }
  void set_time(double t) { t_ = t; }
  std::size_t step_count() const { return steps_; }
  /// Size of the last accepted step (0 before the first).
  double last_dt() const { return last_dt_; }
  /// Center of the initial disturbance (planar runs; spherical runs use r = 0).
  double origin() const { return origin_; }
  void set_origin(double x) { origin_ = x; }
  std::size_t workers() const { return workers_; }

  /// Front speed of the reference state (fastest characteristic speed there).
  double front_speed() const { return System::front_speed(ref_, law_); }

  /// Records the current gradient maxima as the baseline for breakdown detection.
  void arm_monitor() { initial_gradient_ = gradients().max(); }
  double initial_gradient() const { return initial_gradient_; }
  double gradient_threshold() const {
    return mon_.grad_factor * (initial_gradient_ + front_speed() / ref_.R);
  }

  GradientSample gradients() const {
    GradientSample g;
    const double inv_dx = 1.0 / grid_.dx();
    for (std::size_t i = 0; i + 1 < cells_.size(); ++i) {
      g.u = std::max(g.u, std::abs(cells_[i + 1][System::vel] - cells_[i][System::vel]) * inv_dx);
      g.rho = std::max(g.rho, std::abs(cells_[i + 1][System::rho] - cells_[i][System::rho]) * inv_dx);
    }
    return g;
  }

  double max_wave_speed() const {
    double a = 0.0;
    for (const auto& q : cells_) a = std::max(a, System::max_speed(q, law_));
    return a;
  }

  /// cfl * dx / max(|v| + fastest local characteristic speed).
  double cfl_dt() const {
    const double a = max_wave_speed();
    if (!std::isfinite(a)) return std::numeric_limits<double>::quiet_NaN();
    if (a <= 0.0) return std::numeric_limits<double>::infinity();
    return opts_.cfl * grid_.dx() / a;
  }

  /// Index of the first invalid cell with a message, or nothing.
  std::optional<std::pair<std::size_t, std::string>> find_invalid(const std::vector<Cell>& q) const {
    const double floor = opts_.density_floor_rel * ref_.rho_bar;
    for (std::size_t i = 0; i < q.size(); ++i) {
      for (std::size_t k = 0; k < n_vars; ++k)
        if (!std::isfinite(q[i][k])) return std::make_pair(i, std::string("non-finite ") + System::field_names()[k]);
      if (!(q[i][System::rho] > floor)) return std::make_pair(i, std::string("density below floor"));
    }
    return std::nullopt;
  }

  /// Max relative deviation from the reference state over cells lying entirely
  /// beyond distance R + c_v t + slack from the origin.
  double front_leak() const {
    const Cell ref = System::reference_cell(ref_);
    const double cv = front_speed();
    const double reach = ref_.R + cv * t_ + mon_.front_slack_cells * grid_.dx();
    const double scale[3] = {ref_.rho_bar, cv, ref_.rho_bar * cv * cv};
    double leak = 0.0;
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      const double lo = grid_.face(i) - origin_;
      const double hi = grid_.face(i + 1) - origin_;
      const double dist = (lo > 0.0) ? lo : (hi < 0.0 ? -hi : 0.0);
      if (dist <= reach) continue;
      for (std::size_t k = 0; k < n_vars; ++k) {
        const double s = k == System::rho ? scale[0] : System::is_velocity(k) ? scale[1] : scale[2];
        leak = std::max(leak, std::abs(cells_[i][k] - ref[k]) / s);
      }
    }
    return leak;
  }

  /// Advances one step of size min(cfl_dt, dt_max). The state is only
  /// committed when it is valid.
  StepOutcome step(double dt_max = std::numeric_limits<double>::infinity()) {
    StepOutcome out;
    out.max_wave_speed = max_wave_speed();
    const double dt_cfl = out.max_wave_speed > 0.0 ? opts_.cfl * grid_.dx() / out.max_wave_speed
                                                   : std::numeric_limits<double>::infinity();
    if (!std::isfinite(out.max_wave_speed)) {
      out.status = StepStatus::invalid_state;
      out.diagnostic = "non-finite wave speed";
      return out;
    }
    const double dt = std::min(dt_cfl, dt_max);
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("step: no finite positive dt");
    out.dt_used = dt;

    std::vector<Cell> q = cells_;
    relax(q, 0.5 * dt);
    if (opts_.integrator == Integrator::ssp_rk2) {
      std::vector<Cell> q1 = q;
      euler_stage(q1, dt);
      euler_stage(q1, dt);
      combine(q, q1, 0.5);
    } else {
      std::vector<Cell> q1 = q;
      euler_stage(q1, dt);
      euler_stage(q1, dt);
      combine(q1, q, 0.25, 0.75);  // q1 <- 3/4 q + 1/4 q1
      euler_stage(q1, dt);
      combine(q, q1, 2.0 / 3.0);
    }
    relax(q, 0.5 * dt);

    if (auto bad = find_invalid(q)) {
      out.status = StepStatus::invalid_state;
      out.cell = bad->first;
      out.diagnostic = bad->second + " in cell " + std::to_string(bad->first) + " at t=" + to_text(t_ + dt);
      return out;
    }
    cells_ = std::move(q);
    t_ += dt;
    last_dt_ = dt;
    ++steps_;

    const auto g = gradients();
    out.max_grad_u = g.u;
    out.max_grad_rho = g.rho;
    out.max_gradient = g.max();
    out.front_leak = front_leak();
    const double threshold = gradient_threshold();
    if (out.max_gradient > threshold) {
      out.status = StepStatus::breakdown;
      out.cell = argmax_gradient();
      out.diagnostic = "gradient " + to_text(out.max_gradient) + " exceeds " + to_text(threshold) + " near cell " +
                       std::to_string(*out.cell) + " at t=" + to_text(t_);
    } else if (dt_cfl < mon_.dt_floor) {
      out.status = StepStatus::breakdown;
      out.diagnostic = "CFL time step " + to_text(dt_cfl) + " below floor " + to_text(mon_.dt_floor);
    }
    return out;
  }

  /// Time derivative of the transport part (no relaxation) for the given interior cells.
  std::vector<Cell> rate(const std::vector<Cell>& q) const {
    const auto padded = with_ghosts(q);
    const std::size_t n = q.size();
    std::vector<Cell> lo(n + 2), hi(n + 2);  // reconstructed edge values for cells -1..n
    std::vector<FaceTerms<n_vars>> faces(n + 1);
    std::vector<Cell> d(n);
    parallel_for(n + 2, workers_, opts_.min_cells_per_thread, [&](std::size_t b, std::size_t e) {
      for (std::size_t j = b; j < e; ++j) {
        const std::size_t p = j + ng - 1;  // padded index of cell j-1
        for (std::size_t k = 0; k < n_vars; ++k) {
          const double s = 0.5 * detail::limited_slope(opts_.limiter, padded[p][k] - padded[p - 1][k],
                                                       padded[p + 1][k] - padded[p][k]);
          lo[j][k] = padded[p][k] - s;
          hi[j][k] = padded[p][k] + s;
        }
      }
    });
    parallel_for(n + 1, workers_, opts_.min_cells_per_thread, [&](std::size_t b, std::size_t e) {
      for (std::size_t f = b; f < e; ++f) {
        const Cell& L = hi[f];      // cell f-1, upper edge
        const Cell& R = lo[f + 1];  // cell f, lower edge
        const double a = std::max(System::max_speed(L, law_), System::max_speed(R, law_));
        faces[f] = System::face(L, R, a, law_);
      }
    });
    parallel_for(n, workers_, opts_.min_cells_per_thread, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        const CellMetric m{grid_.area(i), grid_.area(i + 1), grid_.volume(i), grid_.dx()};
        d[i] = System::rate(q[i], faces[i], faces[i + 1], m, law_);
      }
    });
    return d;
  }

 private:
  static std::string to_text(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
  }

  std::size_t argmax_gradient() const {
    std::size_t best = 0;
    double g = -1.0;
    for (std::size_t i = 0; i + 1 < cells_.size(); ++i) {
      const double v = std::max(std::abs(cells_[i + 1][System::vel] - cells_[i][System::vel]),
                                std::abs(cells_[i + 1][System::rho] - cells_[i][System::rho]));
      if (v > g) {
        g = v;
        best = i;
      }
    }
    return best;
  }

  std::vector<Cell> with_ghosts(const std::vector<Cell>& q) const {
    const std::size_t n = q.size();
    std::vector<Cell> p(n + 2 * ng);
    std::copy(q.begin(), q.end(), p.begin() + ng);
    const Cell ref = System::reference_cell(ref_);
    for (std::size_t g = 0; g < ng; ++g) {
      // lower side: padded index ng-1-g mirrors interior g
      switch (grid_.lower) {
        case Boundary::reference:
          p[ng - 1 - g] = ref;
          break;
        case Boundary::periodic:
          p[ng - 1 - g] = q[n - 1 - g];
          break;
        case Boundary::reflective:
          p[ng - 1 - g] = System::mirror(q[g]);
          break;
      }
      switch (grid_.upper) {
        case Boundary::reference:
          p[ng + n + g] = ref;
          break;
        case Boundary::periodic:
          p[ng + n + g] = q[g];
          break;
        case Boundary::reflective:
          p[ng + n + g] = System::mirror(q[n - 1 - g]);
          break;
      }
    }
    return p;
  }

  void euler_stage(std::vector<Cell>& q, double dt) const {
    const auto d = rate(q);
    for (std::size_t i = 0; i < q.size(); ++i)
      for (std::size_t k = 0; k < n_vars; ++k) q[i][k] += dt * d[i][k];
  }

  /// a <- (1 - w) a + w b
  static void combine(std::vector<Cell>& a, const std::vector<Cell>& b, double w) {
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t k = 0; k < n_vars; ++k) a[i][k] = (1.0 - w) * a[i][k] + w * b[i][k];
  }
  /// a <- wa a + wb b
  static void combine(std::vector<Cell>& a, const std::vector<Cell>& b, double wa, double wb) {
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t k = 0; k < n_vars; ++k) a[i][k] = wa * a[i][k] + wb * b[i][k];
  }

  void relax(std::vector<Cell>& q, double h) const {
    for (auto& c : q) System::relax(c, h, law_);
  }

  Grid1D grid_;
  MaterialLaw law_;
  ReferenceState ref_;
  SolverOptions opts_;
  MonitorOptions mon_;
  std::vector<Cell> cells_;
  double t_ = 0.0;
  std::size_t steps_ = 0;
  double last_dt_ = 0.0;
  double origin_ = 0.0;
  double initial_gradient_ = 0.0;
  std::size_t workers_ = 1;
};

using BulkSimulation = Simulation<BulkEquations>;
using ShearSimulation = Simulation<ShearEquations>;

template <class System>
double cfl_dt(const Simulation<System>& sim) {
  return sim.cfl_dt();
}

template <class System>
StepOutcome step(Simulation<System>& sim, double dt_max = std::numeric_limits<double>::infinity()) {
  return sim.step(dt_max);
}

}  // namespace viscoflow
