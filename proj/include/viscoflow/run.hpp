#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "viscoflow/diagnostics.hpp"
#include "viscoflow/solver.hpp"

namespace viscoflow {

struct RunOptions {
  std::size_t cadence = 1;           // series row every `cadence` accepted steps
  std::vector<double> snapshot_times;  // steps are shortened to land on these
  std::size_t max_steps = 100000000;
};

enum class ObserverEvent { start, series, snapshot, finish };

template <class System>
using Observer = std::function<void(const Simulation<System>&, ObserverEvent)>;

struct RunResult {
  StepOutcome final;
  BreakdownReport report;
};

/// Advances to t_end or the first non-ok step. The series holds the initial
/// state, every cadence-th step, and the last accepted state.
template <class System>
RunResult run(Simulation<System>& sim, double t_end, const Observer<System>& observer = {}, const RunOptions& opt = {}) {
  if (!(t_end > sim.time())) throw std::invalid_argument("run: t_end must exceed the current time");
  if (opt.cadence == 0) throw std::invalid_argument("run: cadence must be positive");
  std::vector<double> snaps;
  for (double t : opt.snapshot_times)
    if (t >= sim.time() && t <= t_end) snaps.push_back(t);
  std::sort(snaps.begin(), snaps.end());
  snaps.erase(std::unique(snaps.begin(), snaps.end()), snaps.end());
  std::size_t next_snap = 0;

  auto notify = [&](ObserverEvent e) {
    if (observer) observer(sim, e);
  };

  RunResult res;
  res.report.series.push_back(sample(sim, 0.0));
  notify(ObserverEvent::start);
  while (next_snap < snaps.size() && snaps[next_snap] <= sim.time()) {
    notify(ObserverEvent::snapshot);
    ++next_snap;
  }

  std::size_t since_row = 0;
  bool last_recorded = true;
  double last_dt = 0.0;
  while (sim.time() < t_end) {
    if (sim.step_count() >= opt.max_steps) {
      res.final.status = StepStatus::breakdown;
      res.final.diagnostic = "step budget exhausted";
      break;
    }
    double target = t_end;
    if (next_snap < snaps.size()) target = std::min(target, snaps[next_snap]);
    const double remaining = target - sim.time();
    res.final = sim.step(remaining);
    if (res.final.status != StepStatus::ok) {
      if (res.final.status == StepStatus::breakdown) {
        res.report.series.push_back(sample(sim, res.final.dt_used));
        last_recorded = true;
      }
      res.report.breakdown_time = sim.time();
      break;
    }
    last_dt = res.final.dt_used;
    if (std::abs(target - sim.time()) <= 1e-14 * std::max(1.0, std::abs(target))) {
      // land exactly on the target to keep snapshot times clean
      sim.set_time(target);
    }
    last_recorded = false;
    if (++since_row >= opt.cadence) {
      res.report.series.push_back(sample(sim, last_dt));
      notify(ObserverEvent::series);
      since_row = 0;
      last_recorded = true;
    }
    while (next_snap < snaps.size() && snaps[next_snap] <= sim.time()) {
      notify(ObserverEvent::snapshot);
      ++next_snap;
    }
  }
  if (!last_recorded) res.report.series.push_back(sample(sim, last_dt));
  res.report.verdict = res.final.status == StepStatus::ok ? "completed without breakdown"
                                                          : std::string(to_string(res.final.status)) + ": " +
                                                                res.final.diagnostic;
  notify(ObserverEvent::finish);
  return res;
}

}  // namespace viscoflow
