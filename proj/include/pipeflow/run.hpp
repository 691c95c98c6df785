#pragma once

#include <string>
#include <vector>

#include "pipeflow/scenario.hpp"

namespace pipeflow {

struct GaugeRow {
  double t = 0.0;
  double head = 0.0;       // piezometric head (m)
  double discharge = 0.0;  // m^3/s
  double area = 0.0;       // m^2
  int regime = 0;
};

struct GaugeSeries {
  double x = 0.0;
  std::size_t cell = 0;
  std::vector<GaugeRow> rows;
};

struct SnapshotRow {
  double x = 0.0;
  double area = 0.0;
  double discharge = 0.0;
  int regime = 0;
  double head = 0.0;
  double level = 0.0;  // free-surface level over the axis (R when pressurized)
};

struct Snapshot {
  double requested_time = 0.0;
  double actual_time = 0.0;
  std::vector<SnapshotRow> rows;
};

struct SymmetryRow {
  double t = 0.0;
  double area_deviation = 0.0;       // max_i |A_i - A_mirror|
  double discharge_deviation = 0.0;  // max_i |Q_i + Q_mirror|
};

struct RunResult {
  SimulationState final_state;
  std::vector<GaugeSeries> gauges;
  std::vector<Snapshot> snapshots;
  std::vector<SymmetryRow> symmetry;  // filled when the scenario requests it
  std::vector<std::pair<double, double>> entropy_series;  // (t, total entropy)
  long entropy_violations = 0;

  long steps = 0;
  double mass_initial = 0.0;
  double mass_final = 0.0;
  double boundary_mass_influx = 0.0;
  // Largest per-step defect of mass vs. the boundary-flux ledger, relative.
  double max_conservation_error = 0.0;
  double wall_seconds = 0.0;
  std::string kernel_name;
};

// Thrown when a run degenerates; carries the offending state for diagnostics.
class RunAbort : public SimulationError {
 public:
  RunAbort(const SimulationError& cause, SimulationState state)
      : SimulationError(cause.what(), cause.time(), cause.step()),
        state_at_abort(std::move(state)) {}
  SimulationState state_at_abort;
};

/// Advances a validated scenario from t = 0 to t_end under the CFL-limited
/// explicit loop, recording gauge rows every gauge interval and full-field
/// snapshots at the requested times (t_end is always snapshot as well).
/// Throws RunAbort with the failing time, step, and state if the run
/// degenerates (NaN/Inf or negative area beyond roundoff).
RunResult run(const Scenario& scenario);

}  // namespace pipeflow
