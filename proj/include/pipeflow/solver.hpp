#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pipeflow/kinetic.hpp"
#include "pipeflow/model.hpp"

namespace pipeflow {

// Piecewise-linear time table; evaluation clamps outside the tabulated range.
class TimeSeries {
 public:
  TimeSeries() = default;
  explicit TimeSeries(std::vector<std::pair<double, double>> points)
      : points_(std::move(points)) {}

  double operator()(double t) const;
  const std::vector<std::pair<double, double>>& points() const { return points_; }
  bool empty() const { return points_.empty(); }

 private:
  std::vector<std::pair<double, double>> points_;
};

enum class BoundaryKind {
  Head,       // prescribed piezometric head (m)
  Discharge,  // prescribed discharge (m^3/s)
  Wall,       // mirrored cell, velocity sign flipped
};

struct BoundaryCondition {
  BoundaryKind kind = BoundaryKind::Wall;
  TimeSeries series;
};

enum class FrictionMode {
  Upwinded,      // friction folded into the dynamic slope and upwinded
  CellCentered,  // classic explicit cell-centered source
  Off,
};

struct SimulationState {
  PipeGeometry geometry;
  std::vector<double> area;
  std::vector<double> discharge;
  std::vector<Regime> regime;
  double time = 0.0;
  long step_count = 0;

  std::size_t n_cells() const { return area.size(); }
  CellState cell(std::size_t i) const { return {area[i], discharge[i], regime[i]}; }
};

// Raised when the state degenerates (NaN, negative area beyond roundoff).
class SimulationError : public std::runtime_error {
 public:
  SimulationError(const std::string& what, double time, long step)
      : std::runtime_error(what), time_(time), step_(step) {}
  double time() const { return time_; }
  long step() const { return step_; }

 private:
  double time_;
  long step_;
};

class CflError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Largest stable time step: cfl * dx / max(|u| + sqrt(3) max(b, c)).
/// Dry cells contribute the celerity term only.
double cfl_dt(const SimulationState& state, const PhysicalConstants& pc, double cfl);

/// Conservative variant used by the run loop: bounds the celerity by
/// sqrt(b^2 + c^2), which also covers interfaces where a free-surface cell
/// is evaluated on the acoustic branch against a pressurized neighbor.
double safe_cfl_dt(const SimulationState& state, const PhysicalConstants& pc, double cfl);

// Upwinding data of one interior interface: the W states on both sides (the
// friction primitive folded into the right one), the path-midpoint hydrostatic
// coupling vector, and the resulting barrier delta_phi = (W_right - W_left) . mid.
// The acoustic flux excess of the pressurized regime is not part of the
// barrier; the flux assembly in step() handles it (see solver.cpp).
struct InterfaceJump {
  WVector left;
  WVector right;
  SourceVector mid;
  double delta_phi = 0.0;
};

/// Jump data for interior interface j (1 <= j <= n_cells - 1).
InterfaceJump interface_w_jump(std::size_t j, const SimulationState& state, FrictionMode mode,
                               const PhysicalConstants& pc);

/// Still state matching a prescribed piezometric head at one section:
/// free-surface below the crown, clamped just-full between crown and the
/// pressurization head, pressurized column above. Discharge is zero.
CellState state_from_head(const SectionSample& geo, double head, const PhysicalConstants& pc);

struct GhostCells {
  CellState left;
  CellState right;
};

/// Ghost states for both boundaries at time t. Head conditions invert the
/// piezometric law (free-surface, clamped just-full, or pressurized ghost);
/// discharge conditions prescribe Q and extrapolate A; walls mirror.
GhostCells apply_boundaries(const SimulationState& state, const BoundaryCondition& up,
                            const BoundaryCondition& down, double t,
                            const PhysicalConstants& pc);

struct StepStats {
  double boundary_mass_influx = 0.0;  // net mass entering through the boundaries
  double max_speed = 0.0;
};

// Reusable per-step buffers; step() allocates internally when not provided.
// A scratch instance is tied to one state's geometry, do not share across runs.
struct StepScratch {
  std::vector<SectionSample> cells;
  std::vector<double> area, q, vel, cel;
  std::vector<Regime> regimes;
  std::vector<double> cel_left, cel_right;  // per-interface sides (acoustic lift)
  std::vector<double> delta_phi;
  std::vector<double> minus_mass, minus_mom, plus_mass, plus_mom;
};

/// One explicit update of every cell, followed by the regime update and the
/// dry-cell fix-up. Throws CflError if dt violates the kinetic CFL bound and
/// SimulationError if the update produces a negative area beyond roundoff.
void step(SimulationState& state, double dt, const BoundaryCondition& up,
          const BoundaryCondition& down, FrictionMode mode, const PhysicalConstants& pc,
          StepScratch* scratch = nullptr, StepStats* stats = nullptr);

/// Regime flags from the updated areas: pressurized iff A >= S.
void update_regime(SimulationState& state);

}  // namespace pipeflow
