#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pipeflow/solver.hpp"

namespace pipeflow {

// Full description of one simulation: geometry, constants, initial state,
// boundary tables, and run/output controls. Parsed from the sectioned
// key-value text format documented in the README.
struct Scenario {
  std::string name = "scenario";
  std::size_t n_cells = 0;
  double cfl = 0.8;
  double t_end = 0.0;
  double gauge_interval = 0.0;  // seconds between gauge rows; 0 picks t_end/200

  PhysicalConstants constants;
  FrictionMode friction = FrictionMode::Off;
  std::vector<ProfilePoint> profile;

  // Initial condition: a still-water piezometric head, or one explicit
  // (area, discharge, regime) row per cell.
  std::optional<double> still_water_head;
  std::vector<CellState> initial_cells;

  BoundaryCondition upstream;
  BoundaryCondition downstream;

  std::vector<double> gauges;          // gauge positions (m)
  std::vector<double> snapshot_times;  // full-field snapshot times (s)
  std::string out_dir = "out";
  bool record_symmetry = false;
};

// One validation or parse problem, with enough context to fix the input.
struct Issue {
  std::size_t line = 0;  // 0 when the issue is not tied to a line
  std::string key;
  std::string message;
};

std::string format_issue(const Issue& issue);

struct ParseResult {
  std::optional<Scenario> scenario;
  std::vector<Issue> issues;
  bool ok() const { return scenario.has_value() && issues.empty(); }
};

/// Parses and validates a scenario document. On failure the issue list names
/// every missing or malformed key with its line.
ParseResult parse_scenario(std::string_view text);

/// Canonical text form; parse_scenario(serialize_scenario(s)) reproduces s.
std::string serialize_scenario(const Scenario& s);

/// Invariant checks on an already-built scenario.
std::vector<Issue> validate_scenario(const Scenario& s);

PipeGeometry make_geometry(const Scenario& s);

/// Geometry plus initial cell states. Still-water initialization inverts the
/// piezometric law cell by cell (free-surface, clamped just-full, or
/// pressurized column).
SimulationState initial_state(const Scenario& s);

std::vector<std::string> builtin_scenario_names();

/// Text of one bundled scenario; throws std::invalid_argument for unknown names.
std::string builtin_scenario_text(std::string_view name);

struct ScenarioOverrides {
  std::optional<std::size_t> n_cells;
  std::optional<double> cfl;
  std::optional<FrictionMode> friction;
  std::optional<std::string> out_dir;
  bool record_symmetry = false;
};

/// Applies command-line overrides; returns issues when an override conflicts
/// with the scenario (an explicit per-cell initial table pins the cell count).
std::vector<Issue> apply_overrides(Scenario& s, const ScenarioOverrides& o);

const char* friction_mode_name(FrictionMode mode);
std::optional<FrictionMode> parse_friction_mode(std::string_view text);

}  // namespace pipeflow
