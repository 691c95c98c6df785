#pragma once

#include <filesystem>
#include <string>

#include "pipeflow/run.hpp"

namespace pipeflow {

// CSV and summary writers. Doubles are printed with 17 significant digits so
// output files are bitwise reproducible for a fixed scenario and build.

std::string format_double(double v);

/// Writes gauges/<x>.csv (t, piezo, Q, A, E), snapshots/<t>.csv
/// (x, A, Q, E, piezo, level), symmetry.csv when recorded, and
/// run_summary.txt under `dir`. Creates directories as needed.
void write_outputs(const std::filesystem::path& dir, const Scenario& scenario,
                   const RunResult& result);

/// Diagnostic dump of a (possibly broken) state, used on aborted runs.
void write_state_dump(const std::filesystem::path& file, const SimulationState& state,
                      const PhysicalConstants& pc);

}  // namespace pipeflow
