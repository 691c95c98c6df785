#include "pipeflow/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace pipeflow {

namespace {

namespace fs = std::filesystem;

std::ofstream open_file(const fs::path& p) {
  std::ofstream f(p, std::ios::binary);  // '\n' line endings on every platform
  if (!f) throw std::runtime_error("cannot open output file " + p.string());
  return f;
}

// Compact deterministic tag for file names (gauge positions, snapshot times).
std::string tag(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_outputs(const fs::path& dir, const Scenario& scenario, const RunResult& result) {
  fs::create_directories(dir / "gauges");
  fs::create_directories(dir / "snapshots");

  for (const auto& gauge : result.gauges) {
    auto f = open_file(dir / "gauges" / (tag(gauge.x) + ".csv"));
    f << "t,piezo,Q,A,E\n";
    for (const auto& row : gauge.rows) {
      f << format_double(row.t) << ',' << format_double(row.head) << ','
        << format_double(row.discharge) << ',' << format_double(row.area) << ',' << row.regime
        << '\n';
    }
  }

  for (const auto& snap : result.snapshots) {
    auto f = open_file(dir / "snapshots" / (tag(snap.requested_time) + ".csv"));
    f << "x,A,Q,E,piezo,level\n";
    for (const auto& row : snap.rows) {
      f << format_double(row.x) << ',' << format_double(row.area) << ','
        << format_double(row.discharge) << ',' << row.regime << ',' << format_double(row.head)
        << ',' << format_double(row.level) << '\n';
    }
  }

  if (!result.symmetry.empty()) {
    auto f = open_file(dir / "symmetry.csv");
    f << "t,max_abs_dA,max_abs_dQ\n";
    for (const auto& row : result.symmetry) {
      f << format_double(row.t) << ',' << format_double(row.area_deviation) << ','
        << format_double(row.discharge_deviation) << '\n';
    }
  }

  auto f = open_file(dir / "run_summary.txt");
  f << "scenario = " << scenario.name << "\n";
  f << "steps = " << result.steps << "\n";
  f << "t_end = " << format_double(result.final_state.time) << "\n";
  f << "mass_initial = " << format_double(result.mass_initial) << "\n";
  f << "mass_final = " << format_double(result.mass_final) << "\n";
  f << "boundary_mass_influx = " << format_double(result.boundary_mass_influx) << "\n";
  f << "max_conservation_error = " << format_double(result.max_conservation_error) << "\n";
  f << "entropy_violations = " << result.entropy_violations << "\n";
  f << "kernel = " << result.kernel_name << "\n";
  f << "wall_seconds = " << format_double(result.wall_seconds) << "\n";
}

void write_state_dump(const fs::path& file, const SimulationState& state,
                      const PhysicalConstants& pc) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  auto f = open_file(file);
  f << "x,A,Q,E,piezo\n";
  for (std::size_t i = 0; i < state.n_cells(); ++i) {
    const SectionSample geo = state.geometry.cell(i);
    double head = std::numeric_limits<double>::quiet_NaN();
    if (std::isfinite(state.area[i])) {
      head = piezometric_head(geo, state.area[i], state.regime[i], pc);
    }
    f << format_double(geo.x) << ',' << format_double(state.area[i]) << ','
      << format_double(state.discharge[i]) << ','
      << (state.regime[i] == Regime::Pressurized ? 1 : 0) << ',' << format_double(head) << '\n';
  }
}

}  // namespace pipeflow
