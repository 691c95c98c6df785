#include "pipeflow/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace pipeflow {

namespace {

double total_mass(const SimulationState& st) {
  double m = 0.0;
  for (double a : st.area) m += a;
  return m * st.geometry.dx();
}

// Total discrete entropy; dry cells contribute their A -> 0 limit c^2 S.
double total_entropy(const SimulationState& st, const PhysicalConstants& pc) {
  double e = 0.0;
  const double c2 = pc.sonic_speed * pc.sonic_speed;
  for (std::size_t i = 0; i < st.n_cells(); ++i) {
    const SectionSample geo = st.geometry.cell(i);
    if (st.area[i] <= dry_threshold(geo.s)) {
      e += c2 * geo.s;
    } else {
      e += entropy(geo, st.cell(i), pc);
    }
  }
  return e * st.geometry.dx();
}

std::size_t gauge_cell(const PipeGeometry& g, double x) {
  const double rel = (x - g.x_begin()) / g.dx();
  const auto idx = static_cast<long>(std::floor(rel));
  return static_cast<std::size_t>(std::clamp<long>(idx, 0, static_cast<long>(g.n_cells()) - 1));
}

SnapshotRow snapshot_row(const SimulationState& st, std::size_t i, const PhysicalConstants& pc) {
  const SectionSample geo = st.geometry.cell(i);
  SnapshotRow row;
  row.x = geo.x;
  row.area = st.area[i];
  row.discharge = st.discharge[i];
  row.regime = st.regime[i] == Regime::Pressurized ? 1 : 0;
  row.head = piezometric_head(geo, st.area[i], st.regime[i], pc);
  if (st.regime[i] == Regime::Pressurized) {
    row.level = geo.r;
  } else {
    const double wet = std::clamp(st.area[i], 0.0, geo.s);
    row.level = wet > 0.0 ? water_level(geo.r, wet) : -geo.r;
  }
  return row;
}

}  // namespace

RunResult run(const Scenario& sc) {
  const auto t_start = std::chrono::steady_clock::now();

  RunResult res;
  res.kernel_name = kinetic::active_flux_batch_name();
  SimulationState state = initial_state(sc);
  const PhysicalConstants& pc = sc.constants;
  const std::size_t n = state.n_cells();

  for (double x : sc.gauges) {
    res.gauges.push_back({x, gauge_cell(state.geometry, x), {}});
  }

  // Snapshot schedule: requested times plus the final state, deduplicated.
  std::vector<double> snap_times = sc.snapshot_times;
  snap_times.push_back(sc.t_end);
  std::sort(snap_times.begin(), snap_times.end());
  snap_times.erase(std::unique(snap_times.begin(), snap_times.end(),
                               [&](double a, double b) {
                                 return std::abs(a - b) <= 1e-12 * std::max(1.0, sc.t_end);
                               }),
                   snap_times.end());
  std::size_t next_snap = 0;

  const double interval =
      sc.gauge_interval > 0.0 ? sc.gauge_interval : std::max(sc.t_end / 200.0, 1e-12);

  auto check_finite = [&]() {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += state.area[i] + state.discharge[i];
    if (!std::isfinite(sum)) {
      throw RunAbort(SimulationError("state contains NaN/Inf", state.time, state.step_count),
                     state);
    }
  };
  check_finite();

  res.mass_initial = total_mass(state);
  double mass_ledger = res.mass_initial;

  double last_entropy = total_entropy(state, pc);

  double last_record = -1.0;
  auto record_instant = [&](double t) {
    last_record = t;
    for (auto& g : res.gauges) {
      const SectionSample geo = state.geometry.cell(g.cell);
      GaugeRow row;
      row.t = t;
      row.head = piezometric_head(geo, state.area[g.cell], state.regime[g.cell], pc);
      row.discharge = state.discharge[g.cell];
      row.area = state.area[g.cell];
      row.regime = state.regime[g.cell] == Regime::Pressurized ? 1 : 0;
      g.rows.push_back(row);
    }
    if (sc.record_symmetry) {
      SymmetryRow srow;
      srow.t = t;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t m = n - 1 - i;
        srow.area_deviation = std::max(srow.area_deviation,
                                       std::abs(state.area[i] - state.area[m]));
        srow.discharge_deviation = std::max(srow.discharge_deviation,
                                            std::abs(state.discharge[i] + state.discharge[m]));
      }
      res.symmetry.push_back(srow);
    }
    const double e = total_entropy(state, pc);
    if (e > last_entropy * (1.0 + 1e-8) + 1e-12) res.entropy_violations += 1;
    res.entropy_series.push_back({t, e});
    last_entropy = e;
  };

  auto take_snapshot = [&](double requested) {
    Snapshot snap;
    snap.requested_time = requested;
    snap.actual_time = state.time;
    snap.rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) snap.rows.push_back(snapshot_row(state, i, pc));
    res.snapshots.push_back(std::move(snap));
  };

  record_instant(0.0);
  while (next_snap < snap_times.size() && snap_times[next_snap] <= 0.0) {
    take_snapshot(snap_times[next_snap]);
    ++next_snap;
  }

  StepScratch scratch;
  const double t_eps = 1e-12 * std::max(1.0, sc.t_end);
  double next_gauge = interval;
  while (state.time < sc.t_end - t_eps) {
    double dt = safe_cfl_dt(state, pc, sc.cfl);
    dt = std::min(dt, sc.t_end - state.time);

    StepStats stats;
    try {
      step(state, dt, sc.upstream, sc.downstream, sc.friction, pc, &scratch, &stats);
    } catch (const SimulationError& err) {
      throw RunAbort(err, std::move(state));
    }
    check_finite();

    mass_ledger += stats.boundary_mass_influx;
    const double mass_now = total_mass(state);
    const double defect = std::abs(mass_now - mass_ledger) /
                          std::max({std::abs(mass_now), std::abs(res.mass_initial), 1e-300});
    res.max_conservation_error = std::max(res.max_conservation_error, defect);

    if (state.time >= next_gauge - t_eps) {
      record_instant(state.time);
      next_gauge = (std::floor((state.time + t_eps) / interval) + 1.0) * interval;
    }
    while (next_snap < snap_times.size() && state.time >= snap_times[next_snap] - t_eps) {
      take_snapshot(snap_times[next_snap]);
      ++next_snap;
    }
  }

  if (state.time > last_record + t_eps) {
    record_instant(state.time);
  }
  while (next_snap < snap_times.size()) {
    take_snapshot(snap_times[next_snap]);
    ++next_snap;
  }

  res.steps = state.step_count;
  res.mass_final = total_mass(state);
  res.boundary_mass_influx = mass_ledger - res.mass_initial;
  res.final_state = std::move(state);
  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return res;
}

}  // namespace pipeflow
