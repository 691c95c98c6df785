#include "pipeflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pipeflow {

namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;

double cell_speed(double vel, double cel, double sonic) {
  return std::abs(vel) + kSqrt3 * std::max(cel, sonic);
}

// Speed bound covering the acoustic lift of mixed interfaces.
double lifted_cell_speed(double vel, double cel, double sonic) {
  return std::abs(vel) + kSqrt3 * std::sqrt(cel * cel + sonic * sonic);
}

double safe_celerity(const SectionSample& geo, double area, Regime regime,
                     const PhysicalConstants& pc) {
  if (!(area > 0.0)) return 0.0;
  return celerity(geo, area, regime, pc);
}

// Potential barrier of one interface from the two adjacent (possibly ghost)
// cell states and their geometry samples: altitude, section, and inclination
// jumps weighted by the path-midpoint coupling vector, plus the friction
// increment of the dynamic slope. Boundary interfaces pass identical geometry
// so only the friction part survives there.
//
// The acoustic excess of the pressurized regime (the kinetic momentum flux
// exceeds the model momentum flux by X = c^2 S there) is deliberately NOT in
// the barrier: a potential jump accelerates transmitted particles, which
// turns that bookkeeping excess into spurious kinetic energy at regime
// fronts. The flux assembly in step() subtracts the interface-mean excess
// from both momentum fluxes instead; combined with the coupling vector the
// discretization matches the model momentum balance in smooth regions and
// stays bounded at transition fronts.
double barrier(const SectionSample& gl, const SectionSample& gr, double x_mid, double a_l,
               double a_r, double u_l, double u_r, Regime e_l, Regime e_r, double dx,
               FrictionMode mode, const PhysicalConstants& pc, InterfaceJump* jump = nullptr) {
  const double a_mid = 0.5 * (a_l + a_r);
  const Regime e_mid = (e_l == Regime::Pressurized && e_r == Regime::Pressurized)
                           ? Regime::Pressurized
                           : Regime::FreeSurface;
  const double s_mid = 0.5 * (gl.s + gr.s);
  const double cos_mid = 0.5 * (gl.cos_theta + gr.cos_theta);

  SourceVector b_mid;  // path-midpoint coupling, defaults to (1, 0, 0)
  double friction_jump = 0.0;
  if (a_mid > dry_threshold(s_mid)) {
    SectionSample mid;
    mid.x = x_mid;
    mid.z = 0.5 * (gl.z + gr.z);
    mid.s = s_mid;
    mid.r = std::sqrt(s_mid / std::numbers::pi);
    mid.cos_theta = cos_mid;
    const double wet_mid =
        e_mid == Regime::Pressurized ? s_mid : std::min(a_mid, s_mid);
    const WetSection ws = wet_section(mid.r, wet_mid);
    b_mid = source_vector_from_section(ws, mid, a_mid, e_mid, pc);
    if (mode == FrictionMode::Upwinded) {
      const double u_mid = 0.5 * (u_l + u_r);
      friction_jump = dx * friction_from_section(ws, pc) * u_mid * std::abs(u_mid);
    }
  }

  // Barrier from the jump components directly: folding the friction term into
  // a W value first would round against the altitude and break the exact
  // antisymmetry of mirrored interfaces.
  const double dw1 = (gr.z - gl.z) + friction_jump;
  const double dw2 = gr.s - gl.s;
  const double dw3 = gr.cos_theta - gl.cos_theta;
  const double total = dw1 * b_mid.dynamic_slope + dw2 * b_mid.section +
                       dw3 * b_mid.cos_theta;
  if (jump) {
    jump->left = WVector{gl.z, gl.s, gl.cos_theta};
    jump->right = WVector{gr.z + friction_jump, gr.s, gr.cos_theta};
    jump->mid = b_mid;
    jump->delta_phi = total;
  }
  return total;
}

}  // namespace

double TimeSeries::operator()(double t) const {
  if (points_.empty()) return 0.0;
  if (t <= points_.front().first) return points_.front().second;
  if (t >= points_.back().first) return points_.back().second;
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    const auto& [t0, v0] = points_[i];
    const auto& [t1, v1] = points_[i + 1];
    if (t <= t1) {
      return v0 + (t - t0) / (t1 - t0) * (v1 - v0);
    }
  }
  return points_.back().second;
}

namespace {

template <class SpeedFn>
double dt_from_speeds(const SimulationState& state, const PhysicalConstants& pc, double cfl,
                      SpeedFn&& speed) {
  if (state.n_cells() == 0) throw std::invalid_argument("cfl_dt on an empty mesh");
  if (!(cfl > 0.0 && cfl < 1.0)) throw std::invalid_argument("cfl must lie in (0, 1)");
  double smax = 0.0;
  for (std::size_t i = 0; i < state.n_cells(); ++i) {
    const SectionSample geo = state.geometry.cell(i);
    const double u = velocity(state.area[i], state.discharge[i], geo.s);
    const double b = safe_celerity(geo, state.area[i], state.regime[i], pc);
    smax = std::max(smax, speed(u, b, pc.sonic_speed));
  }
  return cfl * state.geometry.dx() / smax;
}

}  // namespace

double cfl_dt(const SimulationState& state, const PhysicalConstants& pc, double cfl) {
  return dt_from_speeds(state, pc, cfl, cell_speed);
}

double safe_cfl_dt(const SimulationState& state, const PhysicalConstants& pc, double cfl) {
  return dt_from_speeds(state, pc, cfl, lifted_cell_speed);
}

InterfaceJump interface_w_jump(std::size_t j, const SimulationState& state, FrictionMode mode,
                               const PhysicalConstants& pc) {
  const std::size_t n = state.n_cells();
  if (j < 1 || j >= n) throw std::out_of_range("interface_w_jump expects an interior interface");
  const SectionSample gl = state.geometry.cell(j - 1);
  const SectionSample gr = state.geometry.cell(j);
  const double u_l = velocity(state.area[j - 1], state.discharge[j - 1], gl.s);
  const double u_r = velocity(state.area[j], state.discharge[j], gr.s);

  InterfaceJump out;
  barrier(gl, gr, state.geometry.interface(j).x, state.area[j - 1], state.area[j], u_l, u_r,
          state.regime[j - 1], state.regime[j], state.geometry.dx(), mode, pc, &out);
  return out;
}

CellState state_from_head(const SectionSample& geo, double head, const PhysicalConstants& pc) {
  const double p_local = head - geo.z;
  CellState out;
  if (p_local >= 2.0 * geo.r) {
    const double c = pc.sonic_speed;
    out.area = geo.s + (p_local - 2.0 * geo.r) * pc.gravity * geo.s / (c * c);
    out.regime = Regime::Pressurized;
  } else if (p_local > geo.r) {
    out.area = geo.s;  // head between crown and pressurization: clamped just-full
    out.regime = Regime::Pressurized;
  } else {
    const double level = std::clamp(p_local, -geo.r, geo.r);
    out.area = wet_area(geo.r, level);
    out.regime = Regime::FreeSurface;
  }
  return out;
}

GhostCells apply_boundaries(const SimulationState& state, const BoundaryCondition& up,
                            const BoundaryCondition& down, double t,
                            const PhysicalConstants& pc) {
  const std::size_t n = state.n_cells();
  if (n == 0) throw std::invalid_argument("apply_boundaries on an empty mesh");

  auto make = [&](const BoundaryCondition& bc, std::size_t adjacent) -> CellState {
    const SectionSample geo = state.geometry.cell(adjacent);
    const CellState inner = state.cell(adjacent);
    switch (bc.kind) {
      case BoundaryKind::Wall:
        return {inner.area, -inner.discharge, inner.regime};
      case BoundaryKind::Discharge:
        // Mirrored-flux form: the interface average of ghost and interior
        // discharge equals the prescribed value. A ghost holding the series
        // value directly leaks mass (the kinetic half-flux between (A, u)
        // and (A, 0) is ~ A u / 2), so a "zero discharge" end never seals.
        return {inner.area, 2.0 * bc.series(t) - inner.discharge, inner.regime};
      case BoundaryKind::Head: {
        // Reservoir at rest: the ghost holds the prescribed head with zero
        // velocity. Extrapolating the interior discharge instead feeds the
        // interior momentum back through the ghost and destabilizes the
        // pressurization front.
        return state_from_head(geo, bc.series(t), pc);
      }
    }
    return inner;
  };

  return {make(up, 0), make(down, n - 1)};
}

void update_regime(SimulationState& state) {
  for (std::size_t i = 0; i < state.n_cells(); ++i) {
    const double s = state.geometry.cell(i).s;
    state.regime[i] = state.area[i] >= s ? Regime::Pressurized : Regime::FreeSurface;
  }
}

void step(SimulationState& state, double dt, const BoundaryCondition& up,
          const BoundaryCondition& down, FrictionMode mode, const PhysicalConstants& pc,
          StepScratch* scratch, StepStats* stats) {
  StepScratch local;
  StepScratch& ws = scratch ? *scratch : local;
  const std::size_t n = state.n_cells();
  if (n == 0) throw std::invalid_argument("step on an empty mesh");
  const double dx = state.geometry.dx();

  if (ws.cells.size() != n) {
    ws.cells.resize(n);
    for (std::size_t i = 0; i < n; ++i) ws.cells[i] = state.geometry.cell(i);
  }
  const std::size_t nc = n + 2;  // interior plus two ghosts
  ws.area.resize(nc);
  ws.q.resize(nc);
  ws.vel.resize(nc);
  ws.cel.resize(nc);
  ws.delta_phi.resize(n + 1);
  ws.minus_mass.resize(n + 1);
  ws.minus_mom.resize(n + 1);
  ws.plus_mass.resize(n + 1);
  ws.plus_mom.resize(n + 1);

  ws.regimes.resize(nc);
  const GhostCells ghosts = apply_boundaries(state, up, down, state.time, pc);
  std::vector<Regime>& regime = ws.regimes;
  ws.area[0] = ghosts.left.area;
  ws.q[0] = ghosts.left.discharge;
  regime[0] = ghosts.left.regime;
  for (std::size_t i = 0; i < n; ++i) {
    ws.area[i + 1] = state.area[i];
    ws.q[i + 1] = state.discharge[i];
    regime[i + 1] = state.regime[i];
  }
  ws.area[n + 1] = ghosts.right.area;
  ws.q[n + 1] = ghosts.right.discharge;
  regime[n + 1] = ghosts.right.regime;

  auto sample_of = [&](std::size_t k) -> const SectionSample& {
    if (k == 0) return ws.cells[0];
    if (k == n + 1) return ws.cells[n - 1];
    return ws.cells[k - 1];
  };

  for (std::size_t k = 0; k < nc; ++k) {
    const SectionSample& geo = sample_of(k);
    ws.vel[k] = velocity(ws.area[k], ws.q[k], geo.s);
    ws.cel[k] = safe_celerity(geo, ws.area[k], regime[k], pc);
  }

  // Per-interface side states: across a regime transition the free-surface
  // side switches to the acoustic branch so both densities have comparable
  // supports (see barrier() for the matching excess jump).
  ws.cel_left.resize(n + 1);
  ws.cel_right.resize(n + 1);
  const double c2 = pc.sonic_speed * pc.sonic_speed;
  auto lift = [&](double b) { return std::sqrt(b * b + c2); };
  for (std::size_t j = 0; j <= n; ++j) {
    double bl = ws.cel[j];
    double br = ws.cel[j + 1];
    if (regime[j] != regime[j + 1]) {
      if (regime[j] == Regime::FreeSurface) bl = lift(bl);
      if (regime[j + 1] == Regime::FreeSurface) br = lift(br);
    }
    ws.cel_left[j] = bl;
    ws.cel_right[j] = br;
  }
  double smax = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    smax = std::max(smax, cell_speed(ws.vel[j], ws.cel_left[j], pc.sonic_speed));
    smax = std::max(smax, cell_speed(ws.vel[j + 1], ws.cel_right[j], pc.sonic_speed));
  }
  if (stats) stats->max_speed = smax;
  if (!(dt > 0.0) || dt * smax / dx >= 1.0) {
    throw CflError("time step violates the kinetic CFL bound");
  }

  for (std::size_t j = 0; j <= n; ++j) {
    const SectionSample& gl = sample_of(j);
    const SectionSample& gr = sample_of(j + 1);
    ws.delta_phi[j] = barrier(gl, gr, state.geometry.interface(j).x, ws.area[j], ws.area[j + 1],
                              ws.vel[j], ws.vel[j + 1], regime[j], regime[j + 1], dx, mode, pc);
  }

  kinetic::FluxBatch batch;
  batch.size = n + 1;
  batch.area_l = ws.area.data();
  batch.vel_l = ws.vel.data();
  batch.cel_l = ws.cel_left.data();
  batch.area_r = ws.area.data() + 1;
  batch.vel_r = ws.vel.data() + 1;
  batch.cel_r = ws.cel_right.data();
  batch.delta_phi = ws.delta_phi.data();
  batch.minus_mass = ws.minus_mass.data();
  batch.minus_mom = ws.minus_mom.data();
  batch.plus_mass = ws.plus_mass.data();
  batch.plus_mom = ws.plus_mom.data();
  kinetic::active_flux_batch()(batch, pc.gravity);

  // Acoustic-excess offset: on the acoustic branch the kinetic momentum flux
  // exceeds the model flux by X = c^2 S (pressurized cells) or c^2 A (the
  // lifted side of a mixed interface). Subtracting the interface mean of the
  // two sides' excesses from both momentum fluxes telescopes to the exact
  // -d(c^2 S)/dx inside pressurized regions and removes the one-sided
  // momentum slam at regime fronts. Mass fluxes are untouched, so positivity
  // and conservation are unaffected.
  for (std::size_t j = 0; j <= n; ++j) {
    const bool mixed = regime[j] != regime[j + 1];
    auto excess = [&](std::size_t k, const SectionSample& geo) {
      if (regime[k] == Regime::Pressurized) return c2 * geo.s;
      return mixed ? c2 * std::min(ws.area[k], geo.s) : 0.0;
    };
    const double x_mean =
        0.5 * (excess(j, sample_of(j)) + excess(j + 1, sample_of(j + 1)));
    if (x_mean != 0.0) {
      ws.minus_mom[j] -= x_mean;
      ws.plus_mom[j] -= x_mean;
    }
  }

  const double sigma = dt / dx;
  for (std::size_t i = 0; i < n; ++i) {
    state.area[i] = ws.area[i + 1] + sigma * (ws.plus_mass[i] - ws.minus_mass[i + 1]);
    state.discharge[i] = ws.q[i + 1] + sigma * (ws.plus_mom[i] - ws.minus_mom[i + 1]);
  }

  if (mode == FrictionMode::CellCentered) {
    for (std::size_t i = 0; i < n; ++i) {
      const double a_old = ws.area[i + 1];
      const double u_old = ws.vel[i + 1];
      if (a_old <= dry_threshold(ws.cells[i].s) || u_old == 0.0) continue;
      const double k = friction_coefficient(ws.cells[i], a_old, regime[i + 1], pc);
      const double dq = dt * pc.gravity * a_old * k * u_old * std::abs(u_old);
      // Friction only decelerates: never let the explicit source push the
      // discharge through zero (K grows without bound as cells approach the
      // dry threshold, where the unlimited update overshoots and blows up).
      const double q = state.discharge[i];
      if (u_old > 0.0 ? q > 0.0 : q < 0.0) {
        double limited = q - dq;
        if ((u_old > 0.0 && limited < 0.0) || (u_old < 0.0 && limited > 0.0)) limited = 0.0;
        state.discharge[i] = limited;
      }
    }
  }

  update_regime(state);

  for (std::size_t i = 0; i < n; ++i) {
    const double s = ws.cells[i].s;
    if (state.area[i] < 0.0) {
      if (state.area[i] >= -1e-13 * s) {
        state.area[i] = 0.0;  // flush roundoff from the flux cancellations
      } else {
        throw SimulationError("negative wet area after update in cell " + std::to_string(i),
                              state.time, state.step_count);
      }
    }
    if (state.area[i] <= dry_threshold(s)) {
      state.discharge[i] = 0.0;
    }
  }

  if (stats) {
    stats->boundary_mass_influx = dt * (ws.plus_mass[0] - ws.minus_mass[n]);
  }
  state.time += dt;
  state.step_count += 1;
}

}  // namespace pipeflow
