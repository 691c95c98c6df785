#pragma once

#include <cstdint>

#include "pipeflow/geometry.hpp"

namespace pipeflow {

// Flow regime of a cell. A closed pipe runs free-surface until the section
// fills, then switches to the pressurized (acoustic) branch of the model.
enum class Regime : std::uint8_t {
  FreeSurface = 0,
  Pressurized = 1,
};

struct PhysicalConstants {
  double gravity = 9.81;       // m/s^2
  double sonic_speed = 20.0;   // m/s, pressurized wave speed
  double strickler = 100.0;    // m^(1/3)/s
  double rho0 = 1000.0;        // kg/m^3, informational only
};

// Conservative unknowns of one cell: equivalent wet area A and discharge Q.
// In the pressurized regime A exceeds the geometric section and encodes the
// compression; the regime flag disambiguates the pressure law branch.
struct CellState {
  double area = 0.0;       // m^2
  double discharge = 0.0;  // m^3/s
  Regime regime = Regime::FreeSurface;
};

// Upwinding state vector W = (Z + integral of K u|u| dx, S, cos theta).
struct WVector {
  double dynamic_slope = 0.0;  // m; altitude plus the friction primitive
  double section = 0.0;        // m^2
  double cos_theta = 1.0;
};

// Coupling vector B with B . dW/dx the combined source; first component is 1
// by construction, which makes plain altitude jumps upwind conservatively.
struct SourceVector {
  double dynamic_slope = 1.0;
  double section = 0.0;
  double cos_theta = 0.0;
};

// Cells with less than this fraction of the full section are dry: velocity
// and friction are forced to zero there.
inline constexpr double kDryAreaFraction = 1e-10;

inline double dry_threshold(double section) { return kDryAreaFraction * section; }

/// Velocity Q/A, zero for dry cells.
double velocity(double area, double discharge, double section);

/// Physical wet area: the geometric section when pressurized, A otherwise.
double physical_wet_area(double area, Regime regime, double section);

/// Mixed pressure law: g*I1*cos(theta) on the free-surface branch plus the
/// acoustic term c^2 (A - S) when pressurized. Continuous across A = S.
double pressure(const SectionSample& geo, double area, Regime regime,
                const PhysicalConstants& pc);

/// Equilibrium half-width parameter b of the kinetic density.
double celerity(const SectionSample& geo, double area, Regime regime,
                const PhysicalConstants& pc);

/// Strickler friction coefficient K = 1 / (Ks^2 Rh^(4/3)); zero for dry cells.
double friction_coefficient(const SectionSample& geo, double area, Regime regime,
                            const PhysicalConstants& pc);

/// Source coupling vector B at a given state.
SourceVector source_vector(const SectionSample& geo, double area, Regime regime,
                           const PhysicalConstants& pc);

/// Still-water relation c^2 ln(A/S~) + g H(S~) cos(theta) + g Z. Spatially
/// constant (up to an additive reference) exactly at rest states.
double rest_state_residual(const SectionSample& geo, double area, Regime regime,
                           const PhysicalConstants& pc);

/// Mathematical entropy (mechanical energy density) of a cell state.
double entropy(const SectionSample& geo, const CellState& cell, const PhysicalConstants& pc);

/// Piezometric head: Z + water level when free-surface, Z + 2R + c^2(A-S)/(gS)
/// when pressurized. The head hydraulic engineers plot and prescribe.
double piezometric_head(const SectionSample& geo, double area, Regime regime,
                        const PhysicalConstants& pc);

// Layered variants that reuse an already-computed wetted section (hot path).
double friction_from_section(const WetSection& ws, const PhysicalConstants& pc);
SourceVector source_vector_from_section(const WetSection& ws, const SectionSample& geo,
                                        double area, Regime regime, const PhysicalConstants& pc);

}  // namespace pipeflow
