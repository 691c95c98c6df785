#include "pipeflow/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pipeflow {

namespace {

// Wet area fed to the circular-section kernels. Free-surface states can
// transiently exceed the section (before the regime update) and interface
// midpoints may as well; the geometry argument is capped at the full section.
double geometry_area(double area, Regime regime, double section) {
  const double wet = physical_wet_area(area, regime, section);
  return std::min(wet, section);
}

void require_positive_area(double area) {
  if (!(area > 0.0)) throw std::domain_error("cell area must be positive");
}

}  // namespace

double velocity(double area, double discharge, double section) {
  if (area <= dry_threshold(section)) return 0.0;
  return discharge / area;
}

double physical_wet_area(double area, Regime regime, double section) {
  return regime == Regime::Pressurized ? section : area;
}

double pressure(const SectionSample& geo, double area, Regime regime,
                const PhysicalConstants& pc) {
  const double wet = geometry_area(area, regime, geo.s);
  const double hydrostatic = pc.gravity * moment_i1(geo.r, wet) * geo.cos_theta;
  if (regime == Regime::Pressurized) {
    const double c = pc.sonic_speed;
    return c * c * (area - geo.s) + hydrostatic;
  }
  return hydrostatic;
}

double celerity(const SectionSample& geo, double area, Regime regime,
                const PhysicalConstants& pc) {
  require_positive_area(area);
  const double wet = geometry_area(area, regime, geo.s);
  const double hydro = pc.gravity * moment_i1(geo.r, wet) * geo.cos_theta / area;
  if (regime == Regime::Pressurized) {
    return std::sqrt(hydro + pc.sonic_speed * pc.sonic_speed);
  }
  return std::sqrt(hydro);
}

double friction_from_section(const WetSection& ws, const PhysicalConstants& pc) {
  const double rh = ws.hydraulic_radius;
  return 1.0 / (pc.strickler * pc.strickler * std::pow(rh, 4.0 / 3.0));
}

double friction_coefficient(const SectionSample& geo, double area, Regime regime,
                            const PhysicalConstants& pc) {
  if (area <= dry_threshold(geo.s)) return 0.0;
  const double wet = geometry_area(area, regime, geo.s);
  return friction_from_section(wet_section(geo.r, wet), pc);
}

SourceVector source_vector_from_section(const WetSection& ws, const SectionSample& geo,
                                        double area, Regime regime,
                                        const PhysicalConstants& pc) {
  SourceVector b;
  b.dynamic_slope = 1.0;
  b.section = -ws.gamma_i2 * geo.cos_theta / area;
  if (regime == Regime::Pressurized) {
    const double c = pc.sonic_speed;
    b.section -= (c * c / pc.gravity) * (area - geo.s) / (area * geo.s);
  }
  b.cos_theta = ws.level - ws.moment_i1 / ws.area;
  return b;
}

SourceVector source_vector(const SectionSample& geo, double area, Regime regime,
                           const PhysicalConstants& pc) {
  require_positive_area(area);
  const double wet = geometry_area(area, regime, geo.s);
  return source_vector_from_section(wet_section(geo.r, wet), geo, area, regime, pc);
}

double rest_state_residual(const SectionSample& geo, double area, Regime regime,
                           const PhysicalConstants& pc) {
  require_positive_area(area);
  const double wet = geometry_area(area, regime, geo.s);
  const double level = regime == Regime::Pressurized ? geo.r : water_level(geo.r, wet);
  double residual = pc.gravity * (level * geo.cos_theta + geo.z);
  if (regime == Regime::Pressurized) {
    const double c = pc.sonic_speed;
    residual += c * c * std::log(area / geo.s);
  }
  return residual;
}

double entropy(const SectionSample& geo, const CellState& cell, const PhysicalConstants& pc) {
  require_positive_area(cell.area);
  const double a = cell.area;
  const double wet = geometry_area(a, cell.regime, geo.s);
  const double c = pc.sonic_speed;
  const WetSection ws = wet_section(geo.r, wet);
  const double z_bar = ws.level - ws.moment_i1 / ws.area;
  double e = 0.5 * cell.discharge * cell.discharge / a + c * c * geo.s +
             pc.gravity * a * (z_bar * geo.cos_theta + geo.z);
  if (cell.regime == Regime::Pressurized) {
    e += c * c * a * std::log(a / geo.s);
  }
  return e;
}

double piezometric_head(const SectionSample& geo, double area, Regime regime,
                        const PhysicalConstants& pc) {
  if (regime == Regime::Pressurized) {
    const double c = pc.sonic_speed;
    return geo.z + 2.0 * geo.r + c * c * (area - geo.s) / (pc.gravity * geo.s);
  }
  const double wet = std::min(std::max(area, 0.0), geo.s);
  if (wet <= 0.0) return geo.z - geo.r;  // empty section: level at the invert
  return geo.z + water_level(geo.r, wet);
}

}  // namespace pipeflow
