#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pipeflow {

// Sampled pipe profile point: axis position x, axis altitude z, radius r (all meters).
struct ProfilePoint {
  double x = 0.0;
  double z = 0.0;
  double r = 0.0;
};

// ---------------------------------------------------------------------------
// Closed-form kernels for a circular cross-section of radius r.
//
// Levels are z-coordinates measured from the pipe axis, so the wetted range
// is [-r, r] and the full section is pi*r^2. Everything is parameterized
// internally by the wetted half-angle alpha in [0, pi]:
//
//   level      H     = -r cos(alpha)
//   wet area   A     = r^2 (alpha - sin(alpha) cos(alpha))
//   moment     I1    = r^3 ((2/3) sin^3(alpha) - cos(alpha)(alpha - sin cos))
//   gamma      I2/S' = r (sin(alpha) - alpha cos(alpha)) / pi
//   perimeter  P     = 2 r alpha
//
// Small-alpha branches use truncated series to avoid the cancellation that
// makes the closed forms lose ~alpha^-2 digits near the empty section.
// ---------------------------------------------------------------------------

/// Chord length of the section at height z above the axis, 2*sqrt(r^2 - z^2).
double surface_width(double r, double z);

/// Wet area below `level` (level in [-r, r]). Strictly increasing in level.
double wet_area(double r, double level);

/// Free-surface level for a given wet area; inverse of wet_area.
/// Safeguarded Newton on the half-angle, |area residual| <= 1e-12 * pi r^2.
double water_level(double r, double area);

/// Wetted half-angle alpha in [0, pi] for a given wet area.
double wetted_angle(double r, double area);

/// Hydrostatic pressure integral I1 = integral of (H - z) * width over [-r, H].
double moment_i1(double r, double wet_area);

/// Factor gamma such that the section-variation pressure term I2 equals gamma * dS/dx.
double gamma_i2(double r, double wet_area);

double wet_perimeter(double r, double wet_area);
double hydraulic_radius(double r, double wet_area);

// All wetted-section quantities for one (r, wet_area) pair, sharing one inversion.
struct WetSection {
  double level = 0.0;
  double area = 0.0;
  double moment_i1 = 0.0;
  double gamma_i2 = 0.0;
  double perimeter = 0.0;
  double hydraulic_radius = 0.0;
};
WetSection wet_section(double r, double wet_area);

// ---------------------------------------------------------------------------
// Mesh geometry
// ---------------------------------------------------------------------------

// Geometry sample at one mesh node.
struct SectionSample {
  double x = 0.0;
  double z = 0.0;          // axis altitude
  double r = 0.0;          // radius
  double s = 0.0;          // full section, pi r^2
  double cos_theta = 1.0;  // axis inclination cosine
  double ds_dx = 0.0;
  double dcos_dx = 0.0;
};

// Uniform-mesh pipe geometry sampled at cell centers and cell interfaces.
//
// For n cells over [x0, x0 + n dx] there are 2n+1 nodes spaced dx/2 apart:
// even nodes are interfaces (node 2j = interface j, j = 0..n) and odd nodes
// are cell centers (node 2i+1 = cell i, i = 0..n-1). Z and R are linearly
// interpolated from the profile; cos(theta) comes from the sampled Z slope,
// and dS/dx, d(cos theta)/dx use centered differences (one-sided at the ends).
class PipeGeometry {
 public:
  PipeGeometry() = default;

  /// Builds the mesh from a sampled (x, z, r) profile. The profile must have
  /// at least two points with strictly increasing x and positive radii.
  static PipeGeometry build(std::span<const ProfilePoint> profile, std::size_t n_cells);

  std::size_t n_cells() const { return n_cells_; }
  std::size_t n_nodes() const { return x_.size(); }
  double dx() const { return dx_; }
  double length() const { return n_cells_ * dx_; }
  double x_begin() const { return x_.empty() ? 0.0 : x_.front(); }

  SectionSample node(std::size_t k) const;
  SectionSample cell(std::size_t i) const { return node(2 * i + 1); }
  SectionSample interface(std::size_t j) const { return node(2 * j); }

  std::span<const double> node_x() const { return x_; }
  std::span<const double> node_z() const { return z_; }
  std::span<const double> node_r() const { return r_; }
  std::span<const double> node_s() const { return s_; }
  std::span<const double> node_cos_theta() const { return cos_theta_; }

 private:
  std::size_t n_cells_ = 0;
  double dx_ = 0.0;
  std::vector<double> x_, z_, r_, s_, cos_theta_, ds_dx_, dcos_dx_;
};

}  // namespace pipeflow
