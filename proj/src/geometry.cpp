#include "pipeflow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pipeflow {

namespace {

constexpr double kPi = std::numbers::pi;

// Relative slack accepted before an argument is rejected as out of domain.
constexpr double kDomainSlack = 1e-9;

// Below this half-angle the closed forms cancel catastrophically; use series.
constexpr double kSeriesAngle = 1e-2;

[[noreturn]] void domain_fail(const char* what, double value) {
  throw std::domain_error(std::string(what) + " (got " + std::to_string(value) + ")");
}

// alpha - sin(alpha) cos(alpha), i.e. wet area / r^2.
double area_angle_fn(double alpha) {
  if (alpha < kSeriesAngle) {
    const double a2 = alpha * alpha;
    return alpha * a2 * (2.0 / 3.0 + a2 * (-2.0 / 15.0 + a2 * (4.0 / 315.0)));
  }
  return alpha - std::sin(alpha) * std::cos(alpha);
}

// (2/3) sin^3(alpha) - cos(alpha) (alpha - sin cos), i.e. I1 / r^3.
double moment_angle_fn(double alpha) {
  if (alpha < kSeriesAngle) {
    const double a2 = alpha * alpha;
    const double a5 = a2 * a2 * alpha;
    return a5 * (2.0 / 15.0 + a2 * (-11.0 / 315.0 + a2 * (17.0 / 3780.0)));
  }
  const double s = std::sin(alpha);
  return (2.0 / 3.0) * s * s * s - std::cos(alpha) * area_angle_fn(alpha);
}

// sin(alpha) - alpha cos(alpha), i.e. pi * gamma / r.
double gamma_angle_fn(double alpha) {
  if (alpha < kSeriesAngle) {
    const double a2 = alpha * alpha;
    return alpha * a2 * (1.0 / 3.0 + a2 * (-1.0 / 30.0 + a2 * (1.0 / 840.0)));
  }
  return std::sin(alpha) - alpha * std::cos(alpha);
}

double checked_radius(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) domain_fail("pipe radius must be positive", r);
  return r;
}

// Clamps a wet area into [0, pi r^2], rejecting values outside the slack band.
double checked_area(double r, double area, bool allow_zero) {
  const double full = kPi * r * r;
  if (!std::isfinite(area) || area < -kDomainSlack * full || area > full * (1.0 + kDomainSlack)) {
    domain_fail("wet area outside [0, pi r^2]", area);
  }
  const double clamped = std::clamp(area, 0.0, full);
  if (!allow_zero && clamped <= 0.0) domain_fail("wet area must be positive", area);
  return clamped;
}

}  // namespace

double surface_width(double r, double z) {
  checked_radius(r);
  if (std::abs(z) > r * (1.0 + kDomainSlack)) domain_fail("level outside [-r, r]", z);
  const double d2 = std::max(r * r - z * z, 0.0);
  return 2.0 * std::sqrt(d2);
}

double wet_area(double r, double level) {
  checked_radius(r);
  if (std::abs(level) > r * (1.0 + kDomainSlack)) domain_fail("level outside [-r, r]", level);
  const double c = std::clamp(-level / r, -1.0, 1.0);
  return r * r * area_angle_fn(std::acos(c));
}

double wetted_angle(double r, double area) {
  checked_radius(r);
  const double a = checked_area(r, area, true) / (r * r);  // target, in [0, pi]
  if (a <= 0.0) return 0.0;
  if (a >= kPi) return kPi;

  // Newton on f(alpha) = area_angle_fn(alpha) - a with bisection safeguard.
  // f' = 1 - cos(2 alpha) = 2 sin^2(alpha) vanishes at both ends, hence the
  // cube-root starters there.
  double lo = 0.0, hi = kPi;
  double alpha;
  if (a < 1.0) {
    alpha = std::cbrt(1.5 * a);
  } else if (kPi - a < 1.0) {
    alpha = kPi - std::cbrt(1.5 * (kPi - a));
  } else {
    alpha = a;  // crude mid-range starter; Newton converges fast away from the ends
  }
  alpha = std::clamp(alpha, 1e-30, kPi);

  // Stop at the evaluation noise floor of the residual (well inside the
  // 1e-12 * section tolerance): the closed expression cancels to ~eps * alpha,
  // the series branch to ~eps * a. A looser stop would leak an amplified
  // angle error into I1 and gamma at small fills.
  for (int it = 0; it < 100; ++it) {
    const double f = area_angle_fn(alpha) - a;
    const double tol = 8.0 * 2.22e-16 * (alpha < kSeriesAngle ? a : alpha);
    if (std::abs(f) <= tol) break;
    if (f > 0.0) {
      hi = alpha;
    } else {
      lo = alpha;
    }
    const double s = std::sin(alpha);
    const double df = 2.0 * s * s;
    double next = alpha - f / df;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == alpha) break;
    alpha = next;
  }
  return alpha;
}

double water_level(double r, double area) {
  return -r * std::cos(wetted_angle(r, area));
}

double moment_i1(double r, double wet_area_val) {
  checked_radius(r);
  const double a = checked_area(r, wet_area_val, true);
  if (a <= 0.0) return 0.0;
  return r * r * r * moment_angle_fn(wetted_angle(r, a));
}

double gamma_i2(double r, double wet_area_val) {
  checked_radius(r);
  const double a = checked_area(r, wet_area_val, false);
  return r * gamma_angle_fn(wetted_angle(r, a)) / kPi;
}

double wet_perimeter(double r, double wet_area_val) {
  checked_radius(r);
  const double a = checked_area(r, wet_area_val, false);
  return 2.0 * r * wetted_angle(r, a);
}

double hydraulic_radius(double r, double wet_area_val) {
  checked_radius(r);
  const double a = checked_area(r, wet_area_val, false);
  return a / wet_perimeter(r, a);
}

WetSection wet_section(double r, double wet_area_val) {
  checked_radius(r);
  const double a = checked_area(r, wet_area_val, false);
  const double alpha = wetted_angle(r, a);
  WetSection w;
  w.area = a;
  w.level = -r * std::cos(alpha);
  w.moment_i1 = r * r * r * moment_angle_fn(alpha);
  w.gamma_i2 = r * gamma_angle_fn(alpha) / kPi;
  w.perimeter = 2.0 * r * alpha;
  w.hydraulic_radius = a / w.perimeter;
  return w;
}

PipeGeometry PipeGeometry::build(std::span<const ProfilePoint> profile, std::size_t n_cells) {
  if (profile.size() < 2) {
    throw std::invalid_argument("geometry profile needs at least 2 samples");
  }
  if (n_cells < 1) {
    throw std::invalid_argument("geometry needs at least 1 cell");
  }
  for (std::size_t i = 0; i + 1 < profile.size(); ++i) {
    if (!(profile[i + 1].x > profile[i].x)) {
      throw std::invalid_argument("geometry profile x samples must be strictly increasing");
    }
  }
  for (const auto& p : profile) {
    if (!(p.r > 0.0)) throw std::invalid_argument("geometry profile radii must be positive");
  }

  PipeGeometry g;
  g.n_cells_ = n_cells;
  const double x0 = profile.front().x;
  const double length = profile.back().x - x0;
  g.dx_ = length / static_cast<double>(n_cells);

  const std::size_t n_nodes = 2 * n_cells + 1;
  const double h = 0.5 * g.dx_;  // node spacing
  g.x_.resize(n_nodes);
  g.z_.resize(n_nodes);
  g.r_.resize(n_nodes);
  g.s_.resize(n_nodes);
  g.cos_theta_.resize(n_nodes);
  g.ds_dx_.resize(n_nodes);
  g.dcos_dx_.resize(n_nodes);

  std::size_t seg = 0;
  for (std::size_t k = 0; k < n_nodes; ++k) {
    const double x = x0 + static_cast<double>(k) * h;
    while (seg + 2 < profile.size() && x > profile[seg + 1].x) ++seg;
    const auto& p0 = profile[seg];
    const auto& p1 = profile[seg + 1];
    const double t = std::clamp((x - p0.x) / (p1.x - p0.x), 0.0, 1.0);
    g.x_[k] = x;
    g.z_[k] = p0.z + t * (p1.z - p0.z);
    g.r_[k] = p0.r + t * (p1.r - p0.r);
    g.s_[k] = kPi * g.r_[k] * g.r_[k];
  }

  // Centered slope stencils on the node grid, one-sided at the ends.
  auto slope = [&](const std::vector<double>& f, std::size_t k) {
    if (k == 0) return (f[1] - f[0]) / h;
    if (k + 1 == n_nodes) return (f[k] - f[k - 1]) / h;
    return (f[k + 1] - f[k - 1]) / (2.0 * h);
  };
  for (std::size_t k = 0; k < n_nodes; ++k) {
    const double dz = slope(g.z_, k);
    g.cos_theta_[k] = 1.0 / std::sqrt(1.0 + dz * dz);
    g.ds_dx_[k] = slope(g.s_, k);
  }
  for (std::size_t k = 0; k < n_nodes; ++k) {
    g.dcos_dx_[k] = slope(g.cos_theta_, k);
  }
  return g;
}

SectionSample PipeGeometry::node(std::size_t k) const {
  if (k >= x_.size()) throw std::out_of_range("geometry node index out of range");
  return SectionSample{x_[k], z_[k], r_[k], s_[k], cos_theta_[k], ds_dx_[k], dcos_dx_[k]};
}

}  // namespace pipeflow
