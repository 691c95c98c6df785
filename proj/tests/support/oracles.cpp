#include "support/oracles.hpp"

#include <cmath>
#include <numbers>

#include "pipeflow/quadrature.hpp"

namespace pipeflow::oracle {

namespace {

constexpr double kPi = std::numbers::pi;

double width(double r, double z) {
  const double d2 = r * r - z * z;
  return d2 > 0.0 ? 2.0 * std::sqrt(d2) : 0.0;
}

}  // namespace

// The width integrands have sqrt-type kinks at z = -r (and z = r when full),
// which caps plain adaptive Simpson far above the accuracy these references
// need at small fills. Both integrals are therefore integrated under the
// exact substitution z = -r cos(t), which makes them smooth; the integrands
// below are still the literal (level - z) * width definitions, reparameterized.

double wet_area_by_quadrature(double r, double level) {
  if (level <= -r) return 0.0;
  const double c = std::min(std::max(-level / r, -1.0), 1.0);
  const double alpha = std::acos(c);
  const double value = quadrature::adaptive_simpson(
      [&](double t) {
        const double z = -r * std::cos(t);
        return width(r, z) * r * std::sin(t);  // dz = r sin(t) dt
      },
      0.0, alpha, 1e-14 * r * r * std::max(alpha, 1e-3));
  return value;
}

double moment_i1_by_quadrature(double r, double level) {
  if (level <= -r) return 0.0;
  const double c = std::min(std::max(-level / r, -1.0), 1.0);
  const double alpha = std::acos(c);
  return quadrature::adaptive_simpson(
      [&](double t) {
        const double z = -r * std::cos(t);
        return (level - z) * width(r, z) * r * std::sin(t);
      },
      0.0, alpha, 1e-14 * r * r * r * std::max(alpha, 1e-3));
}

double gamma_i2_by_quadrature(double r, double level) {
  // d(width)/dr = 2 r / sqrt(r^2 - z^2); substituting z = -r cos(t) gives
  // the smooth integrand 2 r (level + r cos(t)) on [0, alpha].
  const double c = std::min(std::max(-level / r, -1.0), 1.0);
  const double alpha = std::acos(c);
  if (alpha <= 0.0) return 0.0;
  const double integral = quadrature::adaptive_simpson(
      [&](double t) { return 2.0 * r * (level + r * std::cos(t)); }, 0.0, alpha, 1e-14 * r * r);
  return integral / (2.0 * kPi * r);
}

double wet_perimeter_by_polygon(double r, double level, std::size_t segments) {
  const double c = std::min(std::max(-level / r, -1.0), 1.0);
  const double alpha = std::acos(c);
  if (alpha <= 0.0) return 0.0;

  // Chord sum over the wetted arc (symmetric halves), then one Richardson
  // step: the chordal error is O(h^2), so (4 L_{2n} - L_n) / 3 is O(h^4).
  auto chord_sum = [&](std::size_t n) {
    double len = 0.0;
    double prev_y = r * std::sin(0.0);
    double prev_z = -r * std::cos(0.0);
    for (std::size_t k = 1; k <= n; ++k) {
      const double t = alpha * static_cast<double>(k) / static_cast<double>(n);
      const double y = r * std::sin(t);
      const double z = -r * std::cos(t);
      len += std::hypot(y - prev_y, z - prev_z);
      prev_y = y;
      prev_z = z;
    }
    return 2.0 * len;  // both sides of the section
  };
  const double l1 = chord_sum(segments);
  const double l2 = chord_sum(2 * segments);
  return (4.0 * l2 - l1) / 3.0;
}

}  // namespace pipeflow::oracle
