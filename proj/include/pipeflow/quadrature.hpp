#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>

#include "pipeflow/kinetic.hpp"

// Quadrature-based reference evaluations of the kinetic integrals. These
// integrate the microscopic flux definition directly (indicator sets plus
// density look-ups, no closed forms) and exist to cross-check the closed-form
// kernels; the solver never calls them in its hot path.

namespace pipeflow::quadrature {

/// Adaptive Simpson integration with Richardson acceptance.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 60);

/// Interface fluxes by direct integration of the reflected/transmitted
/// density against (xi, xi^2).
kinetic::FluxPair flux_by_quadrature(const kinetic::GibbsParameters& left,
                                     const kinetic::GibbsParameters& right, double delta_phi,
                                     double gravity);

/// Moments of the equilibrium density by integration over its support.
kinetic::Moments moments_by_quadrature(const kinetic::GibbsParameters& p);

/// Draws a randomized interface instance (areas may be zero, barriers may be
/// huge) for kernel cross-checks.
kinetic::InterfaceData random_interface(std::mt19937_64& rng);

using FluxFn = std::function<kinetic::FluxPair(const kinetic::InterfaceData&, double)>;

struct FluxCheckResult {
  double max_rel_error = 0.0;
  std::size_t count = 0;
};

/// Compares a flux kernel against the quadrature reference on `count` seeded
/// random instances. Errors are measured relative to the larger of the
/// reference component and a per-instance flux magnitude, so near-cancelled
/// components do not produce spurious blow-ups.
FluxCheckResult check_flux_kernel(std::uint64_t seed, std::size_t count, const FluxFn& kernel,
                                  double gravity = 9.81);

// --- implementation ---------------------------------------------------------

namespace detail {

template <class F>
double simpson_step(F& f, double a, double m, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_step(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, m, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace pipeflow::quadrature
