#pragma once

#include <cstddef>

#include "pipeflow/kinetic_kernel.hpp"
#include "pipeflow/model.hpp"

namespace pipeflow::kinetic {

/// Uniform equilibrium shape function: 1/(2 sqrt(3)) on [-sqrt(3), sqrt(3)].
/// Even, unit mass, unit second moment.
double chi(double omega);

// Parameters of the equilibrium density on one side of an interface.
struct GibbsParameters {
  double area = 0.0;      // m^2
  double velocity = 0.0;  // m/s
  double celerity = 0.0;  // m/s, half-width parameter b
};

/// Equilibrium density (area/b) * chi((xi - u)/b).
double gibbs_density(const GibbsParameters& p, double xi);

struct Moments {
  double m0 = 0.0;  // area
  double m1 = 0.0;  // discharge
  double m2 = 0.0;  // momentum flux, A u^2 + A b^2
};

/// Closed-form moments of the equilibrium density against (1, xi, xi^2).
Moments moments(const GibbsParameters& p);

/// Potential barrier across an interface: (W_right - W_left) . B_mid, with B
/// evaluated at the straight-line path midpoint.
double potential_barrier(const WVector& left, const WVector& right, const SourceVector& mid);

struct Flux2 {
  double mass = 0.0;
  double momentum = 0.0;
};

// Left- and right-sided numerical fluxes of one interface.
struct FluxPair {
  Flux2 minus;
  Flux2 plus;
};

struct InterfaceData {
  GibbsParameters left;
  GibbsParameters right;
  double delta_phi = 0.0;  // m
};

/// Closed-form interface fluxes with reflection and transmission across the
/// potential barrier delta_phi. With delta_phi = 0 both sides coincide with
/// the upwind moment splitting.
FluxPair interface_flux(const GibbsParameters& left, const GibbsParameters& right,
                        double delta_phi, double gravity);
FluxPair interface_flux(const InterfaceData& data, double gravity);

// ---------------------------------------------------------------------------
// Batched kernel with runtime-selected SIMD backend
// ---------------------------------------------------------------------------

// Structure-of-arrays view over a batch of interfaces. All pointers hold
// `size` doubles; outputs are written per interface.
struct FluxBatch {
  std::size_t size = 0;
  const double* area_l = nullptr;
  const double* vel_l = nullptr;
  const double* cel_l = nullptr;
  const double* area_r = nullptr;
  const double* vel_r = nullptr;
  const double* cel_r = nullptr;
  const double* delta_phi = nullptr;
  double* minus_mass = nullptr;
  double* minus_mom = nullptr;
  double* plus_mass = nullptr;
  double* plus_mom = nullptr;
};

using FluxBatchFn = void (*)(const FluxBatch&, double gravity);

/// Scalar reference kernel; always available.
void flux_batch_scalar(const FluxBatch& batch, double gravity);

#if defined(__x86_64__) || defined(_M_X64)
/// AVX2 kernel, 4 interfaces per vector. Lane-for-lane bit-identical with the
/// scalar reference. Call only when cpu_supports_avx2() is true.
void flux_batch_avx2(const FluxBatch& batch, double gravity);
#endif

bool cpu_supports_avx2();

/// Kernel selected from the CPU and the PIPEFLOW_KERNEL environment variable
/// (auto | scalar | avx2); resolved once per process.
FluxBatchFn active_flux_batch();
const char* active_flux_batch_name();

}  // namespace pipeflow::kinetic
