#include "pipeflow/kinetic.hpp"

#include <cmath>
#include <stdexcept>

namespace pipeflow::kinetic {

namespace {
using Kernel = detail::FluxKernel<detail::ScalarOps>;
}

double chi(double omega) {
  if (std::abs(omega) <= kSqrt3) return 1.0 / (2.0 * kSqrt3);
  return 0.0;
}

double gibbs_density(const GibbsParameters& p, double xi) {
  if (p.area <= 0.0) return 0.0;
  if (!(p.celerity > 0.0)) throw std::domain_error("gibbs density needs a positive celerity");
  return p.area / p.celerity * chi((xi - p.velocity) / p.celerity);
}

Moments moments(const GibbsParameters& p) {
  if (!(p.celerity > 0.0)) throw std::domain_error("moments need a positive celerity");
  Moments m;
  m.m0 = p.area;
  m.m1 = p.area * p.velocity;
  m.m2 = p.area * p.velocity * p.velocity + p.area * p.celerity * p.celerity;
  return m;
}

double potential_barrier(const WVector& left, const WVector& right, const SourceVector& mid) {
  return (right.dynamic_slope - left.dynamic_slope) * mid.dynamic_slope +
         (right.section - left.section) * mid.section +
         (right.cos_theta - left.cos_theta) * mid.cos_theta;
}

FluxPair interface_flux(const GibbsParameters& left, const GibbsParameters& right,
                        double delta_phi, double gravity) {
  const double two_g = 2.0 * gravity;
  const Kernel::Side l{left.area, left.velocity, left.celerity};
  const Kernel::Side r{right.area, right.velocity, right.celerity};
  const double delta = two_g * delta_phi;

  const auto fm = Kernel::minus(l, r, delta);
  const Kernel::Side lm{right.area, -right.velocity, right.celerity};
  const Kernel::Side rm{left.area, -left.velocity, left.celerity};
  const auto fp = Kernel::minus(lm, rm, -delta);

  FluxPair out;
  out.minus = {fm.mass, fm.mom};
  out.plus = {-fp.mass, fp.mom};
  return out;
}

FluxPair interface_flux(const InterfaceData& data, double gravity) {
  return interface_flux(data.left, data.right, data.delta_phi, gravity);
}

void flux_batch_scalar(const FluxBatch& batch, double gravity) {
  const double two_g = 2.0 * gravity;
  for (std::size_t i = 0; i < batch.size; ++i) {
    const Kernel::Side l{batch.area_l[i], batch.vel_l[i], batch.cel_l[i]};
    const Kernel::Side r{batch.area_r[i], batch.vel_r[i], batch.cel_r[i]};
    const double delta = two_g * batch.delta_phi[i];

    const auto fm = Kernel::minus(l, r, delta);
    const Kernel::Side lm{r.area, -r.vel, r.cel};
    const Kernel::Side rm{l.area, -l.vel, l.cel};
    const auto fp = Kernel::minus(lm, rm, -delta);

    batch.minus_mass[i] = fm.mass;
    batch.minus_mom[i] = fm.mom;
    batch.plus_mass[i] = -fp.mass;
    batch.plus_mom[i] = fp.mom;
  }
}

}  // namespace pipeflow::kinetic
