// AVX2 variant of the interface-flux kernel. This translation unit is the
// only one compiled with -mavx2; callers must dispatch through
// active_flux_batch() or check cpu_supports_avx2() first.

#include "pipeflow/kinetic.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace pipeflow::kinetic {

namespace {

struct Avx2Ops {
  using V = __m256d;
  using Mask = __m256d;
  static V set(double c) { return _mm256_set1_pd(c); }
  static V add(V a, V b) { return _mm256_add_pd(a, b); }
  static V sub(V a, V b) { return _mm256_sub_pd(a, b); }
  static V mul(V a, V b) { return _mm256_mul_pd(a, b); }
  static V div(V a, V b) { return _mm256_div_pd(a, b); }
  static V neg(V a) { return _mm256_xor_pd(a, _mm256_set1_pd(-0.0)); }
  static V max(V a, V b) { return _mm256_max_pd(a, b); }
  static V min(V a, V b) { return _mm256_min_pd(a, b); }
  static V sqrt(V a) { return _mm256_sqrt_pd(a); }
  static Mask gt(V a, V b) { return _mm256_cmp_pd(a, b, _CMP_GT_OQ); }
  static V select(Mask m, V a, V b) { return _mm256_blendv_pd(b, a, m); }
};

using Kernel = detail::FluxKernel<Avx2Ops>;

}  // namespace

void flux_batch_avx2(const FluxBatch& batch, double gravity) {
  const double two_g = 2.0 * gravity;
  const __m256d vtwo_g = _mm256_set1_pd(two_g);

  std::size_t i = 0;
  for (; i + 4 <= batch.size; i += 4) {
    const Kernel::Side l{_mm256_loadu_pd(batch.area_l + i), _mm256_loadu_pd(batch.vel_l + i),
                         _mm256_loadu_pd(batch.cel_l + i)};
    const Kernel::Side r{_mm256_loadu_pd(batch.area_r + i), _mm256_loadu_pd(batch.vel_r + i),
                         _mm256_loadu_pd(batch.cel_r + i)};
    const __m256d delta = _mm256_mul_pd(vtwo_g, _mm256_loadu_pd(batch.delta_phi + i));

    const auto fm = Kernel::minus(l, r, delta);
    const Kernel::Side lm{r.area, Avx2Ops::neg(r.vel), r.cel};
    const Kernel::Side rm{l.area, Avx2Ops::neg(l.vel), l.cel};
    const auto fp = Kernel::minus(lm, rm, Avx2Ops::neg(delta));

    _mm256_storeu_pd(batch.minus_mass + i, fm.mass);
    _mm256_storeu_pd(batch.minus_mom + i, fm.mom);
    _mm256_storeu_pd(batch.plus_mass + i, Avx2Ops::neg(fp.mass));
    _mm256_storeu_pd(batch.plus_mom + i, fp.mom);
  }

  if (i < batch.size) {
    FluxBatch tail = batch;
    tail.size = batch.size - i;
    tail.area_l += i;
    tail.vel_l += i;
    tail.cel_l += i;
    tail.area_r += i;
    tail.vel_r += i;
    tail.cel_r += i;
    tail.delta_phi += i;
    tail.minus_mass += i;
    tail.minus_mom += i;
    tail.plus_mass += i;
    tail.plus_mom += i;
    flux_batch_scalar(tail, gravity);
  }
}

}  // namespace pipeflow::kinetic

#endif  // x86-64
