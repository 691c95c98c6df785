#pragma once

#include <cmath>
#include <numbers>

// Interface-flux kernel shared by the scalar reference path and the SIMD
// variants. The kernel is written once against a small lane-ops vocabulary;
// instantiating it with ScalarOps (double) or a vector-ops struct yields
// bit-identical per-lane results as long as FP contraction stays off, which
// is what the equivalence tests pin down.
//
// For the uniform equilibrium the density is a plateau of value A/(2*sqrt(3)*b)
// on [u - sqrt(3) b, u + sqrt(3) b], so every flux contribution is a moment of
// a constant over a clipped interval:
//   - free-stream piece over the outgoing half-line,
//   - reflected band [0, sqrt(max(delta,0))] mirrored onto the outgoing side,
//   - transmitted piece from the neighbor, integrated in the neighbor's own
//     speed variable w with xi^2 = w^2 + delta (delta = 2 g dphi), giving
//     (w^2 + delta)^(3/2) antiderivatives for the momentum.
// Empty clips are handled by clamping interval ends into each other, so the
// kernel is branch-free.

namespace pipeflow::kinetic {

inline constexpr double kSqrt3 = std::numbers::sqrt3;

namespace detail {

struct ScalarOps {
  using V = double;
  using Mask = bool;
  static V set(double c) { return c; }
  static V add(V a, V b) { return a + b; }
  static V sub(V a, V b) { return a - b; }
  static V mul(V a, V b) { return a * b; }
  static V div(V a, V b) { return a / b; }
  static V neg(V a) { return -a; }
  // Same pick-second-on-ties semantics as the vector min/max instructions.
  static V max(V a, V b) { return a > b ? a : b; }
  static V min(V a, V b) { return a < b ? a : b; }
  static V sqrt(V a) { return std::sqrt(a); }
  static Mask gt(V a, V b) { return a > b; }
  static V select(Mask m, V a, V b) { return m ? a : b; }
};

template <class Ops>
struct FluxKernel {
  using V = typename Ops::V;

  struct Side {
    V area;
    V vel;
    V cel;
  };
  struct Flux {
    V mass;
    V mom;
  };

  static V seg2(V m, V a, V b) {
    return Ops::mul(m, Ops::mul(Ops::sub(Ops::mul(b, b), Ops::mul(a, a)), Ops::set(0.5)));
  }

  static V seg3(V m, V a, V b) {
    const V b3 = Ops::mul(Ops::mul(b, b), b);
    const V a3 = Ops::mul(Ops::mul(a, a), a);
    return Ops::mul(m, Ops::mul(Ops::sub(b3, a3), Ops::set(1.0 / 3.0)));
  }

  // integral of w * sqrt(w^2 + delta) over [a, b]: ((w^2+delta)^(3/2))/3.
  static V seg_shifted(V m, V a, V b, V delta) {
    const V zero = Ops::set(0.0);
    const V ta = Ops::max(Ops::add(Ops::mul(a, a), delta), zero);
    const V tb = Ops::max(Ops::add(Ops::mul(b, b), delta), zero);
    const V va = Ops::mul(ta, Ops::sqrt(ta));
    const V vb = Ops::mul(tb, Ops::sqrt(tb));
    return Ops::mul(m, Ops::mul(Ops::sub(vb, va), Ops::set(1.0 / 3.0)));
  }

  // Flux density integrated on the left side of an interface whose potential
  // jump is delta = 2 g dphi. The mirrored call minus(reflect(r), reflect(l),
  // -delta) with the mass sign flipped gives the right-side flux exactly.
  static Flux minus(const Side& l, const Side& r, V delta) {
    const V zero = Ops::set(0.0);
    const V s3 = Ops::set(kSqrt3);
    const V two_s3 = Ops::set(2.0 * kSqrt3);

    // Plateau values; empty or degenerate states contribute nothing.
    const V ml = Ops::select(Ops::gt(l.cel, zero), Ops::div(l.area, Ops::mul(two_s3, l.cel)), zero);
    const V mr = Ops::select(Ops::gt(r.cel, zero), Ops::div(r.area, Ops::mul(two_s3, r.cel)), zero);
    const V lo_l = Ops::sub(l.vel, Ops::mul(s3, l.cel));
    const V hi_l = Ops::add(l.vel, Ops::mul(s3, l.cel));
    const V lo_r = Ops::sub(r.vel, Ops::mul(s3, r.cel));
    const V hi_r = Ops::add(r.vel, Ops::mul(s3, r.cel));

    const V sqp = Ops::sqrt(Ops::max(delta, zero));        // reflection band edge
    const V sqm = Ops::sqrt(Ops::max(Ops::neg(delta), zero));

    // Outgoing free stream over [a1, b1].
    const V a1 = Ops::max(lo_l, zero);
    const V b1 = Ops::max(hi_l, a1);
    // Reflected band [a1, b2] (empty unless delta > 0).
    const V b2 = Ops::max(Ops::min(hi_l, sqp), a1);
    // Transmission from the right in w-space over [a3, b3] below wmax.
    const V wmax = Ops::neg(sqm);
    const V b3 = Ops::min(hi_r, wmax);
    const V a3 = Ops::min(lo_r, b3);

    Flux f;
    f.mass = Ops::add(Ops::sub(seg2(ml, a1, b1), seg2(ml, a1, b2)), seg2(mr, a3, b3));
    f.mom = Ops::sub(Ops::add(seg3(ml, a1, b1), seg3(ml, a1, b2)), seg_shifted(mr, a3, b3, delta));
    return f;
  }
};

}  // namespace detail
}  // namespace pipeflow::kinetic
