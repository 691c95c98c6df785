// Equivalence of the runtime-dispatched SIMD flux kernel with the scalar
// reference: same inputs, bit-identical outputs, including the edge cases the
// solver produces (vacuum sides, huge barriers, degenerate celerities).

#include <cstdlib>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "pipeflow/kinetic.hpp"
#include "pipeflow/quadrature.hpp"

using namespace pipeflow;
using kinetic::FluxBatch;

namespace {

struct BatchData {
  std::vector<double> al, ul, bl, ar, ur, br, dphi;
  std::vector<double> mm, mo, pm, po;

  explicit BatchData(std::size_t n)
      : al(n), ul(n), bl(n), ar(n), ur(n), br(n), dphi(n), mm(n), mo(n), pm(n), po(n) {}

  FluxBatch view() {
    FluxBatch b;
    b.size = al.size();
    b.area_l = al.data();
    b.vel_l = ul.data();
    b.cel_l = bl.data();
    b.area_r = ar.data();
    b.vel_r = ur.data();
    b.cel_r = br.data();
    b.delta_phi = dphi.data();
    b.minus_mass = mm.data();
    b.minus_mom = mo.data();
    b.plus_mass = pm.data();
    b.plus_mom = po.data();
    return b;
  }
};

BatchData random_batch(std::size_t n, std::uint64_t seed) {
  BatchData d(n);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    auto inst = quadrature::random_interface(rng);
    // Sprinkle in the degenerate lanes the solver produces.
    if (i % 17 == 0) inst.left = {0.0, 0.0, 0.0};
    if (i % 23 == 0) inst.right.celerity = 0.0;
    if (i % 29 == 0) inst.delta_phi = 1e12;
    if (i % 31 == 0) inst.delta_phi = -1e12;
    d.al[i] = inst.left.area;
    d.ul[i] = inst.left.velocity;
    d.bl[i] = inst.left.celerity;
    d.ar[i] = inst.right.area;
    d.ur[i] = inst.right.velocity;
    d.br[i] = inst.right.celerity;
    d.dphi[i] = inst.delta_phi;
  }
  return d;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar batch kernel matches the single-interface flux") {
  auto d = random_batch(257, 101);
  kinetic::flux_batch_scalar(d.view(), 9.81);
  for (std::size_t i = 0; i < d.al.size(); ++i) {
    const auto f = kinetic::interface_flux({d.al[i], d.ul[i], d.bl[i]},
                                           {d.ar[i], d.ur[i], d.br[i]}, d.dphi[i], 9.81);
    CHECK(d.mm[i] == f.minus.mass);
    CHECK(d.mo[i] == f.minus.momentum);
    CHECK(d.pm[i] == f.plus.mass);
    CHECK(d.po[i] == f.plus.momentum);
  }
}

#if defined(__x86_64__) || defined(_M_X64)
TEST_CASE("avx2 batch kernel is bit-identical to the scalar reference") {
  if (!kinetic::cpu_supports_avx2()) {
    MESSAGE("AVX2 not available on this host; skipping");
    return;
  }
  for (std::size_t n : {1u, 3u, 4u, 5u, 64u, 1021u, 4096u}) {
    auto ref = random_batch(n, 7000 + n);
    auto simd = ref;
    kinetic::flux_batch_scalar(ref.view(), 9.81);
    kinetic::flux_batch_avx2(simd.view(), 9.81);
    CHECK(bitwise_equal(ref.mm, simd.mm));
    CHECK(bitwise_equal(ref.mo, simd.mo));
    CHECK(bitwise_equal(ref.pm, simd.pm));
    CHECK(bitwise_equal(ref.po, simd.po));
  }
}
#endif

TEST_CASE("runtime dispatch picks a valid kernel") {
  const std::string name = kinetic::active_flux_batch_name();
  CHECK((name == "scalar" || name == "avx2"));
  if (std::getenv("PIPEFLOW_KERNEL") == nullptr) {
    CHECK(name == (kinetic::cpu_supports_avx2() ? "avx2" : "scalar"));
  }

  auto ref = random_batch(333, 9001);
  auto via_dispatch = ref;
  kinetic::flux_batch_scalar(ref.view(), 9.81);
  kinetic::active_flux_batch()(via_dispatch.view(), 9.81);
  CHECK(bitwise_equal(ref.mm, via_dispatch.mm));
  CHECK(bitwise_equal(ref.mo, via_dispatch.mo));
  CHECK(bitwise_equal(ref.pm, via_dispatch.pm));
  CHECK(bitwise_equal(ref.po, via_dispatch.po));
}
