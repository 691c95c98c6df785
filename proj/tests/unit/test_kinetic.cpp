#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "pipeflow/kinetic.hpp"
#include "pipeflow/quadrature.hpp"

using namespace pipeflow;
using kinetic::FluxPair;
using kinetic::GibbsParameters;
using kinetic::InterfaceData;
using kinetic::kSqrt3;

TEST_CASE("chi function") {
  const double plateau = 1.0 / (2.0 * kSqrt3);
  CHECK(kinetic::chi(0.0) == plateau);
  CHECK(kinetic::chi(2.0) == 0.0);
  CHECK(kinetic::chi(-1.5) == plateau);
  for (double w : {0.3, 1.0, 1.7}) CHECK(kinetic::chi(w) == kinetic::chi(-w));

  // Normalization and unit second moment over the compact support.
  const double mass = quadrature::adaptive_simpson(
      [](double w) { return kinetic::chi(w); }, -kSqrt3, kSqrt3, 1e-15);
  const double second = quadrature::adaptive_simpson(
      [](double w) { return w * w * kinetic::chi(w); }, -kSqrt3, kSqrt3, 1e-15);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(second == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("equilibrium density") {
  CHECK(kinetic::gibbs_density({1.0, 0.0, 1.0}, 0.0) ==
        doctest::Approx(1.0 / (2.0 * kSqrt3)).epsilon(1e-15));
  CHECK(kinetic::gibbs_density({1.0, 0.0, 1.0}, 2.0) == 0.0);
  CHECK(kinetic::gibbs_density({2.0, 3.0, 0.5}, 3.0) ==
        doctest::Approx(2.0 / kSqrt3).epsilon(1e-15));
  CHECK(kinetic::gibbs_density({0.0, 0.0, 0.0}, 0.0) == 0.0);  // vacuum convention
  CHECK_THROWS_AS(kinetic::gibbs_density({1.0, 0.0, 0.0}, 0.0), std::domain_error);
}

TEST_CASE("macro-micro moment identities") {
  const auto m1 = kinetic::moments({1.0, 0.0, 1.0});
  CHECK(m1.m0 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m1.m1 == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(m1.m2 == doctest::Approx(1.0).epsilon(1e-15));

  const auto m2 = kinetic::moments({2.0, 3.0, 0.5});
  CHECK(m2.m0 == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(m2.m1 == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(m2.m2 == doctest::Approx(18.5).epsilon(1e-15));

  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const GibbsParameters p{5.0 * u01(rng), 6.0 * u01(rng) - 3.0, 0.05 + 3.0 * u01(rng)};
    const auto closed = kinetic::moments(p);
    const auto ref = quadrature::moments_by_quadrature(p);
    const double scale = p.area + 1.0;
    CHECK(std::abs(closed.m0 - ref.m0) <= 1e-12 * scale);
    CHECK(std::abs(closed.m1 - ref.m1) <= 1e-12 * scale * 10.0);
    CHECK(std::abs(closed.m2 - ref.m2) <= 1e-12 * scale * 100.0);
  }
}

TEST_CASE("potential barrier from the W jump") {
  const SourceVector mid{1.0, -0.3, 0.7};
  SUBCASE("zero jump") {
    const WVector w{2.0, 3.0, 1.0};
    CHECK(kinetic::potential_barrier(w, w, mid) == 0.0);
  }
  SUBCASE("pure altitude jump upwinds conservatively") {
    const WVector l{1.0, 3.0, 1.0};
    const WVector r{1.1, 3.0, 1.0};
    CHECK(kinetic::potential_barrier(l, r, mid) == doctest::Approx(0.1).epsilon(1e-12));
  }
  SUBCASE("linear in the jump") {
    const WVector l{1.0, 3.0, 0.9};
    const WVector r{1.2, 2.5, 1.0};
    const double expected = 0.2 * 1.0 + (-0.5) * (-0.3) + 0.1 * 0.7;
    CHECK(kinetic::potential_barrier(l, r, mid) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("interface flux consistency") {
  const double g = 9.81;
  SUBCASE("identical sides, no barrier: the analytic flux") {
    const GibbsParameters p{1.8, 0.7, 1.4};
    const auto f = kinetic::interface_flux(p, p, 0.0, g);
    const auto m = kinetic::moments(p);
    CHECK(f.minus.mass == doctest::Approx(m.m1).epsilon(1e-13));
    CHECK(f.minus.momentum == doctest::Approx(m.m2).epsilon(1e-13));
    CHECK(f.plus.mass == doctest::Approx(m.m1).epsilon(1e-13));
    CHECK(f.plus.momentum == doctest::Approx(m.m2).epsilon(1e-13));
  }
  SUBCASE("no barrier: both sides coincide") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
      const GibbsParameters l{5.0 * u01(rng), 6.0 * u01(rng) - 3.0, 0.05 + 2.0 * u01(rng)};
      const GibbsParameters r{5.0 * u01(rng), 6.0 * u01(rng) - 3.0, 0.05 + 2.0 * u01(rng)};
      const auto f = kinetic::interface_flux(l, r, 0.0, g);
      const double mass_scale = (l.area + r.area) * 10.0 + 1e-30;
      CHECK(std::abs(f.minus.mass - f.plus.mass) <= 1e-12 * mass_scale);
      CHECK(std::abs(f.minus.momentum - f.plus.momentum) <= 1e-12 * mass_scale * 10.0);
    }
  }
  SUBCASE("vacuum on both sides") {
    const auto f = kinetic::interface_flux({0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, 1.0, g);
    CHECK(f.minus.mass == 0.0);
    CHECK(f.minus.momentum == 0.0);
    CHECK(f.plus.mass == 0.0);
    CHECK(f.plus.momentum == 0.0);
  }
}

TEST_CASE("wall-sized barrier reflects the outgoing mass flux exactly") {
  const double g = 9.81;
  const GibbsParameters left{2.0, 0.5, 1.5};

  SUBCASE("vacuum right side: no mass crosses") {
    const auto f = kinetic::interface_flux(left, {0.0, 0.0, 0.0}, 1e12, g);
    CHECK(f.minus.mass == 0.0);  // reflection cancels the outgoing free stream bitwise
    CHECK(f.minus.momentum > 0.0);
  }
  SUBCASE("occupied right side: only its descending particles arrive") {
    const GibbsParameters right{1.0, -0.2, 1.0};
    const auto wall = kinetic::interface_flux(left, right, 1e12, g);
    // The transmitted contribution is clipped exactly as with no barrier.
    const auto free_stream = kinetic::interface_flux({0.0, 0.0, 0.0}, right, 0.0, g);
    CHECK(wall.minus.mass == free_stream.minus.mass);
  }
}

TEST_CASE("mirror identity of the flux pair") {
  const double g = 9.81;
  std::mt19937_64 rng(59);
  for (int i = 0; i < 500; ++i) {
    const auto d = quadrature::random_interface(rng);
    const auto f = kinetic::interface_flux(d.left, d.right, d.delta_phi, g);
    const GibbsParameters lm{d.right.area, -d.right.velocity, d.right.celerity};
    const GibbsParameters rm{d.left.area, -d.left.velocity, d.left.celerity};
    const auto m = kinetic::interface_flux(lm, rm, -d.delta_phi, g);
    // Exact (bitwise) by construction of the mirrored kernel.
    CHECK(f.minus.mass == -m.plus.mass);
    CHECK(f.minus.momentum == m.plus.momentum);
    CHECK(f.plus.mass == -m.minus.mass);
    CHECK(f.plus.momentum == m.minus.momentum);
  }
}

TEST_CASE("closed-form fluxes match the quadrature reference") {
  const auto result = quadrature::check_flux_kernel(
      2024, 200, [](const InterfaceData& d, double g) { return kinetic::interface_flux(d, g); });
  CHECK(result.count == 200);
  CHECK(result.max_rel_error < 1e-10);
}

TEST_CASE("flux check detects a corrupted kernel") {
  const auto result = quadrature::check_flux_kernel(
      2024, 50, [](const InterfaceData& d, double g) {
        auto f = kinetic::interface_flux(d, g);
        f.minus.momentum *= 1.0 + 1e-5;
        f.plus.mass += 1e-5 * (d.left.area + d.right.area + 1.0);
        return f;
      });
  CHECK(result.max_rel_error > 1e-9);
}

TEST_CASE("flux check with zero instances passes vacuously") {
  const auto result = quadrature::check_flux_kernel(
      1, 0, [](const InterfaceData& d, double g) { return kinetic::interface_flux(d, g); });
  CHECK(result.count == 0);
  CHECK(result.max_rel_error == 0.0);
}
