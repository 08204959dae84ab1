#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "firstint/discrete_gradient.hpp"
#include "firstint/problems.hpp"
#include "oracles.hpp"

using namespace firstint;

namespace {

const std::vector<DiscreteGradientKind> exact_kinds = {
    {DgVariant::ItohAbe, 4},
    {DgVariant::ItohAbeSymmetrized, 4},
    {DgVariant::GonzalezMidpoint, 4},
};

FirstIntegral half_norm2() {
  FirstIntegral f;
  f.value = [](const StateVector& x) {
    return 0.5 * dot(x.entries(), x.entries());
  };
  f.gradient = [](const StateVector& x) { return x; };
  return f;
}

}  // namespace

TEST_CASE("every construction reduces to the average for a quadratic") {
  const FirstIntegral quad = half_norm2();
  const StateVector x{1.0, 0.0}, xp{0.0, 1.0};
  for (DgVariant variant :
       {DgVariant::ItohAbe, DgVariant::ItohAbeSymmetrized,
        DgVariant::MeanValueAvf, DgVariant::GonzalezMidpoint}) {
    const StateVector g =
        discrete_gradient({variant, 2}, quad, x, xp);
    CHECK(g[0] == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(g[1] == doctest::Approx(0.5).epsilon(1e-13));
  }
}

TEST_CASE("consistency: i-bar(x, x) equals the analytic gradient") {
  const OdeSystem kepler = kepler_system();
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const StateVector x = oracles::random_kepler_state(rng, 0.3);
    for (const auto& integral : kepler.integrals) {
      const StateVector g = integral.gradient(x);
      for (DgVariant variant :
           {DgVariant::ItohAbe, DgVariant::ItohAbeSymmetrized,
            DgVariant::MeanValueAvf, DgVariant::GonzalezMidpoint}) {
        const StateVector dg = discrete_gradient({variant, 4}, integral, x, x);
        CHECK(inf_norm(sub(dg.entries(), g.entries())) <= 1e-12);
      }
    }
  }
}

TEST_CASE("Itoh-Abe components on the angular momentum example") {
  const OdeSystem kepler = kepler_system();
  const StateVector x{0.4, 0.0, 0.0, 2.0};
  const StateVector xp{0.5, 0.1, -0.1, 1.9};
  const StateVector g =
      discrete_gradient({DgVariant::ItohAbe, 4}, kepler.integrals[1], x, xp);
  // Telescoping quotients evaluated by hand for I2 = x1 x4 - x2 x3.
  CHECK(g[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(g[1] == doctest::Approx(0.0));
  CHECK(g[2] == doctest::Approx(-0.1).epsilon(1e-13));
  CHECK(g[3] == doctest::Approx(0.5).epsilon(1e-13));
  const double identity_gap =
      dot(g.entries(), sub(xp.entries(), x.entries())) - 0.16;
  CHECK(std::abs(identity_gap) <= 1e-15);
}

TEST_CASE("defining identity holds to roundoff for the exact kinds") {
  const OdeSystem kepler = kepler_system();
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    const StateVector x = oracles::random_kepler_state(rng, 0.3);
    const StateVector xp = oracles::random_kepler_state(rng, 0.3);
    for (const auto& integral : kepler.integrals) {
      const double scale = 1.0 + std::abs(integral.value(x));
      for (const auto& kind : exact_kinds)
        CHECK(verify_discrete_gradient(kind, integral, x, xp) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("identity residual vanishes at x = xp") {
  const OdeSystem kepler = kepler_system();
  const StateVector x{0.7, 0.2, -0.4, 1.1};
  for (const auto& kind : exact_kinds)
    CHECK(verify_discrete_gradient(kind, kepler.integrals[0], x, x) == 0.0);
  CHECK(verify_discrete_gradient({DgVariant::MeanValueAvf, 4},
                                 kepler.integrals[0], x, x) == 0.0);
}

TEST_CASE("two-node AVF is exact for a quadratic integral") {
  const FirstIntegral quad = half_norm2();
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 100; ++trial) {
    const StateVector x{oracles::uniform(rng, -2, 2), oracles::uniform(rng, -2, 2)};
    const StateVector xp{oracles::uniform(rng, -2, 2), oracles::uniform(rng, -2, 2)};
    CHECK(verify_discrete_gradient({DgVariant::MeanValueAvf, 2}, quad, x, xp) <=
          1e-14);
  }
}

TEST_CASE("four-node AVF residual on nearby Kepler pairs stays below 1e-8") {
  const OdeSystem kepler = kepler_system();
  std::mt19937_64 rng(2718);
  for (int trial = 0; trial < 500; ++trial) {
    const StateVector x = oracles::random_kepler_state(rng, 0.3);
    const StateVector xp = oracles::nearby_kepler_state(rng, x, 0.3, 0.05);
    for (const auto& integral : kepler.integrals)
      CHECK(verify_discrete_gradient({DgVariant::MeanValueAvf, 4}, integral, x,
                                     xp) <= 1e-8);
  }
}

TEST_CASE("symmetry: symmetrized kinds are exchange-invariant, plain Itoh-Abe is not") {
  const OdeSystem kepler = kepler_system();
  std::mt19937_64 rng(31);
  double worst_asymmetry = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const StateVector x = oracles::random_kepler_state(rng, 0.3);
    const StateVector xp = oracles::random_kepler_state(rng, 0.3);
    for (const auto& integral : kepler.integrals) {
      for (DgVariant variant :
           {DgVariant::ItohAbeSymmetrized, DgVariant::GonzalezMidpoint}) {
        const StateVector fwd = discrete_gradient({variant, 4}, integral, x, xp);
        const StateVector bwd = discrete_gradient({variant, 4}, integral, xp, x);
        CHECK(inf_norm(sub(fwd.entries(), bwd.entries())) <= 1e-13);
      }
      const StateVector fwd =
          discrete_gradient({DgVariant::ItohAbe, 4}, integral, x, xp);
      const StateVector bwd =
          discrete_gradient({DgVariant::ItohAbe, 4}, integral, xp, x);
      worst_asymmetry =
          std::max(worst_asymmetry, inf_norm(sub(fwd.entries(), bwd.entries())));
    }
  }
  CHECK(worst_asymmetry > 1e-13);
}

TEST_CASE("continuity near the diagonal: deviation shrinks like eps") {
  const OdeSystem kepler = kepler_system();
  const StateVector x{0.8, 0.3, -0.2, 1.4};
  const Vec u = {0.5, -0.25, 0.7, 0.45};
  for (DgVariant variant :
       {DgVariant::ItohAbe, DgVariant::ItohAbeSymmetrized,
        DgVariant::MeanValueAvf, DgVariant::GonzalezMidpoint}) {
    for (const auto& integral : kepler.integrals) {
      const Vec g = integral.gradient(x).entries();
      Vec dev;
      for (double eps : {1e-3, 1e-6}) {
        const StateVector xp(add_scaled(x.entries(), eps, u));
        const StateVector db = discrete_gradient({variant, 4}, integral, x, xp);
        dev.push_back(inf_norm(sub(db.entries(), g)));
      }
      CHECK(dev[0] <= 1e-1);
      // O(eps): three decades of eps shrink the deviation by roughly 1e3.
      CHECK(dev[1] <= 1e-2 * dev[0] + 1e-11);
    }
  }
}

TEST_CASE("Gauss-Legendre nodes integrate polynomials exactly") {
  for (int n : {1, 2, 3, 4, 5, 8}) {
    const auto [s, w] = gauss_legendre_unit(n);
    REQUIRE(static_cast<int>(s.size()) == n);
    // integral of t^k over [0,1] = 1/(k+1), exact up to degree 2n-1
    for (int k = 0; k < 2 * n; ++k) {
      double q = 0.0;
      for (int i = 0; i < n; ++i) q += w[i] * std::pow(s[i], k);
      CHECK(q == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
    }
  }
}
