#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <random>

#include "firstint/core.hpp"
#include "firstint/problems.hpp"
#include "oracles.hpp"

using namespace firstint;

TEST_CASE("StateVector rejects non-finite entries") {
  CHECK_THROWS_AS(StateVector({1.0, std::nan("")}), Error);
  CHECK_THROWS_AS(StateVector({std::numeric_limits<double>::infinity()}), Error);
  const StateVector x{1.0, 2.0};
  CHECK(x.size() == 2);
  CHECK(x[1] == 2.0);
}

TEST_CASE("evaluate_integrals on the Kepler initial state") {
  const OdeSystem kepler = kepler_system();
  const StateVector x0 = kepler_initial({0.6});
  const auto vals = evaluate_integrals(kepler, x0);
  REQUIRE(vals.size() == 4);
  CHECK(vals[0] == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(vals[1] == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(vals[2] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(vals[3] == doctest::Approx(0.6).epsilon(1e-14));
}

TEST_CASE("evaluate_integrals edge cases") {
  OdeSystem none;
  none.dimension = 3;
  none.vector_field = [](const StateVector& x) { return x; };
  CHECK(evaluate_integrals(none, StateVector{1, 2, 3}).empty());
  CHECK_THROWS_AS(evaluate_integrals(none, StateVector{1, 2}),
                  DimensionMismatch);

  const OdeSystem osc = harmonic_oscillator();
  const auto vals = evaluate_integrals(osc, StateVector{1.0, 0.0});
  REQUIRE(vals.size() == 1);
  CHECK(vals[0] == 0.5);
}

TEST_CASE("evaluate_integrals is pure (bit-identical reruns)") {
  const OdeSystem kepler = kepler_system();
  const StateVector x{0.7, -0.3, 1.1, 0.4};
  const auto a = evaluate_integrals(kepler, x);
  const auto b = evaluate_integrals(kepler, x);
  CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

TEST_CASE("check_gradient on a quadratic is exact to roundoff") {
  FirstIntegral half_norm2;
  half_norm2.value = [](const StateVector& x) {
    return 0.5 * dot(x.entries(), x.entries());
  };
  half_norm2.gradient = [](const StateVector& x) { return x; };
  CHECK(check_gradient(half_norm2, StateVector{1, 2, 3}, 1e-6) <= 1e-8);
}

TEST_CASE("check_gradient matches an independent FD oracle on Kepler") {
  const OdeSystem kepler = kepler_system();
  const StateVector x0 = kepler_initial({0.6});
  CHECK(check_gradient(kepler.integrals[0], x0, 1e-6) <= 1e-6);

  const StateVector x{1.0, 0.5, 0.2, -0.3};
  CHECK(check_gradient(kepler.integrals[2], x, 1e-6) <= 1e-6);

  // Cross-check the reported deviation itself against the oracle.
  const Vec fd = oracles::fd_gradient(kepler.integrals[2], x, 1e-6);
  const StateVector g = kepler.integrals[2].gradient(x);
  double dev = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    dev = std::max(dev, std::abs(fd[i] - g[i]));
  CHECK(check_gradient(kepler.integrals[2], x, 1e-6) ==
        doctest::Approx(dev).epsilon(1e-10));
}

TEST_CASE("all Kepler gradients pass check_gradient on random states") {
  const OdeSystem kepler = kepler_system();
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const StateVector x = oracles::random_kepler_state(rng, 0.1);
    for (const auto& integral : kepler.integrals)
      CHECK(check_gradient(integral, x, 1e-6) <= 1e-5);
  }
}

TEST_CASE("check_gradient rejects nonpositive eps") {
  const OdeSystem osc = harmonic_oscillator();
  CHECK_THROWS_AS(check_gradient(osc.integrals[0], StateVector{1.0, 0.0}, 0.0),
                  Error);
}
