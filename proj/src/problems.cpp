#include "firstint/problems.hpp"

#include <cmath>

namespace firstint {

namespace {

double kepler_r(const StateVector& x) {
  const double r = std::hypot(x[0], x[1]);
  if (r < 1e-10)
    throw SingularityError("kepler: evaluation at r < 1e-10");
  return r;
}

}  // namespace

OdeSystem kepler_system() {
  OdeSystem sys;
  sys.dimension = 4;
  sys.vector_field = [](const StateVector& x) {
    const double r = kepler_r(x);
    const double r3 = r * r * r;
    return StateVector{x[2], x[3], -x[0] / r3, -x[1] / r3};
  };

  FirstIntegral energy;
  energy.value = [](const StateVector& x) {
    return 0.5 * (x[2] * x[2] + x[3] * x[3]) - 1.0 / kepler_r(x);
  };
  energy.gradient = [](const StateVector& x) {
    const double r = kepler_r(x);
    const double r3 = r * r * r;
    return StateVector{x[0] / r3, x[1] / r3, x[2], x[3]};
  };

  // Angular momentum x1*x4 - x2*x3.
  FirstIntegral angular;
  angular.value = [](const StateVector& x) {
    return x[0] * x[3] - x[1] * x[2];
  };
  angular.gradient = [](const StateVector& x) {
    return StateVector{x[3], -x[2], -x[1], x[0]};
  };

  FirstIntegral lenz1;
  lenz1.value = [](const StateVector& x) {
    return x[1] * x[2] * x[2] - x[0] * x[2] * x[3] - x[1] / kepler_r(x);
  };
  lenz1.gradient = [](const StateVector& x) {
    const double r = kepler_r(x);
    const double r3 = r * r * r;
    return StateVector{-x[2] * x[3] + x[0] * x[1] / r3,
                       x[2] * x[2] - 1.0 / r + x[1] * x[1] / r3,
                       2.0 * x[1] * x[2] - x[0] * x[3],
                       -x[0] * x[2]};
  };

  FirstIntegral lenz2;
  lenz2.value = [](const StateVector& x) {
    return x[0] * x[3] * x[3] - x[1] * x[2] * x[3] - x[0] / kepler_r(x);
  };
  lenz2.gradient = [](const StateVector& x) {
    const double r = kepler_r(x);
    const double r3 = r * r * r;
    return StateVector{x[3] * x[3] - 1.0 / r + x[0] * x[0] / r3,
                       -x[2] * x[3] + x[0] * x[1] / r3,
                       -x[1] * x[3],
                       2.0 * x[0] * x[3] - x[1] * x[2]};
  };

  sys.integrals = {energy, angular, lenz1, lenz2};
  return sys;
}

StateVector kepler_initial(const KeplerParams& params) {
  const double e = params.eccentricity;
  if (!(e >= 0.0 && e < 1.0))
    throw Error("kepler_initial: eccentricity must lie in [0, 1)");
  return StateVector{1.0 - e, 0.0, 0.0, std::sqrt((1.0 + e) / (1.0 - e))};
}

OdeSystem harmonic_oscillator() {
  OdeSystem sys;
  sys.dimension = 2;
  sys.vector_field = [](const StateVector& x) {
    return StateVector{x[1], -x[0]};
  };
  FirstIntegral quad;
  quad.value = [](const StateVector& x) {
    return 0.5 * (x[0] * x[0] + x[1] * x[1]);
  };
  quad.gradient = [](const StateVector& x) { return StateVector{x[0], x[1]}; };
  sys.integrals = {quad};
  return sys;
}

}  // namespace firstint
