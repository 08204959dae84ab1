#pragma once

#include "firstint/core.hpp"

namespace firstint {

struct KeplerParams {
  double eccentricity = 0.6;  // in [0, 1)
};

/// Kepler two-body problem in cartesian coordinates, d = 4:
///   f = (x3, x4, -x1/r^3, -x2/r^3),  r = sqrt(x1^2 + x2^2).
/// Ships four first integrals: energy, angular momentum, and the two
/// Runge-Lenz components.  Evaluations with r < 1e-10 raise SingularityError.
OdeSystem kepler_system();

/// (1-e, 0, 0, sqrt((1+e)/(1-e))); the orbit then has period 2*pi.
StateVector kepler_initial(const KeplerParams& params);

/// d = 2, f(q, p) = (p, -q), one quadratic integral I = (q^2 + p^2)/2.
OdeSystem harmonic_oscillator();

}  // namespace firstint
