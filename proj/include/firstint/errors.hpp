#pragma once

#include <stdexcept>
#include <string>

namespace firstint {

/// Base class for all failures raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Mismatched vector/matrix dimensions in an API call.
struct DimensionMismatch : Error {
  using Error::Error;
};

/// LU elimination met a pivot that is zero to working precision.
struct SingularMatrix : Error {
  double pivot_magnitude;
  explicit SingularMatrix(double pivot)
      : Error("singular matrix: pivot magnitude " + std::to_string(pivot)),
        pivot_magnitude(pivot) {}
};

/// The projection subspaces are not complementary (B^T A not invertible).
struct ComplementarityFailure : Error {
  using Error::Error;
  ComplementarityFailure() : Error("B^T A is singular to working precision") {}
};

/// An implicit per-step solve failed to converge or produced non-finite values.
struct SolverDiverged : Error {
  int iterations;
  double last_residual;
  long step_index;  // -1 unless raised while running a trajectory

  SolverDiverged(const std::string& what, int iters, double residual,
                 long step = -1)
      : Error(what), iterations(iters), last_residual(residual),
        step_index(step) {}
};

/// A skew-form denominator (e.g. i~ . i-bar) vanished to working precision.
struct DegenerateDenominator : Error {
  using Error::Error;
  DegenerateDenominator() : Error("skew-form denominator is numerically zero") {}
};

/// A vector field or integral was evaluated at a singular configuration.
struct SingularityError : Error {
  using Error::Error;
};

}  // namespace firstint
