#pragma once

#include <functional>
#include <vector>

#include "firstint/core.hpp"
#include "firstint/solvers.hpp"

namespace firstint {

/// Runge-Kutta coefficients.  Consistency (sum b = 1) is checked at
/// construction; explicit tableaux must be strictly lower triangular.
struct ButcherTableau {
  std::size_t stages = 0;
  std::vector<Vec> a;  // stages x stages
  Vec b;               // stage weights
  bool is_explicit = true;

  ButcherTableau() = default;
  ButcherTableau(std::vector<Vec> a_in, Vec b_in, bool explicit_in);
};

enum class MethodKind { ExplicitRk, ImplicitMidpoint, ExplicitEuler };

/// The underlying (non-preserving) method x -> y that defines ftilde.
struct OneStepMethod {
  MethodKind kind = MethodKind::ExplicitRk;
  ButcherTableau tableau;  // unused for ImplicitMidpoint
  int order = 1;           // nominal order p
};

/// The classical 4-stage explicit tableau of order 4.
ButcherTableau rk4_tableau();
/// The 7-stage explicit tableau of order 6.
ButcherTableau rk6_tableau();

OneStepMethod rk4_method();
OneStepMethod rk6_method();
OneStepMethod explicit_euler_method();
OneStepMethod implicit_midpoint_method();

using VectorField = std::function<StateVector(const StateVector&)>;

/// One step y = x + h * increment.  Explicit kinds evaluate the stages
/// directly; ImplicitMidpoint solves the stage equation with `solver`
/// and raises SolverDiverged on non-convergence.
StateVector rk_step(const OneStepMethod& method, const VectorField& f,
                    const StateVector& x, double h, const SolverConfig& solver);

/// The increment function of the predictor step: (Phi_h(x) - x)/h evaluated
/// without dividing by h, so it is well defined at h = 0.
Vec rk_increment(const OneStepMethod& method, const VectorField& f,
                 const StateVector& x, double h, const SolverConfig& solver);

}  // namespace firstint
