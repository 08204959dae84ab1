#pragma once

#include <vector>

#include "firstint/core.hpp"
#include "firstint/discrete_gradient.hpp"
#include "firstint/solvers.hpp"
#include "firstint/tableau.hpp"

namespace firstint {

/// How the projection direction i~_m(x, x', h) is evaluated.
enum class DirectionKind {
  AtNew,                 // i_m(x')
  AtOld,                 // i_m(x)
  AtPredictor,           // i_m(y), y the underlying predictor, frozen per step
  Midpoint,              // (i_m(x) + i_m(x')) / 2
  FromDiscreteGradient,  // i-bar_m(x, x')
};

struct DirectionRule {
  DirectionKind kind = DirectionKind::AtOld;
  DiscreteGradientKind dg{};  // FromDiscreteGradient only
};

/// Whether ftilde is the frozen predictor increment g~(x, Phi_h(x), h) or the
/// coupled increment g~(x, x', h) re-evaluated with the current unknown.
/// The two coincide for explicit underlying methods.
enum class FtildeKind { PredictorIncrement, CoupledIncrement };

enum class Formulation {
  LambdaForm,            // joint solve for (x', lambda)
  ProjectorForm,         // x' = x + h P ftilde, lambda eliminated via B
  DiscreteGradientForm,  // single integral skew form x' = x + h S~ i-bar
  SymmetricForm,         // perturbed-endpoint symmetric projection
};

enum class ConserveAgainst { InitialValue, PreviousStep };

/// Full integrator description for one projection method.
struct MethodSpec {
  OneStepMethod underlying;
  std::vector<DirectionRule> directions;  // one per preserved integral
  Formulation formulation = Formulation::LambdaForm;
  /// Discrete gradient used to eliminate lambda in ProjectorForm /
  /// DiscreteGradientForm and in every fixed-point iteration.  The computed
  /// step is independent of this choice up to solver tolerance.
  DiscreteGradientKind formulation_dg{};
  FtildeKind ftilde = FtildeKind::PredictorIncrement;
  ConserveAgainst conserve_against = ConserveAgainst::InitialValue;
  SolverConfig solver{};
};

struct StepResult {
  StateVector x_new;
  Vec lambda;
  SolveReport solver_report;
  /// Set when every direction column vanished and the underlying step was
  /// returned unprojected.
  bool degenerate_directions = false;
};

/// One projection step x -> x' hitting I_m(x') = targets[m] for every m.
/// `targets` are the conserved values to restore (I_m(x0) or I_m(x) depending
/// on the drift-correction policy; the caller supplies them).
StepResult projection_step(const MethodSpec& spec, const OdeSystem& system,
                           const StateVector& x, double h, const Vec& targets);

/// Single-integral discrete gradient form x' = x + h S~(x,x',h) i-bar(x,x')
/// with S~ = (ftilde i~^T - i~ ftilde^T) / (i~ . i-bar).  Conserves against
/// the current state.  Equivalent to projection_step by construction.
StepResult single_integral_step_dg_form(const MethodSpec& spec,
                                        const OdeSystem& system,
                                        const StateVector& x, double h,
                                        const DiscreteGradientKind& dg);

enum class StandardProjectionVersion { V1_AtNew, V2_AtPredictor };

/// The classical (non-symmetric) standard projection method: frozen predictor
/// ftilde with directions at the new point (V1) or at the predictor (V2).
MethodSpec make_standard_projection(const OneStepMethod& underlying,
                                    StandardProjectionVersion version,
                                    std::size_t num_integrals);

/// Symmetric projection around a symmetric underlying method (implicit
/// midpoint); solves the coupled perturbed-endpoint system.
MethodSpec make_symmetric_projection(const OneStepMethod& symmetric_underlying,
                                     std::size_t num_integrals);

enum class DahlbyVariant {
  PredictorDifference,  // x' = x + P (Phi_h(x) - x)
  ProjectedRHS,         // x' = x + h P g~(x, x', h)
};

/// Orthogonal-projection methods: directions and elimination both use the
/// same discrete gradient, so A = B and P is the orthogonal projector onto
/// span{i-bar_m}^perp.
MethodSpec make_dahlby(DahlbyVariant variant, const OneStepMethod& underlying,
                       const DiscreteGradientKind& dg, std::size_t num_integrals);

}  // namespace firstint
