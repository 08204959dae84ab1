#pragma once

#include <vector>

#include "firstint/projection.hpp"

namespace firstint {

/// Discrete gradient integrator in skew form.  The i~_m follow the same
/// direction-rule machinery as projection methods; the i-bar_m are chosen
/// per integral.  These methods conserve against the current state (no
/// drift-correction targets).
struct DgMethodSpec {
  OneStepMethod underlying;
  std::vector<DirectionRule> directions;               // i~_m
  std::vector<DiscreteGradientKind> discrete_gradients;// i-bar_m
  FtildeKind ftilde = FtildeKind::PredictorIncrement;
  SolverConfig solver{};
};

/// Single integral, x' = x + h S~ i-bar; shares its code path with
/// single_integral_step_dg_form.
StepResult dg_step_single(const DgMethodSpec& spec, const OdeSystem& system,
                          const StateVector& x, double h);

/// Two integrals via the explicit rank-3 tensor contraction
///   (x'_l - x_l)/h = sum_{m,n} S~_{lmn} i-bar_m j-bar_n
/// with S~_{lmn} the normalized 3x3 determinant over (ftilde, i~, j~).
StepResult dg_step_two_integrals(const DgMethodSpec& spec,
                                 const OdeSystem& system, const StateVector& x,
                                 double h);

/// General M integrals via the Cramer reduction: the wedge contraction equals
/// ftilde - A (B^T A)^{-1} B^T ftilde, so the rank-(M+1) tensor is never
/// materialized.
StepResult dg_step_multi(const DgMethodSpec& spec, const OdeSystem& system,
                         const StateVector& x, double h);

/// Single-integral method with independently chosen denominator directions
/// i-hat . i-breve; the superclass that is not a projection method.
/// Conservation still follows from skew symmetry alone.
StepResult dg_step_general_single(const DgMethodSpec& spec,
                                  const OdeSystem& system,
                                  const DirectionRule& ihat,
                                  const DirectionRule& ibreve,
                                  const StateVector& x, double h);

/// Dense rank-(M+1) tensor S~ = (1/det(B^T A)) ftilde ^ i~^1 ^ ... ^ i~^M.
/// Debug/verification path only; restricted to d <= 6.
class SkewTensor {
 public:
  SkewTensor(std::size_t dim, std::size_t rank);

  std::size_t dim() const { return d_; }
  std::size_t rank() const { return rank_; }
  double at(const std::vector<std::size_t>& idx) const;
  double& at(const std::vector<std::size_t>& idx);

 private:
  std::size_t flat(const std::vector<std::size_t>& idx) const;
  std::size_t d_, rank_;
  Vec data_;
};

SkewTensor materialize_skew_tensor(const Vec& ftilde,
                                   const std::vector<Vec>& itildes,
                                   const std::vector<Vec>& ibars);

/// out_j = S~_{j j1..jM} ibar^1_{j1} ... ibar^M_{jM} by brute-force summation.
Vec contract_skew_tensor(const SkewTensor& tensor,
                         const std::vector<Vec>& ibars);

}  // namespace firstint
