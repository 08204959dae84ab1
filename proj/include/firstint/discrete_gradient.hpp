#pragma once

#include <utility>
#include <vector>

#include "firstint/core.hpp"

namespace firstint {

enum class DgVariant {
  ItohAbe,            // coordinate increment, components in index order
  ItohAbeSymmetrized, // (itoh_abe(x,x') + itoh_abe(x',x)) / 2
  MeanValueAvf,       // Gauss-Legendre quadrature of grad I along the segment
  GonzalezMidpoint,   // midpoint gradient plus defining-identity correction
};

struct DiscreteGradientKind {
  DgVariant variant = DgVariant::GonzalezMidpoint;
  int quadrature_nodes = 4;  // MeanValueAvf only
};

/// A two-point gradient i-bar(x, x') satisfying
///   i-bar(x,x') . (x' - x) = I(x') - I(x)   and   i-bar(x,x) = grad I(x).
/// For MeanValueAvf the identity holds up to quadrature error (exactly when
/// grad I is polynomial of degree <= 2*nodes - 1 along the segment).
StateVector discrete_gradient(const DiscreteGradientKind& kind,
                              const FirstIntegral& integral,
                              const StateVector& x, const StateVector& xp);

/// |i-bar(x,xp).(xp-x) - (I(xp)-I(x))|, the defining-identity residual.
double verify_discrete_gradient(const DiscreteGradientKind& kind,
                                const FirstIntegral& integral,
                                const StateVector& x, const StateVector& xp);

/// Gauss-Legendre nodes and weights on [0, 1].
std::pair<Vec, Vec> gauss_legendre_unit(int nodes);

}  // namespace firstint
