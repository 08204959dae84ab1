#include "firstint/discrete_gradient.hpp"

#include <cmath>
#include <numbers>

namespace firstint {

namespace {

/// Coordinate-increment gradient: component k is the telescoping quotient
///   ( I(xp_1..xp_k, x_{k+1}..x_d) - I(xp_1..xp_{k-1}, x_k..x_d) ) / (xp_k - x_k).
/// A vanishing increment falls back to the analytic partial at the mixed
/// point, which is the limit value of the quotient.
Vec itoh_abe(const FirstIntegral& integral, const Vec& x, const Vec& xp) {
  const std::size_t d = x.size();
  Vec out(d);
  Vec mixed = x;  // starts at x, becomes xp coordinate by coordinate
  double below = integral.value(StateVector(mixed));
  for (std::size_t k = 0; k < d; ++k) {
    const double dk = xp[k] - x[k];
    if (std::abs(dk) < 1e-12 * (1.0 + std::abs(x[k]))) {
      out[k] = integral.gradient(StateVector(mixed))[k];
      mixed[k] = xp[k];
      below = integral.value(StateVector(mixed));
    } else {
      mixed[k] = xp[k];
      const double above = integral.value(StateVector(mixed));
      out[k] = (above - below) / dk;
      below = above;
    }
  }
  return out;
}

Vec mean_value_avf(const FirstIntegral& integral, const Vec& x, const Vec& xp,
                   int nodes) {
  const auto [s, w] = gauss_legendre_unit(nodes);
  Vec out(x.size(), 0.0);
  for (int q = 0; q < nodes; ++q) {
    Vec p(x.size());
    for (std::size_t i = 0; i < p.size(); ++i)
      p[i] = (1.0 - s[q]) * x[i] + s[q] * xp[i];
    axpy(out, w[q], integral.gradient(StateVector(p)).entries());
  }
  return out;
}

Vec gonzalez_midpoint(const FirstIntegral& integral, const Vec& x,
                      const Vec& xp) {
  const Vec delta = sub(xp, x);
  const double d2 = dot(delta, delta);
  Vec mid(x.size());
  for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (x[i] + xp[i]);
  Vec g = integral.gradient(StateVector(mid)).entries();
  if (d2 == 0.0) return g;
  const double gap = integral.value(StateVector(xp)) -
                     integral.value(StateVector(x)) - dot(g, delta);
  axpy(g, gap / d2, delta);
  return g;
}

}  // namespace

StateVector discrete_gradient(const DiscreteGradientKind& kind,
                              const FirstIntegral& integral,
                              const StateVector& x, const StateVector& xp) {
  require_same_size(x.entries(), xp.entries(), "discrete_gradient");
  switch (kind.variant) {
    case DgVariant::ItohAbe:
      return StateVector(itoh_abe(integral, x.entries(), xp.entries()));
    case DgVariant::ItohAbeSymmetrized: {
      Vec fwd = itoh_abe(integral, x.entries(), xp.entries());
      const Vec bwd = itoh_abe(integral, xp.entries(), x.entries());
      for (std::size_t i = 0; i < fwd.size(); ++i)
        fwd[i] = 0.5 * (fwd[i] + bwd[i]);
      return StateVector(fwd);
    }
    case DgVariant::MeanValueAvf:
      if (kind.quadrature_nodes < 1)
        throw Error("MeanValueAvf: need at least one quadrature node");
      return StateVector(mean_value_avf(integral, x.entries(), xp.entries(),
                                        kind.quadrature_nodes));
    case DgVariant::GonzalezMidpoint:
      return StateVector(gonzalez_midpoint(integral, x.entries(), xp.entries()));
  }
  throw Error("discrete_gradient: unknown variant");
}

double verify_discrete_gradient(const DiscreteGradientKind& kind,
                                const FirstIntegral& integral,
                                const StateVector& x, const StateVector& xp) {
  const StateVector g = discrete_gradient(kind, integral, x, xp);
  const double lhs = dot(g.entries(), sub(xp.entries(), x.entries()));
  return std::abs(lhs - (integral.value(xp) - integral.value(x)));
}

std::pair<Vec, Vec> gauss_legendre_unit(int nodes) {
  if (nodes < 1) throw Error("gauss_legendre_unit: nodes must be >= 1");
  const int n = nodes;
  Vec x(n), w(n);
  for (int k = 0; k < n; ++k) {
    // Newton on P_n from the Chebyshev-like initial guess.
    double t = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / pp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[k] = 0.5 * (1.0 - t);  // map [-1,1] -> [0,1], reversing for ascending order
    w[k] = 1.0 / ((1.0 - t * t) * pp * pp);
  }
  return {x, w};
}

}  // namespace firstint
