#include "firstint/core.hpp"

#include <cmath>

namespace firstint {

std::vector<double> evaluate_integrals(const OdeSystem& system,
                                       const StateVector& x) {
  if (x.size() != system.dimension)
    throw DimensionMismatch("evaluate_integrals: state dimension " +
                            std::to_string(x.size()) + " != system dimension " +
                            std::to_string(system.dimension));
  std::vector<double> out;
  out.reserve(system.integrals.size());
  for (const auto& integral : system.integrals) out.push_back(integral.value(x));
  return out;
}

double check_gradient(const FirstIntegral& integral, const StateVector& x,
                      double eps) {
  if (eps <= 0.0) throw Error("check_gradient: eps must be positive");
  const StateVector g = integral.gradient(x);
  double worst = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    Vec hi = x.entries(), lo = x.entries();
    hi[k] += eps;
    lo[k] -= eps;
    const double fd = (integral.value(StateVector(hi)) -
                       integral.value(StateVector(lo))) /
                      (2.0 * eps);
    worst = std::max(worst, std::abs(fd - g[k]));
  }
  return worst;
}

}  // namespace firstint
