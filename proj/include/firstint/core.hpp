#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <utility>
#include <vector>

#include "firstint/errors.hpp"
#include "firstint/vecops.hpp"

namespace firstint {

/// A point in R^d.  Entries are validated to be finite at construction;
/// the dimension is fixed for the lifetime of the value.
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(Vec entries) : e_(std::move(entries)) { validate(); }
  StateVector(std::initializer_list<double> entries) : e_(entries) { validate(); }

  std::size_t size() const { return e_.size(); }
  double operator[](std::size_t i) const { return e_[i]; }
  double& operator[](std::size_t i) { return e_[i]; }
  const Vec& entries() const { return e_; }

  auto begin() const { return e_.begin(); }
  auto end() const { return e_.end(); }

  bool operator==(const StateVector& o) const = default;

 private:
  void validate() const {
    if (!all_finite(e_))
      throw Error("StateVector: non-finite entry at construction");
  }

  Vec e_;
};

/// A conserved scalar I with its analytic gradient i = grad I.
struct FirstIntegral {
  std::function<double(const StateVector&)> value;
  std::function<StateVector(const StateVector&)> gradient;
};

/// Autonomous ODE x' = f(x) together with its known first integrals.
/// The integral order is stable; index m is meaningful to callers.
struct OdeSystem {
  std::size_t dimension = 0;
  std::function<StateVector(const StateVector&)> vector_field;
  std::vector<FirstIntegral> integrals;

  std::size_t num_integrals() const { return integrals.size(); }
};

/// How implicit per-step equations are driven to convergence.
enum class SolveStrategy { FixedPoint, NewtonFiniteDifference };

struct SolverConfig {
  double tolerance = 1e-14;
  int max_iterations = 50;
  SolveStrategy strategy = SolveStrategy::NewtonFiniteDifference;
  double fd_epsilon = 1e-7;  // forward-difference Jacobian step scale
};

/// [I_1(x), ..., I_M(x)] in integral order.
std::vector<double> evaluate_integrals(const OdeSystem& system,
                                       const StateVector& x);

/// Max-norm deviation between the analytic gradient and central finite
/// differences of the value with step eps.  The caller asserts on the result.
double check_gradient(const FirstIntegral& integral, const StateVector& x,
                      double eps);

}  // namespace firstint
