#pragma once

#include <functional>

#include "firstint/core.hpp"
#include "firstint/vecops.hpp"

namespace firstint {

struct SolveReport {
  Vec solution;
  int iterations = 0;
  double final_residual = 0.0;  // inf-norm
  bool converged = false;
};

using VecMap = std::function<Vec(const Vec&)>;

/// Banach iteration x_{n+1} = map(x_n); converged when the update inf-norm
/// drops to config.tolerance.  Non-finite iterates raise SolverDiverged.
SolveReport fixed_point_solve(const VecMap& map, Vec x0,
                              const SolverConfig& config);

/// Undamped Newton with a forward-difference Jacobian
/// (column step fd_epsilon * (1 + |x_k|)); converged when the residual
/// inf-norm drops to config.tolerance.
SolveReport newton_solve(const VecMap& residual, Vec x0,
                         const SolverConfig& config);

/// Dispatch on config.strategy.  `map` must be the fixed-point form
/// x = map(x); the Newton residual is x - map(x).
SolveReport solve_implicit(const VecMap& map, Vec x0, const SolverConfig& config);

}  // namespace firstint
