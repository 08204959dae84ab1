#include "firstint/solvers.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "firstint/linalg.hpp"

namespace firstint {

SolveReport fixed_point_solve(const VecMap& map, Vec x0,
                              const SolverConfig& config) {
  SolveReport report;
  Vec x = std::move(x0);
  for (int it = 1; it <= config.max_iterations; ++it) {
    Vec next = map(x);
    if (next.size() != x.size())
      throw DimensionMismatch("fixed_point_solve: map changed length");
    if (!all_finite(next))
      throw SolverDiverged("fixed point iterate is non-finite", it,
                           std::numeric_limits<double>::quiet_NaN());
    const double update = inf_norm(sub(next, x));
    x = std::move(next);
    report.iterations = it;
    report.final_residual = update;
    if (update <= config.tolerance) {
      report.converged = true;
      break;
    }
  }
  report.solution = std::move(x);
  return report;
}

SolveReport newton_solve(const VecMap& residual, Vec x0,
                         const SolverConfig& config) {
  SolveReport report;
  Vec x = std::move(x0);
  const std::size_t n = x.size();
  Vec r = residual(x);
  if (r.size() != n) throw DimensionMismatch("newton_solve: residual length");
  if (!all_finite(r))
    throw SolverDiverged("newton residual is non-finite at start", 0,
                         std::numeric_limits<double>::quiet_NaN());
  report.final_residual = inf_norm(r);
  report.converged = report.final_residual <= config.tolerance;

  while (!report.converged && report.iterations < config.max_iterations) {
    DenseMatrix jac(n, n);
    for (std::size_t k = 0; k < n; ++k) {
      Vec xp = x;
      xp[k] += config.fd_epsilon * (1.0 + std::abs(x[k]));
      const double step = xp[k] - x[k];  // realized step, exact divisor
      const Vec rp = residual(xp);
      for (std::size_t i = 0; i < n; ++i) jac(i, k) = (rp[i] - r[i]) / step;
    }
    Vec neg_r(n);
    for (std::size_t i = 0; i < n; ++i) neg_r[i] = -r[i];
    const Vec delta = solve_square(jac, neg_r);
    for (std::size_t i = 0; i < n; ++i) x[i] += delta[i];
    ++report.iterations;

    r = residual(x);
    if (!all_finite(r) || !all_finite(x))
      throw SolverDiverged("newton iterate is non-finite", report.iterations,
                           std::numeric_limits<double>::quiet_NaN());
    report.final_residual = inf_norm(r);
    report.converged = report.final_residual <= config.tolerance;
  }
  report.solution = std::move(x);
  return report;
}

SolveReport solve_implicit(const VecMap& map, Vec x0,
                           const SolverConfig& config) {
  if (config.strategy == SolveStrategy::FixedPoint)
    return fixed_point_solve(map, std::move(x0), config);
  const auto res = [&map](const Vec& x) { return sub(x, map(x)); };
  return newton_solve(res, std::move(x0), config);
}

}  // namespace firstint
