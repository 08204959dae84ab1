#include "firstint/tableau.hpp"

#include <cmath>
#include <numeric>
#include <utility>

namespace firstint {

ButcherTableau::ButcherTableau(std::vector<Vec> a_in, Vec b_in, bool explicit_in)
    : stages(b_in.size()), a(std::move(a_in)), b(std::move(b_in)),
      is_explicit(explicit_in) {
  if (a.size() != stages) throw DimensionMismatch("ButcherTableau: a rows");
  for (const Vec& row : a)
    if (row.size() != stages) throw DimensionMismatch("ButcherTableau: a cols");
  const double bsum = std::accumulate(b.begin(), b.end(), 0.0);
  if (std::abs(bsum - 1.0) > 1e-14)
    throw Error("ButcherTableau: weights do not sum to 1");
  if (is_explicit)
    for (std::size_t i = 0; i < stages; ++i)
      for (std::size_t j = i; j < stages; ++j)
        if (a[i][j] != 0.0)
          throw Error("ButcherTableau: explicit tableau not strictly lower triangular");
}

ButcherTableau rk4_tableau() {
  std::vector<Vec> a(4, Vec(4, 0.0));
  a[1][0] = 0.5;
  a[2][1] = 0.5;
  a[3][2] = 1.0;
  return ButcherTableau(std::move(a), {1.0 / 6, 1.0 / 3, 1.0 / 3, 1.0 / 6}, true);
}

ButcherTableau rk6_tableau() {
  std::vector<Vec> a(7, Vec(7, 0.0));
  a[1] = {1.0 / 3, 0, 0, 0, 0, 0, 0};
  a[2] = {0, 2.0 / 3, 0, 0, 0, 0, 0};
  a[3] = {1.0 / 12, 1.0 / 3, -1.0 / 12, 0, 0, 0, 0};
  a[4] = {25.0 / 48, -55.0 / 24, 35.0 / 48, 15.0 / 8, 0, 0, 0};
  a[5] = {3.0 / 20, -11.0 / 24, -1.0 / 8, 1.0 / 2, 1.0 / 10, 0, 0};
  a[6] = {-261.0 / 260, 33.0 / 13, 43.0 / 156, -118.0 / 39, 32.0 / 195,
          80.0 / 39, 0};
  return ButcherTableau(std::move(a),
                        {13.0 / 200, 0, 11.0 / 40, 11.0 / 40, 4.0 / 25,
                         4.0 / 25, 13.0 / 200},
                        true);
}

OneStepMethod rk4_method() { return {MethodKind::ExplicitRk, rk4_tableau(), 4}; }
OneStepMethod rk6_method() { return {MethodKind::ExplicitRk, rk6_tableau(), 6}; }

OneStepMethod explicit_euler_method() {
  return {MethodKind::ExplicitEuler,
          ButcherTableau({{Vec{0.0}}}, Vec{1.0}, true), 1};
}

OneStepMethod implicit_midpoint_method() {
  return {MethodKind::ImplicitMidpoint, ButcherTableau(), 2};
}

namespace {

Vec explicit_increment(const ButcherTableau& tab, const VectorField& f,
                       const Vec& x, double h) {
  std::vector<Vec> k;
  k.reserve(tab.stages);
  for (std::size_t i = 0; i < tab.stages; ++i) {
    Vec xi = x;
    for (std::size_t j = 0; j < i; ++j)
      if (tab.a[i][j] != 0.0) axpy(xi, h * tab.a[i][j], k[j]);
    k.push_back(f(StateVector(xi)).entries());
  }
  Vec inc(x.size(), 0.0);
  for (std::size_t i = 0; i < tab.stages; ++i)
    if (tab.b[i] != 0.0) axpy(inc, tab.b[i], k[i]);
  return inc;
}

/// Midpoint stage value z solving z = x + (h/2) f(z).
Vec midpoint_stage(const VectorField& f, const Vec& x, double h,
                   const SolverConfig& solver) {
  const auto map = [&](const Vec& z) {
    return add_scaled(x, 0.5 * h, f(StateVector(z)).entries());
  };
  SolveReport report = solve_implicit(map, x, solver);
  if (!report.converged)
    throw SolverDiverged("implicit midpoint stage did not converge",
                         report.iterations, report.final_residual);
  return report.solution;
}

}  // namespace

Vec rk_increment(const OneStepMethod& method, const VectorField& f,
                 const StateVector& x, double h, const SolverConfig& solver) {
  switch (method.kind) {
    case MethodKind::ExplicitRk:
    case MethodKind::ExplicitEuler:
      return explicit_increment(method.tableau, f, x.entries(), h);
    case MethodKind::ImplicitMidpoint:
      return f(StateVector(midpoint_stage(f, x.entries(), h, solver))).entries();
  }
  throw Error("rk_increment: unknown method kind");
}

StateVector rk_step(const OneStepMethod& method, const VectorField& f,
                    const StateVector& x, double h, const SolverConfig& solver) {
  if (method.kind == MethodKind::ImplicitMidpoint) {
    // y = 2z - x with z the midpoint; keeps the step map exactly symmetric.
    const Vec z = midpoint_stage(f, x.entries(), h, solver);
    Vec y(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) y[i] = 2.0 * z[i] - x[i];
    return StateVector(y);
  }
  return StateVector(
      add_scaled(x.entries(), h, rk_increment(method, f, x, h, solver)));
}

}  // namespace firstint
