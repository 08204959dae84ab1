#include "firstint/projection.hpp"

#include <cmath>
#include <utility>

#include "firstint/linalg.hpp"

namespace firstint {

namespace {

struct StepContext {
  const MethodSpec& spec;
  const OdeSystem& system;
  const Vec& x;
  double h;
  const Vec& targets;
  Vec ftilde_pred;         // frozen predictor increment
  Vec y;                   // predictor state x + h * ftilde_pred
  std::vector<Vec> grad_x; // i_m(x)
  std::vector<Vec> grad_y; // i_m(y)
  Vec i_at_x;              // I_m(x)
};

StepContext make_context(const MethodSpec& spec, const OdeSystem& system,
                         const StateVector& x, double h, const Vec& targets) {
  const std::size_t m = system.integrals.size();
  if (spec.directions.size() != m && spec.formulation != Formulation::SymmetricForm)
    throw DimensionMismatch("projection_step: directions count != integrals count");
  if (targets.size() != m)
    throw DimensionMismatch("projection_step: targets count != integrals count");
  if (x.size() != system.dimension)
    throw DimensionMismatch("projection_step: state dimension");

  StepContext ctx{spec, system, x.entries(), h, targets, {}, {}, {}, {}, {}};
  ctx.ftilde_pred =
      rk_increment(spec.underlying, system.vector_field, x, h, spec.solver);
  ctx.y = add_scaled(x.entries(), h, ctx.ftilde_pred);
  ctx.grad_x.reserve(m);
  ctx.grad_y.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    ctx.grad_x.push_back(system.integrals[i].gradient(x).entries());
    ctx.grad_y.push_back(
        system.integrals[i].gradient(StateVector(ctx.y)).entries());
    ctx.i_at_x.push_back(system.integrals[i].value(x));
  }
  return ctx;
}

Vec direction_column(const StepContext& ctx, std::size_t m, const Vec& xp) {
  const DirectionRule& rule = ctx.spec.directions[m];
  switch (rule.kind) {
    case DirectionKind::AtOld:
      return ctx.grad_x[m];
    case DirectionKind::AtPredictor:
      return ctx.grad_y[m];
    case DirectionKind::AtNew:
      return ctx.system.integrals[m].gradient(StateVector(xp)).entries();
    case DirectionKind::Midpoint: {
      Vec g = ctx.system.integrals[m].gradient(StateVector(xp)).entries();
      for (std::size_t i = 0; i < g.size(); ++i)
        g[i] = 0.5 * (g[i] + ctx.grad_x[m][i]);
      return g;
    }
    case DirectionKind::FromDiscreteGradient:
      return discrete_gradient(rule.dg, ctx.system.integrals[m],
                               StateVector(ctx.x), StateVector(xp))
          .entries();
  }
  throw Error("direction_column: unknown kind");
}

DenseMatrix build_directions(const StepContext& ctx, const Vec& xp) {
  std::vector<Vec> cols;
  cols.reserve(ctx.spec.directions.size());
  for (std::size_t m = 0; m < ctx.spec.directions.size(); ++m)
    cols.push_back(direction_column(ctx, m, xp));
  return DenseMatrix::from_columns(cols);
}

DenseMatrix build_discrete_gradients(const StepContext& ctx, const Vec& xp) {
  std::vector<Vec> cols;
  cols.reserve(ctx.system.integrals.size());
  for (const auto& integral : ctx.system.integrals)
    cols.push_back(discrete_gradient(ctx.spec.formulation_dg, integral,
                                     StateVector(ctx.x), StateVector(xp))
                       .entries());
  return DenseMatrix::from_columns(cols);
}

Vec ftilde_at(const StepContext& ctx, const Vec& xp) {
  if (ctx.spec.ftilde == FtildeKind::PredictorIncrement ||
      ctx.spec.underlying.kind != MethodKind::ImplicitMidpoint)
    return ctx.ftilde_pred;
  // Coupled increment of the implicit midpoint: g~(x, x', h) = f((x+x')/2).
  Vec mid(ctx.x.size());
  for (std::size_t i = 0; i < mid.size(); ++i)
    mid[i] = 0.5 * (ctx.x[i] + xp[i]);
  return ctx.system.vector_field(StateVector(mid)).entries();
}

/// lambda solving B^T A lambda = (targets - I(x)) - h B^T ftilde, the
/// discrete-gradient elimination of the integral constraints.
Vec eliminated_lambda(const StepContext& ctx, const DenseMatrix& a,
                      const DenseMatrix& b, const Vec& ftilde) {
  Vec rhs = b.apply_transposed(ftilde);
  for (std::size_t m2 = 0; m2 < rhs.size(); ++m2)
    rhs[m2] = (ctx.targets[m2] - ctx.i_at_x[m2]) - ctx.h * rhs[m2];
  const LuFactorization bta(b.transposed_multiply(a));
  if (bta.singular()) throw ComplementarityFailure();
  return bta.solve(rhs);
}

/// Fixed-point map shared by ProjectorForm and the fixed-point strategy of
/// LambdaForm:  x' -> x + h ftilde + A lambda(x').
Vec projected_map(const StepContext& ctx, const Vec& xp) {
  const DenseMatrix a = build_directions(ctx, xp);
  const DenseMatrix b = build_discrete_gradients(ctx, xp);
  const Vec ft = ftilde_at(ctx, xp);
  const Vec lambda = eliminated_lambda(ctx, a, b, ft);
  Vec out = add_scaled(ctx.x, ctx.h, ft);
  for (std::size_t m2 = 0; m2 < lambda.size(); ++m2)
    axpy(out, lambda[m2], a.column(m2));
  return out;
}

StepResult finish_projected(const StepContext& ctx, SolveReport report) {
  if (!report.converged)
    throw SolverDiverged("projection step did not converge",
                         report.iterations, report.final_residual);
  StepResult result;
  const Vec xp = report.solution;
  const DenseMatrix a = build_directions(ctx, xp);
  const DenseMatrix b = build_discrete_gradients(ctx, xp);
  result.lambda = eliminated_lambda(ctx, a, b, ftilde_at(ctx, xp));
  result.x_new = StateVector(xp);
  result.solver_report = std::move(report);
  return result;
}

StepResult lambda_form_step(const StepContext& ctx) {
  const std::size_t d = ctx.x.size();
  const std::size_t m = ctx.system.integrals.size();

  if (ctx.spec.solver.strategy == SolveStrategy::FixedPoint)
    return finish_projected(
        ctx, fixed_point_solve([&ctx](const Vec& xp) { return projected_map(ctx, xp); },
                               ctx.y, ctx.spec.solver));

  const auto residual = [&ctx, d, m](const Vec& z) {
    const Vec xp(z.begin(), z.begin() + d);
    const DenseMatrix a = build_directions(ctx, xp);
    const Vec ft = ftilde_at(ctx, xp);
    Vec r(d + m);
    for (std::size_t i = 0; i < d; ++i) {
      r[i] = xp[i] - ctx.x[i] - ctx.h * ft[i];
      for (std::size_t j = 0; j < m; ++j) r[i] -= a(i, j) * z[d + j];
    }
    for (std::size_t j = 0; j < m; ++j)
      r[d + j] =
          ctx.system.integrals[j].value(StateVector(xp)) - ctx.targets[j];
    return r;
  };

  Vec z0 = ctx.y;
  z0.resize(d + m, 0.0);
  SolveReport report = newton_solve(residual, std::move(z0), ctx.spec.solver);
  if (!report.converged)
    throw SolverDiverged("projection step did not converge",
                         report.iterations, report.final_residual);

  StepResult result;
  result.x_new = StateVector(Vec(report.solution.begin(),
                                 report.solution.begin() + d));
  result.lambda = Vec(report.solution.begin() + d, report.solution.end());
  result.solver_report = std::move(report);
  return result;
}

StepResult projector_form_step(const StepContext& ctx) {
  return finish_projected(
      ctx,
      solve_implicit([&ctx](const Vec& xp) { return projected_map(ctx, xp); },
                     ctx.y, ctx.spec.solver));
}

/// Single-integral skew form.  delta_target = target - I(x) is zero for the
/// plain discrete gradient method and restores drift otherwise.
StepResult dg_form_step(const StepContext& ctx, const DiscreteGradientKind& dg) {
  if (ctx.system.integrals.size() != 1)
    throw DimensionMismatch("discrete gradient form requires exactly one integral");
  const FirstIntegral& integral = ctx.system.integrals[0];
  const double delta_target = ctx.targets[0] - ctx.i_at_x[0];

  const auto update = [&](const Vec& xp, double* lambda_out) {
    const Vec itilde = direction_column(ctx, 0, xp);
    const Vec ibar =
        discrete_gradient(dg, integral, StateVector(ctx.x), StateVector(xp))
            .entries();
    const Vec ft = ftilde_at(ctx, xp);
    const double denom = dot(itilde, ibar);
    if (std::abs(denom) < 1e-13 * two_norm(itilde) * two_norm(ibar))
      throw DegenerateDenominator();
    // h S~ i-bar = h (ftilde - i~ (ftilde.i-bar)/(i~.i-bar)); the
    // delta_target/denom term re-targets the conserved level.
    const double lambda = (delta_target - ctx.h * dot(ft, ibar)) / denom;
    if (lambda_out) *lambda_out = lambda;
    Vec out = add_scaled(ctx.x, ctx.h, ft);
    axpy(out, lambda, itilde);
    return out;
  };

  SolveReport report = solve_implicit(
      [&update](const Vec& xp) { return update(xp, nullptr); }, ctx.y,
      ctx.spec.solver);
  if (!report.converged)
    throw SolverDiverged("discrete gradient step did not converge",
                         report.iterations, report.final_residual);
  StepResult result;
  double lambda = 0.0;
  update(report.solution, &lambda);
  result.lambda = {lambda};
  result.x_new = StateVector(report.solution);
  result.solver_report = std::move(report);
  return result;
}

/// Perturbed-endpoint symmetric projection, solved flat in (z, x', lambda):
///   y  = x + (1/2) A'' lambda,           A'' = [i_m(x)]
///   z  = y + h g~(y, z, h)               (symmetric underlying method)
///   x' = z + (1/2) A' lambda,            A'  = [i_m(x')]
///   I_m(x') = targets[m].
StepResult symmetric_form_step(const StepContext& ctx) {
  if (ctx.spec.underlying.kind != MethodKind::ImplicitMidpoint)
    throw Error("symmetric projection requires a symmetric underlying method");
  const std::size_t d = ctx.x.size();
  const std::size_t m = ctx.system.integrals.size();

  const auto y_of = [&ctx, d, m](const Vec& lambda) {
    Vec y = ctx.x;
    for (std::size_t j = 0; j < m; ++j) axpy(y, 0.5 * lambda[j], ctx.grad_x[j]);
    return y;
  };

  // Unknown layout: z | x' | lambda.
  const auto residual = [&](const Vec& u) {
    const Vec z(u.begin(), u.begin() + d);
    const Vec xp(u.begin() + d, u.begin() + 2 * d);
    const Vec lambda(u.begin() + 2 * d, u.end());
    const Vec y = y_of(lambda);
    Vec mid(d);
    for (std::size_t i = 0; i < d; ++i) mid[i] = 0.5 * (y[i] + z[i]);
    const Vec fmid = ctx.system.vector_field(StateVector(mid)).entries();
    Vec r(2 * d + m);
    for (std::size_t i = 0; i < d; ++i)
      r[i] = z[i] - y[i] - ctx.h * fmid[i];
    const StateVector xps{Vec(xp)};
    for (std::size_t i = 0; i < d; ++i) r[d + i] = xp[i] - z[i];
    for (std::size_t j = 0; j < m; ++j) {
      const StateVector gp = ctx.system.integrals[j].gradient(xps);
      for (std::size_t i = 0; i < d; ++i) r[d + i] -= 0.5 * lambda[j] * gp[i];
      r[2 * d + j] = ctx.system.integrals[j].value(xps) - ctx.targets[j];
    }
    return r;
  };

  // Predictor: the plain midpoint step already computed for the context;
  // lambda starts at zero.
  const Vec& z0 = ctx.y;
  Vec u0 = z0;
  u0.insert(u0.end(), z0.begin(), z0.end());
  u0.resize(2 * d + m, 0.0);

  SolveReport report;
  if (ctx.spec.solver.strategy == SolveStrategy::FixedPoint) {
    const auto map = [&](const Vec& u) {
      const Vec z(u.begin(), u.begin() + d);
      const Vec xp(u.begin() + d, u.begin() + 2 * d);
      const Vec lambda(u.begin() + 2 * d, u.end());
      const Vec y = y_of(lambda);
      Vec mid(d);
      for (std::size_t i = 0; i < d; ++i) mid[i] = 0.5 * (y[i] + z[i]);
      Vec z_new = y;
      axpy(z_new, ctx.h, ctx.system.vector_field(StateVector(mid)).entries());
      // lambda from the discrete-gradient elimination with A = (A'+A'')/2.
      std::vector<Vec> grads_xp(m);
      std::vector<Vec> acols(m);
      for (std::size_t j = 0; j < m; ++j) {
        grads_xp[j] =
            ctx.system.integrals[j].gradient(StateVector(xp)).entries();
        acols[j] = grads_xp[j];
        for (std::size_t i = 0; i < d; ++i)
          acols[j][i] = 0.5 * (acols[j][i] + ctx.grad_x[j][i]);
      }
      const DenseMatrix a = DenseMatrix::from_columns(acols);
      const DenseMatrix b = build_discrete_gradients(ctx, xp);
      Vec rhs = b.apply_transposed(sub(z_new, y));
      for (std::size_t j = 0; j < m; ++j)
        rhs[j] = (ctx.targets[j] - ctx.i_at_x[j]) - rhs[j];
      const LuFactorization bta(b.transposed_multiply(a));
      if (bta.singular()) throw ComplementarityFailure();
      const Vec lambda_new = bta.solve(rhs);
      Vec xp_new = z_new;
      for (std::size_t j = 0; j < m; ++j)
        axpy(xp_new, 0.5 * lambda_new[j], grads_xp[j]);
      Vec out = z_new;
      out.insert(out.end(), xp_new.begin(), xp_new.end());
      out.insert(out.end(), lambda_new.begin(), lambda_new.end());
      return out;
    };
    report = fixed_point_solve(map, std::move(u0), ctx.spec.solver);
  } else {
    report = newton_solve(residual, std::move(u0), ctx.spec.solver);
  }
  if (!report.converged)
    throw SolverDiverged("symmetric projection step did not converge",
                         report.iterations, report.final_residual);

  StepResult result;
  result.x_new = StateVector(
      Vec(report.solution.begin() + d, report.solution.begin() + 2 * d));
  result.lambda = Vec(report.solution.begin() + 2 * d, report.solution.end());
  result.solver_report = std::move(report);
  return result;
}

}  // namespace

StepResult projection_step(const MethodSpec& spec, const OdeSystem& system,
                           const StateVector& x, double h, const Vec& targets) {
  StepContext ctx = make_context(spec, system, x, h, targets);

  if (spec.formulation != Formulation::SymmetricForm) {
    // All direction columns vanishing mirrors the i(x) = 0 branch: the
    // underlying step is returned unprojected, flagged for the caller.
    const DenseMatrix a0 = build_directions(ctx, ctx.y);
    if (a0.max_abs() < 1e-14) {
      StepResult result;
      result.x_new = StateVector(ctx.y);
      result.lambda = Vec(system.integrals.size(), 0.0);
      result.solver_report.solution = ctx.y;
      result.solver_report.converged = true;
      result.degenerate_directions = true;
      return result;
    }
  }

  switch (spec.formulation) {
    case Formulation::LambdaForm:
      return lambda_form_step(ctx);
    case Formulation::ProjectorForm:
      return projector_form_step(ctx);
    case Formulation::DiscreteGradientForm:
      return dg_form_step(ctx, spec.formulation_dg);
    case Formulation::SymmetricForm:
      return symmetric_form_step(ctx);
  }
  throw Error("projection_step: unknown formulation");
}

StepResult single_integral_step_dg_form(const MethodSpec& spec,
                                        const OdeSystem& system,
                                        const StateVector& x, double h,
                                        const DiscreteGradientKind& dg) {
  if (system.integrals.size() != 1)
    throw DimensionMismatch(
        "single_integral_step_dg_form: system must have exactly one integral");
  const Vec targets = {system.integrals[0].value(x)};
  StepContext ctx = make_context(spec, system, x, h, targets);

  // i(x) = 0 branch of the skew form: x' = x.
  if (inf_norm(ctx.grad_x[0]) < 1e-14) {
    StepResult result;
    result.x_new = x;
    result.lambda = {0.0};
    result.solver_report.solution = x.entries();
    result.solver_report.converged = true;
    result.degenerate_directions = true;
    return result;
  }
  return dg_form_step(ctx, dg);
}

MethodSpec make_standard_projection(const OneStepMethod& underlying,
                                    StandardProjectionVersion version,
                                    std::size_t num_integrals) {
  MethodSpec spec;
  spec.underlying = underlying;
  const DirectionKind kind = version == StandardProjectionVersion::V1_AtNew
                                 ? DirectionKind::AtNew
                                 : DirectionKind::AtPredictor;
  spec.directions.assign(num_integrals, DirectionRule{kind, {}});
  spec.formulation = Formulation::LambdaForm;
  spec.ftilde = FtildeKind::PredictorIncrement;
  return spec;
}

MethodSpec make_symmetric_projection(const OneStepMethod& symmetric_underlying,
                                     std::size_t num_integrals) {
  if (symmetric_underlying.kind != MethodKind::ImplicitMidpoint)
    throw Error("make_symmetric_projection: underlying method must be symmetric");
  MethodSpec spec;
  spec.underlying = symmetric_underlying;
  spec.directions.assign(num_integrals,
                         DirectionRule{DirectionKind::Midpoint, {}});
  spec.formulation = Formulation::SymmetricForm;
  spec.ftilde = FtildeKind::CoupledIncrement;
  return spec;
}

MethodSpec make_dahlby(DahlbyVariant variant, const OneStepMethod& underlying,
                       const DiscreteGradientKind& dg,
                       std::size_t num_integrals) {
  MethodSpec spec;
  spec.underlying = underlying;
  spec.directions.assign(num_integrals,
                         DirectionRule{DirectionKind::FromDiscreteGradient, dg});
  spec.formulation = Formulation::ProjectorForm;
  spec.formulation_dg = dg;  // A = B: orthogonal projection
  spec.ftilde = variant == DahlbyVariant::PredictorDifference
                    ? FtildeKind::PredictorIncrement
                    : FtildeKind::CoupledIncrement;
  return spec;
}

}  // namespace firstint
