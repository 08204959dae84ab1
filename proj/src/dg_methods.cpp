#include "firstint/dg_methods.hpp"

#include <cmath>
#include <utility>

#include "firstint/linalg.hpp"

namespace firstint {

namespace {

void require_counts(const DgMethodSpec& spec, const OdeSystem& system,
                    std::size_t m_expected) {
  if (m_expected != 0 && system.integrals.size() != m_expected)
    throw DimensionMismatch("dg step: unexpected number of integrals");
  if (spec.directions.size() != system.integrals.size() ||
      spec.discrete_gradients.size() != system.integrals.size())
    throw DimensionMismatch("dg step: spec lists must match integral count");
}

MethodSpec as_method_spec(const DgMethodSpec& spec) {
  MethodSpec mspec;
  mspec.underlying = spec.underlying;
  mspec.directions = spec.directions;
  mspec.formulation = Formulation::DiscreteGradientForm;
  mspec.formulation_dg = spec.discrete_gradients.empty()
                             ? DiscreteGradientKind{}
                             : spec.discrete_gradients.front();
  mspec.ftilde = spec.ftilde;
  mspec.solver = spec.solver;
  return mspec;
}

struct DgContext {
  const DgMethodSpec& spec;
  const OdeSystem& system;
  Vec x;
  double h;
  Vec ftilde_pred;
  Vec y;
  std::vector<Vec> grad_x;
  std::vector<Vec> grad_y;
};

DgContext make_dg_context(const DgMethodSpec& spec, const OdeSystem& system,
                          const StateVector& x, double h) {
  DgContext ctx{spec, system, x.entries(), h, {}, {}, {}, {}};
  ctx.ftilde_pred =
      rk_increment(spec.underlying, system.vector_field, x, h, spec.solver);
  ctx.y = add_scaled(ctx.x, h, ctx.ftilde_pred);
  for (const auto& integral : system.integrals) {
    ctx.grad_x.push_back(integral.gradient(x).entries());
    ctx.grad_y.push_back(integral.gradient(StateVector(ctx.y)).entries());
  }
  return ctx;
}

Vec dg_direction(const DgContext& ctx, std::size_t m, const Vec& xp) {
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
  throw Error("dg_direction: unknown kind");
}

Vec dg_ftilde(const DgContext& ctx, const Vec& xp) {
  if (ctx.spec.ftilde == FtildeKind::PredictorIncrement ||
      ctx.spec.underlying.kind != MethodKind::ImplicitMidpoint)
    return ctx.ftilde_pred;
  Vec mid(ctx.x.size());
  for (std::size_t i = 0; i < mid.size(); ++i)
    mid[i] = 0.5 * (ctx.x[i] + xp[i]);
  return ctx.system.vector_field(StateVector(mid)).entries();
}

Vec dg_bar(const DgContext& ctx, std::size_t m, const Vec& xp) {
  return discrete_gradient(ctx.spec.discrete_gradients[m],
                           ctx.system.integrals[m], StateVector(ctx.x),
                           StateVector(xp))
      .entries();
}

StepResult run_dg_solve(const DgContext& ctx, const VecMap& map,
                        const char* what) {
  SolveReport report = solve_implicit(map, ctx.y, ctx.spec.solver);
  if (!report.converged)
    throw SolverDiverged(what, report.iterations, report.final_residual);
  StepResult result;
  result.x_new = StateVector(report.solution);
  result.solver_report = std::move(report);
  return result;
}

}  // namespace

StepResult dg_step_single(const DgMethodSpec& spec, const OdeSystem& system,
                          const StateVector& x, double h) {
  require_counts(spec, system, 1);
  return single_integral_step_dg_form(as_method_spec(spec), system, x, h,
                                      spec.discrete_gradients[0]);
}

StepResult dg_step_two_integrals(const DgMethodSpec& spec,
                                 const OdeSystem& system, const StateVector& x,
                                 double h) {
  require_counts(spec, system, 2);
  DgContext ctx = make_dg_context(spec, system, x, h);
  const std::size_t d = system.dimension;

  const auto update = [&](const Vec& xp) {
    const Vec ft = dg_ftilde(ctx, xp);
    const Vec it = dg_direction(ctx, 0, xp);
    const Vec jt = dg_direction(ctx, 1, xp);
    const Vec ib = dg_bar(ctx, 0, xp);
    const Vec jb = dg_bar(ctx, 1, xp);
    const double ntilde =
        dot(it, ib) * dot(jt, jb) - dot(it, jb) * dot(ib, jt);
    const double scale =
        two_norm(it) * two_norm(ib) * two_norm(jt) * two_norm(jb);
    if (scale == 0.0 || std::abs(ntilde) < 1e-13 * scale)
      throw DegenerateDenominator();

    // u_l = sum_{m,n} S~_{lmn} ibar_m jbar_n with S~_{lmn} the 3x3
    // determinant over (ftilde, i~, j~) rows (l, m, n), divided by N~.
    Vec u(d, 0.0);
    for (std::size_t l = 0; l < d; ++l) {
      double acc = 0.0;
      for (std::size_t m = 0; m < d; ++m)
        for (std::size_t n = 0; n < d; ++n) {
          const double det3 =
              ft[l] * (it[m] * jt[n] - it[n] * jt[m]) -
              it[l] * (ft[m] * jt[n] - ft[n] * jt[m]) +
              jt[l] * (ft[m] * it[n] - ft[n] * it[m]);
          acc += det3 * ib[m] * jb[n];
        }
      u[l] = acc / ntilde;
    }
    return add_scaled(ctx.x, ctx.h, u);
  };

  StepResult result =
      run_dg_solve(ctx, update, "two-integral dg step did not converge");
  // Equivalent multiplier lambda = -h (B^T A)^{-1} B^T ftilde at the solution.
  const Vec& xp = result.x_new.entries();
  const DenseMatrix a = DenseMatrix::from_columns(
      {dg_direction(ctx, 0, xp), dg_direction(ctx, 1, xp)});
  const DenseMatrix b =
      DenseMatrix::from_columns({dg_bar(ctx, 0, xp), dg_bar(ctx, 1, xp)});
  const LuFactorization bta(b.transposed_multiply(a));
  if (!bta.singular()) {
    Vec lambda = bta.solve(b.apply_transposed(dg_ftilde(ctx, xp)));
    for (double& v : lambda) v *= -h;
    result.lambda = std::move(lambda);
  }
  return result;
}

StepResult dg_step_multi(const DgMethodSpec& spec, const OdeSystem& system,
                         const StateVector& x, double h) {
  require_counts(spec, system, 0);
  const std::size_t m = system.integrals.size();
  if (m < 1 || m > system.dimension - 1)
    throw DimensionMismatch("dg_step_multi: need 1 <= M <= d-1");
  DgContext ctx = make_dg_context(spec, system, x, h);

  const auto columns = [&](const Vec& xp) {
    std::vector<Vec> acols(m), bcols(m);
    for (std::size_t j = 0; j < m; ++j) {
      acols[j] = dg_direction(ctx, j, xp);
      bcols[j] = dg_bar(ctx, j, xp);
    }
    return std::pair(DenseMatrix::from_columns(acols),
                     DenseMatrix::from_columns(bcols));
  };

  const auto update = [&](const Vec& xp) {
    const auto [a, b] = columns(xp);
    return add_scaled(ctx.x, ctx.h,
                      projected_vector_field(dg_ftilde(ctx, xp), a, b));
  };

  StepResult result =
      run_dg_solve(ctx, update, "multi-integral dg step did not converge");
  const auto [a, b] = columns(result.x_new.entries());
  const LuFactorization bta(b.transposed_multiply(a));
  if (!bta.singular()) {
    Vec lambda =
        bta.solve(b.apply_transposed(dg_ftilde(ctx, result.x_new.entries())));
    for (double& v : lambda) v *= -h;
    result.lambda = std::move(lambda);
  }
  return result;
}

StepResult dg_step_general_single(const DgMethodSpec& spec,
                                  const OdeSystem& system,
                                  const DirectionRule& ihat,
                                  const DirectionRule& ibreve,
                                  const StateVector& x, double h) {
  require_counts(spec, system, 1);
  DgContext ctx = make_dg_context(spec, system, x, h);
  if (inf_norm(ctx.grad_x[0]) < 1e-14) {
    StepResult result;
    result.x_new = x;
    result.lambda = {0.0};
    result.solver_report.solution = x.entries();
    result.solver_report.converged = true;
    result.degenerate_directions = true;
    return result;
  }

  const auto eval_rule = [&ctx](const DirectionRule& rule, const Vec& xp) {
    switch (rule.kind) {
      case DirectionKind::AtOld:
        return ctx.grad_x[0];
      case DirectionKind::AtPredictor:
        return ctx.grad_y[0];
      case DirectionKind::AtNew:
        return ctx.system.integrals[0].gradient(StateVector(xp)).entries();
      case DirectionKind::Midpoint: {
        Vec g = ctx.system.integrals[0].gradient(StateVector(xp)).entries();
        for (std::size_t i = 0; i < g.size(); ++i)
          g[i] = 0.5 * (g[i] + ctx.grad_x[0][i]);
        return g;
      }
      case DirectionKind::FromDiscreteGradient:
        return discrete_gradient(rule.dg, ctx.system.integrals[0],
                                 StateVector(ctx.x), StateVector(xp))
            .entries();
    }
    throw Error("dg_step_general_single: unknown rule");
  };

  const auto update = [&](const Vec& xp) {
    const Vec ft = dg_ftilde(ctx, xp);
    const Vec it = dg_direction(ctx, 0, xp);
    const Vec ib = dg_bar(ctx, 0, xp);
    const Vec hat = eval_rule(ihat, xp);
    const Vec breve = eval_rule(ibreve, xp);
    const double denom = dot(hat, breve);
    if (std::abs(denom) < 1e-13 * two_norm(hat) * two_norm(breve))
      throw DegenerateDenominator();
    // h S~ i-bar with S~ = (ftilde i~^T - i~ ftilde^T) / (i-hat . i-breve).
    Vec u = ft;
    for (double& v : u) v *= dot(it, ib);
    axpy(u, -dot(ft, ib), it);
    for (double& v : u) v /= denom;
    return add_scaled(ctx.x, ctx.h, u);
  };

  return run_dg_solve(ctx, update, "general dg step did not converge");
}

SkewTensor::SkewTensor(std::size_t dim, std::size_t rank)
    : d_(dim), rank_(rank) {
  if (dim > 6) throw Error("SkewTensor: materialization restricted to d <= 6");
  std::size_t n = 1;
  for (std::size_t k = 0; k < rank; ++k) n *= dim;
  data_.assign(n, 0.0);
}

std::size_t SkewTensor::flat(const std::vector<std::size_t>& idx) const {
  if (idx.size() != rank_) throw DimensionMismatch("SkewTensor: index rank");
  std::size_t f = 0;
  for (std::size_t k = 0; k < rank_; ++k) {
    if (idx[k] >= d_) throw DimensionMismatch("SkewTensor: index out of range");
    f = f * d_ + idx[k];
  }
  return f;
}

double SkewTensor::at(const std::vector<std::size_t>& idx) const {
  return data_[flat(idx)];
}
double& SkewTensor::at(const std::vector<std::size_t>& idx) {
  return data_[flat(idx)];
}

SkewTensor materialize_skew_tensor(const Vec& ftilde,
                                   const std::vector<Vec>& itildes,
                                   const std::vector<Vec>& ibars) {
  const std::size_t d = ftilde.size();
  const std::size_t m = itildes.size();
  if (ibars.size() != m)
    throw DimensionMismatch("materialize_skew_tensor: list lengths differ");
  const DenseMatrix a = DenseMatrix::from_columns(itildes);
  const DenseMatrix b = DenseMatrix::from_columns(ibars);
  const double det_bta = LuFactorization(b.transposed_multiply(a)).determinant();
  if (det_bta == 0.0) throw ComplementarityFailure();

  std::vector<Vec> wedge_vectors;
  wedge_vectors.push_back(ftilde);
  for (const Vec& v : itildes) wedge_vectors.push_back(v);

  SkewTensor tensor(d, m + 1);
  std::vector<std::size_t> idx(m + 1, 0);
  for (;;) {
    // (w^0 ^ ... ^ w^M)_{j0..jM} = det [ w^b_{j_a} ]_{a,b}.
    DenseMatrix minor(m + 1, m + 1);
    for (std::size_t r = 0; r <= m; ++r)
      for (std::size_t c = 0; c <= m; ++c)
        minor(r, c) = wedge_vectors[c][idx[r]];
    tensor.at(idx) = determinant(minor) / det_bta;

    std::size_t k = m + 1;
    while (k-- > 0) {
      if (++idx[k] < d) break;
      idx[k] = 0;
      if (k == 0) return tensor;
    }
  }
}

Vec contract_skew_tensor(const SkewTensor& tensor,
                         const std::vector<Vec>& ibars) {
  const std::size_t d = tensor.dim();
  const std::size_t m = ibars.size();
  if (tensor.rank() != m + 1)
    throw DimensionMismatch("contract_skew_tensor: rank mismatch");
  Vec out(d, 0.0);
  std::vector<std::size_t> idx(m + 1, 0);
  for (std::size_t j = 0; j < d; ++j) {
    idx[0] = j;
    std::fill(idx.begin() + 1, idx.end(), 0);
    bool running = true;
    while (running) {
      double term = tensor.at(idx);
      for (std::size_t k = 0; k < m; ++k) term *= ibars[k][idx[k + 1]];
      out[j] += term;
      // Odometer over idx[1..m].
      std::size_t k = m;
      for (;;) {
        if (k == 0) { running = false; break; }
        if (++idx[k] < d) break;
        idx[k] = 0;
        --k;
      }
    }
  }
  return out;
}

}  // namespace firstint
