#include "firstint/harness.hpp"

#include <cmath>
#include <limits>
#include <cstdio>
#include <numbers>
#include <utility>

namespace firstint {

TrajectoryRecord run_trajectory(const Integrator& method,
                                const OdeSystem& record_system,
                                const StateVector& x0, double h,
                                std::size_t n_steps) {
  if (n_steps < 1) throw Error("run_trajectory: n_steps must be >= 1");
  TrajectoryRecord rec;
  rec.times.reserve(n_steps + 1);
  rec.states.reserve(n_steps + 1);
  rec.integral_values.reserve(n_steps + 1);

  const Vec targets0 = method.preserved_values(x0);
  StateVector x = x0;
  rec.times.push_back(0.0);
  rec.states.push_back(x);
  rec.integral_values.push_back(evaluate_integrals(record_system, x));

  for (std::size_t k = 0; k < n_steps; ++k) {
    const Vec targets = method.conserve == ConserveAgainst::InitialValue
                            ? targets0
                            : method.preserved_values(x);
    StepResult result;
    try {
      result = method.step(x, h, targets);
    } catch (const SolverDiverged& e) {
      rec.failure = TrajectoryFailure{k, e.what()};
      break;
    } catch (const Error& e) {
      rec.failure = TrajectoryFailure{k, e.what()};
      break;
    }
    x = result.x_new;
    rec.times.push_back(static_cast<double>(k + 1) * h);
    rec.states.push_back(x);
    rec.integral_values.push_back(evaluate_integrals(record_system, x));
    rec.lambda_norms.push_back(inf_norm(result.lambda));
    rec.solver_iterations.push_back(result.solver_report.iterations);
  }
  return rec;
}

double fit_order_slope(const Vec& hs, const Vec& errors, double lo, double hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (!std::isfinite(errors[i]) || errors[i] <= lo || errors[i] >= hi)
      continue;
    const double X = std::log(hs[i]);
    const double Y = std::log(errors[i]);
    sx += X; sy += Y; sxx += X * X; sxy += X * Y;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<OrderStudyRow> order_study(const std::vector<Integrator>& methods,
                                       const OdeSystem& system,
                                       const StateVector& x0,
                                       const std::vector<int>& h_nums,
                                       int periods) {
  if (periods < 1) throw Error("order_study: periods must be >= 1");
  std::vector<OrderStudyRow> rows;
  for (const Integrator& method : methods) {
    Vec hs, errs;
    const std::size_t first_row = rows.size();
    for (int n : h_nums) {
      const double h = 2.0 * std::numbers::pi / n;
      const std::size_t n_steps = static_cast<std::size_t>(n) * periods;
      const TrajectoryRecord rec = run_trajectory(method, system, x0, h, n_steps);
      double err = std::numeric_limits<double>::quiet_NaN();
      if (!rec.failure)
        err = inf_norm(sub(rec.states.back().entries(), x0.entries()));
      rows.push_back({method.name, h, err, 0.0});
      hs.push_back(h);
      errs.push_back(err);
    }
    const double slope = fit_order_slope(hs, errs);
    for (std::size_t i = first_row; i < rows.size(); ++i)
      rows[i].fitted_slope = slope;
  }
  return rows;
}

std::vector<EquivalenceSeries> equivalence_study(
    const Integrator& reference, const std::vector<Integrator>& variants,
    const OdeSystem& /*system*/, const StateVector& x0, double h,
    std::size_t n_steps) {
  std::vector<EquivalenceSeries> out;
  out.reserve(variants.size());

  const Vec ref_targets0 = reference.preserved_values(x0);
  const StateVector ref_first =
      reference.step(x0, h, ref_targets0).x_new;

  for (const Integrator& variant : variants) {
    EquivalenceSeries series;
    series.variant_name = variant.name;
    const StateVector var_first =
        variant.step(x0, h, variant.preserved_values(x0)).x_new;
    series.single_step_difference =
        inf_norm(sub(var_first.entries(), ref_first.entries()));
    out.push_back(std::move(series));
  }

  StateVector x_ref = x0;
  std::vector<StateVector> x_var(variants.size(), x0);
  std::vector<Vec> var_targets0;
  for (const Integrator& variant : variants)
    var_targets0.push_back(variant.preserved_values(x0));

  for (std::size_t k = 0; k < n_steps; ++k) {
    const Vec rt = reference.conserve == ConserveAgainst::InitialValue
                       ? ref_targets0
                       : reference.preserved_values(x_ref);
    x_ref = reference.step(x_ref, h, rt).x_new;
    for (std::size_t v = 0; v < variants.size(); ++v) {
      const Vec vt = variants[v].conserve == ConserveAgainst::InitialValue
                         ? var_targets0[v]
                         : variants[v].preserved_values(x_var[v]);
      x_var[v] = variants[v].step(x_var[v], h, vt).x_new;
      out[v].per_step_difference.push_back(
          inf_norm(sub(x_var[v].entries(), x_ref.entries())));
    }
  }
  return out;
}

IntegralErrorSeries integral_error_study(const Integrator& method,
                                         const OdeSystem& system,
                                         const StateVector& x0, double h,
                                         std::size_t n_steps) {
  const TrajectoryRecord rec =
      run_trajectory(method, system, x0, h, n_steps);
  if (rec.failure)
    throw SolverDiverged("integral_error_study: " + rec.failure->message, 0,
                         std::numeric_limits<double>::quiet_NaN(),
                         static_cast<long>(rec.failure->step_index));
  IntegralErrorSeries series;
  const Vec& ref = rec.integral_values.front();
  for (std::size_t k = 1; k < rec.integral_values.size(); ++k) {
    series.times.push_back(rec.times[k]);
    Vec row(ref.size());
    for (std::size_t m = 0; m < ref.size(); ++m)
      row[m] = std::abs(rec.integral_values[k][m] - ref[m]);
    series.errors.push_back(std::move(row));
  }
  return series;
}

OdeSystem subsystem(const OdeSystem& system,
                    const std::vector<std::size_t>& integral_indices) {
  OdeSystem sub;
  sub.dimension = system.dimension;
  sub.vector_field = system.vector_field;
  for (std::size_t idx : integral_indices) {
    if (idx >= system.integrals.size())
      throw DimensionMismatch("subsystem: integral index out of range");
    sub.integrals.push_back(system.integrals[idx]);
  }
  return sub;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "rk4",    "rk6",    "a",      "b",       "c",       "d",
      "a6",     "b6",     "c6",     "d6",      "b1",      "b2",
      "std-v1", "std-v2", "symmetric", "dahlby1", "dahlby2"};
  return names;
}

namespace {

DirectionKind direction_for_letter(char letter) {
  switch (letter) {
    case 'a': return DirectionKind::AtNew;
    case 'b': return DirectionKind::AtOld;
    case 'c': return DirectionKind::AtPredictor;
    case 'd': return DirectionKind::Midpoint;
  }
  throw Error("unknown projection direction letter");
}

Integrator plain_preset(const std::string& name, const OneStepMethod& method,
                        const OdeSystem& system, const SolverConfig& solver) {
  Integrator integ;
  integ.name = name;
  auto field = system.vector_field;
  integ.step = [method, field, solver](const StateVector& x, double h,
                                       const Vec&) {
    StepResult result;
    result.x_new = rk_step(method, field, x, h, solver);
    result.solver_report.converged = true;
    result.solver_report.solution = result.x_new.entries();
    return result;
  };
  return integ;
}

Integrator projection_preset(const std::string& name, MethodSpec spec,
                             std::shared_ptr<const OdeSystem> sub) {
  Integrator integ;
  integ.name = name;
  integ.conserve = spec.conserve_against;
  integ.preserved_system = sub;
  integ.step = [spec = std::move(spec), sub](const StateVector& x, double h,
                                             const Vec& targets) {
    return projection_step(spec, *sub, x, h, targets);
  };
  return integ;
}

Integrator dg_tensor_preset(const std::string& name, DgMethodSpec spec,
                            std::shared_ptr<const OdeSystem> sub) {
  if (sub->integrals.size() != 2)
    throw Error(name + " preserves exactly two integrals");
  Integrator integ;
  integ.name = name;
  integ.conserve = ConserveAgainst::PreviousStep;  // skew form, no targets
  integ.preserved_system = sub;
  integ.step = [spec = std::move(spec), sub](const StateVector& x, double h,
                                             const Vec&) {
    return dg_step_two_integrals(spec, *sub, x, h);
  };
  return integ;
}

}  // namespace

Integrator make_preset(const std::string& name, const OdeSystem& system,
                       const PresetOptions& options) {
  SolverConfig solver;
  solver.tolerance = options.tolerance;
  solver.strategy = options.strategy;

  if (name == "rk4") return plain_preset(name, rk4_method(), system, solver);
  if (name == "rk6") return plain_preset(name, rk6_method(), system, solver);

  auto sub = std::make_shared<const OdeSystem>(
      subsystem(system, options.integral_indices));
  const std::size_t m = sub->integrals.size();

  const auto projected = [&](char letter, const OneStepMethod& underlying) {
    MethodSpec spec;
    spec.underlying = underlying;
    spec.directions.assign(m, DirectionRule{direction_for_letter(letter), {}});
    spec.formulation = Formulation::LambdaForm;
    spec.solver = solver;
    return projection_preset(name, std::move(spec), sub);
  };

  if (name.size() == 1 && std::string("abcd").find(name[0]) != std::string::npos)
    return projected(name[0], rk4_method());
  if (name.size() == 2 && name[1] == '6' &&
      std::string("abcd").find(name[0]) != std::string::npos)
    return projected(name[0], rk6_method());

  if (name == "b1" || name == "b2") {
    DgMethodSpec spec;
    spec.underlying = rk4_method();
    spec.directions.assign(2, DirectionRule{DirectionKind::AtOld, {}});
    const DgVariant variant =
        name == "b1" ? DgVariant::ItohAbe : DgVariant::ItohAbeSymmetrized;
    spec.discrete_gradients.assign(2, DiscreteGradientKind{variant, 4});
    spec.solver = solver;
    return dg_tensor_preset(name, std::move(spec), sub);
  }

  if (name == "std-v1" || name == "std-v2") {
    MethodSpec spec = make_standard_projection(
        rk4_method(),
        name == "std-v1" ? StandardProjectionVersion::V1_AtNew
                         : StandardProjectionVersion::V2_AtPredictor,
        m);
    spec.solver = solver;
    return projection_preset(name, std::move(spec), sub);
  }

  if (name == "symmetric") {
    MethodSpec spec = make_symmetric_projection(implicit_midpoint_method(), m);
    spec.solver = solver;
    return projection_preset(name, std::move(spec), sub);
  }

  if (name == "dahlby1" || name == "dahlby2") {
    MethodSpec spec = make_dahlby(
        name == "dahlby1" ? DahlbyVariant::PredictorDifference
                          : DahlbyVariant::ProjectedRHS,
        rk4_method(), DiscreteGradientKind{DgVariant::GonzalezMidpoint, 4}, m);
    spec.solver = solver;
    return projection_preset(name, std::move(spec), sub);
  }

  throw Error("unknown method preset: " + name);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& record) {
  const std::size_t d = record.states.empty() ? 0 : record.states[0].size();
  const std::size_t m =
      record.integral_values.empty() ? 0 : record.integral_values[0].size();
  out << "t";
  for (std::size_t i = 0; i < d; ++i) out << ",x" << (i + 1);
  for (std::size_t j = 0; j < m; ++j) out << ",I" << (j + 1) << "err";
  out << ",lambda_norm,iters\n";
  const Vec& ref = record.integral_values.front();
  for (std::size_t k = 0; k < record.states.size(); ++k) {
    out << format_double(record.times[k]);
    for (std::size_t i = 0; i < d; ++i)
      out << ',' << format_double(record.states[k][i]);
    for (std::size_t j = 0; j < m; ++j)
      out << ','
          << format_double(std::abs(record.integral_values[k][j] - ref[j]));
    if (k == 0)
      out << ",0,0\n";
    else
      out << ',' << format_double(record.lambda_norms[k - 1]) << ','
          << record.solver_iterations[k - 1] << '\n';
  }
}

void write_order_csv(std::ostream& out, const std::vector<OrderStudyRow>& rows) {
  out << "method,h,error,slope\n";
  for (const OrderStudyRow& row : rows)
    out << row.method_name << ',' << format_double(row.h) << ','
        << format_double(row.final_error) << ','
        << format_double(row.fitted_slope) << '\n';
}

void write_equivalence_csv(std::ostream& out, double h,
                           const std::vector<EquivalenceSeries>& series) {
  out << "t";
  for (const EquivalenceSeries& s : series) out << ",diff_" << s.variant_name;
  out << '\n';
  if (series.empty()) return;
  const std::size_t n = series.front().per_step_difference.size();
  for (std::size_t k = 0; k < n; ++k) {
    out << format_double(static_cast<double>(k + 1) * h);
    for (const EquivalenceSeries& s : series)
      out << ',' << format_double(s.per_step_difference[k]);
    out << '\n';
  }
}

void write_integral_error_csv(std::ostream& out,
                              const IntegralErrorSeries& series) {
  const std::size_t m = series.errors.empty() ? 0 : series.errors[0].size();
  out << "t";
  for (std::size_t j = 0; j < m; ++j) out << ",I" << (j + 1) << "err";
  out << '\n';
  for (std::size_t k = 0; k < series.errors.size(); ++k) {
    out << format_double(series.times[k]);
    for (std::size_t j = 0; j < m; ++j)
      out << ',' << format_double(series.errors[k][j]);
    out << '\n';
  }
}

}  // namespace firstint
