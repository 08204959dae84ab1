#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "firstint/dg_methods.hpp"
#include "firstint/problems.hpp"
#include "firstint/projection.hpp"

namespace firstint {

/// A named step map plus the bookkeeping the trajectory runner needs:
/// which integral values the method pins down, and against what.
struct Integrator {
  std::string name;
  ConserveAgainst conserve = ConserveAgainst::InitialValue;
  /// The subsystem whose integrals this method preserves (empty list for
  /// plain, non-preserving methods).
  std::shared_ptr<const OdeSystem> preserved_system;
  std::function<StepResult(const StateVector&, double, const Vec&)> step;

  Vec preserved_values(const StateVector& x) const {
    return preserved_system ? evaluate_integrals(*preserved_system, x) : Vec{};
  }
};

struct TrajectoryFailure {
  std::size_t step_index = 0;
  std::string message;
};

struct TrajectoryRecord {
  Vec times;                           // N+1
  std::vector<StateVector> states;     // N+1
  std::vector<Vec> integral_values;    // N+1 rows over the recording system
  Vec lambda_norms;                    // N (0 for the leading state row)
  std::vector<int> solver_iterations;  // N
  std::optional<TrajectoryFailure> failure;
};

/// Apply the step map n_steps times.  Integral rows are recorded against
/// `record_system` (typically the full problem, independent of the subset the
/// method preserves).  On a step failure the partial record is returned with
/// the failing step index.
TrajectoryRecord run_trajectory(const Integrator& method,
                                const OdeSystem& record_system,
                                const StateVector& x0, double h,
                                std::size_t n_steps);

struct OrderStudyRow {
  std::string method_name;
  double h = 0.0;
  double final_error = 0.0;  // inf-norm vs x0 at t = 2*pi*periods; NaN on failure
  double fitted_slope = 0.0; // per-method OLS slope, repeated on each row
};

/// Global error against the periodicity oracle on the grid h = 2*pi/n.
/// The slope is fitted per method over rows with error in [1e-12, 1e-1].
std::vector<OrderStudyRow> order_study(const std::vector<Integrator>& methods,
                                       const OdeSystem& system,
                                       const StateVector& x0,
                                       const std::vector<int>& h_nums,
                                       int periods);

/// OLS slope of ln(error) against ln(h) restricted to the error window.
double fit_order_slope(const Vec& hs, const Vec& errors, double lo = 1e-12,
                       double hi = 1e-1);

struct EquivalenceSeries {
  std::string variant_name;
  double single_step_difference = 0.0;  // one step from x0, common state
  Vec per_step_difference;              // |x_ref(t_n) - x_var(t_n)|_inf
};

/// Runs reference and variants side by side from x0 and reports the
/// divergence of the trajectories, plus a single-step agreement number.
std::vector<EquivalenceSeries> equivalence_study(
    const Integrator& reference, const std::vector<Integrator>& variants,
    const OdeSystem& system, const StateVector& x0, double h,
    std::size_t n_steps);

struct IntegralErrorSeries {
  Vec times;                // N entries (t_1 .. t_N)
  std::vector<Vec> errors;  // N rows of |I_m(x_n) - I_m(x0)|
};

IntegralErrorSeries integral_error_study(const Integrator& method,
                                         const OdeSystem& system,
                                         const StateVector& x0, double h,
                                         std::size_t n_steps);

struct PresetOptions {
  double tolerance = 1e-14;
  SolveStrategy strategy = SolveStrategy::NewtonFiniteDifference;
  /// Indices into the system's integral list that the method preserves.
  std::vector<std::size_t> integral_indices = {0, 1, 2};
};

/// Restrict a system to a subset of its integrals (same vector field).
OdeSystem subsystem(const OdeSystem& system,
                    const std::vector<std::size_t>& integral_indices);

/// Named method presets: rk4, rk6, a, b, c, d, a6, b6, c6, d6, b1, b2,
/// std-v1, std-v2, symmetric, dahlby1, dahlby2.
Integrator make_preset(const std::string& name, const OdeSystem& system,
                       const PresetOptions& options);

const std::vector<std::string>& preset_names();

// CSV emission.  Floating point is serialized with 17 significant digits so
// reruns are byte-identical and values round-trip exactly.
void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& record);
void write_order_csv(std::ostream& out, const std::vector<OrderStudyRow>& rows);
void write_equivalence_csv(std::ostream& out, double h,
                           const std::vector<EquivalenceSeries>& series);
void write_integral_error_csv(std::ostream& out,
                              const IntegralErrorSeries& series);

std::string format_double(double v);

}  // namespace firstint
