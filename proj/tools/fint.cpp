// fint: experiment driver for first-integral-preserving integrators on the
// Kepler two-body problem.  Emits CSV; see README for the schema.

#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "firstint/harness.hpp"

namespace {

using namespace firstint;

std::vector<std::size_t> parse_integral_indices(const std::string& csv) {
  std::vector<std::size_t> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const int v = std::stoi(tok);
    if (v < 1 || v > 4) throw CLI::ValidationError("--integrals entries must be 1..4");
    out.push_back(static_cast<std::size_t>(v - 1));
  }
  if (out.empty()) throw CLI::ValidationError("--integrals must name at least one integral");
  return out;
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path == "-") return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw CLI::ValidationError("cannot open output file " + path);
  return file;
}

struct CommonArgs {
  double eccentricity = 0.6;
  int h_num = 50;
  int periods = 1;
  std::string integrals = "1,2,3";
  double tolerance = 1e-14;
  std::string solver = "newton";
  std::string out = "-";
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--e", args.eccentricity, "orbit eccentricity in [0,1)");
  cmd->add_option("--periods", args.periods, "number of 2*pi periods");
  cmd->add_option("--integrals", args.integrals,
                  "preserved integral subset, e.g. 1,2,3");
  cmd->add_option("--tol", args.tolerance, "per-step solver tolerance");
  cmd->add_option("--solver", args.solver, "newton | fixed-point")
      ->check(CLI::IsMember({"newton", "fixed-point"}));
  cmd->add_option("--out", args.out, "CSV output path ('-' for stdout)");
}

PresetOptions preset_options(const CommonArgs& args) {
  PresetOptions opts;
  opts.tolerance = args.tolerance;
  opts.strategy = args.solver == "fixed-point"
                      ? SolveStrategy::FixedPoint
                      : SolveStrategy::NewtonFiniteDifference;
  opts.integral_indices = parse_integral_indices(args.integrals);
  return opts;
}

int report_failure(const TrajectoryFailure& failure) {
  std::cerr << "error=SolverDiverged step=" << failure.step_index
            << " message=\"" << failure.message << "\"\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"first-integral-preserving integrator experiments (Kepler two-body)"};
  app.require_subcommand(1);

  CommonArgs integrate_args;
  std::string integrate_method = "b";
  auto* integrate = app.add_subcommand(
      "integrate", "run one trajectory and emit t, state, integral errors");
  integrate->add_option("--method", integrate_method, "method preset name");
  integrate->add_option("--h-num", integrate_args.h_num, "n in h = 2*pi/n");
  add_common(integrate, integrate_args);
  integrate_args.periods = 1;

  CommonArgs order_args;
  std::vector<std::string> order_methods;
  std::vector<int> order_h_nums;
  auto* order = app.add_subcommand(
      "order", "order study: error vs h against the periodicity oracle");
  order->add_option("--method", order_methods,
                    "method preset (repeatable; default a b c d)");
  order->add_option("--h-num", order_h_nums,
                    "n in h = 2*pi/n (repeatable; default 64 100 200 400 800)");
  add_common(order, order_args);

  CommonArgs equiv_args;
  std::vector<std::string> equiv_methods;
  auto* equiv = app.add_subcommand(
      "equivalence",
      "per-step differences between a reference method and variants");
  equiv->add_option("--method", equiv_methods,
                    "first is the reference (default: b b1 b2)");
  equiv->add_option("--h-num", equiv_args.h_num, "n in h = 2*pi/n");
  add_common(equiv, equiv_args);
  equiv_args.integrals = "1,2";

  CommonArgs interr_args;
  std::string interr_method = "b1";
  auto* interr = app.add_subcommand(
      "integrals", "per-step integral errors |I_m(x_n) - I_m(x_0)|");
  interr->add_option("--method", interr_method, "method preset name");
  interr->add_option("--h-num", interr_args.h_num, "n in h = 2*pi/n");
  add_common(interr, interr_args);
  interr_args.integrals = "1,2";

  CLI11_PARSE(app, argc, argv);

  try {
    const OdeSystem kepler = kepler_system();

    if (*integrate) {
      const CommonArgs& a = integrate_args;
      const StateVector x0 = kepler_initial({a.eccentricity});
      const Integrator method =
          make_preset(integrate_method, kepler, preset_options(a));
      const double h = 2.0 * std::numbers::pi / a.h_num;
      const auto rec = run_trajectory(
          method, kepler, x0, h,
          static_cast<std::size_t>(a.h_num) * a.periods);
      std::ofstream file;
      write_trajectory_csv(open_output(a.out, file), rec);
      if (rec.failure) return report_failure(*rec.failure);
    } else if (*order) {
      const CommonArgs& a = order_args;
      if (order_methods.empty()) order_methods = {"a", "b", "c", "d"};
      if (order_h_nums.empty()) order_h_nums = {64, 100, 200, 400, 800};
      const StateVector x0 = kepler_initial({a.eccentricity});
      std::vector<Integrator> methods;
      for (const std::string& name : order_methods)
        methods.push_back(make_preset(name, kepler, preset_options(a)));
      const auto rows =
          order_study(methods, kepler, x0, order_h_nums, a.periods);
      std::ofstream file;
      write_order_csv(open_output(a.out, file), rows);
    } else if (*equiv) {
      const CommonArgs& a = equiv_args;
      if (equiv_methods.empty()) equiv_methods = {"b", "b1", "b2"};
      if (equiv_methods.size() < 2)
        throw CLI::ValidationError("equivalence needs a reference and at least one variant");
      const StateVector x0 = kepler_initial({a.eccentricity});
      const Integrator reference =
          make_preset(equiv_methods.front(), kepler, preset_options(a));
      std::vector<Integrator> variants;
      for (std::size_t i = 1; i < equiv_methods.size(); ++i)
        variants.push_back(make_preset(equiv_methods[i], kepler, preset_options(a)));
      const double h = 2.0 * std::numbers::pi / a.h_num;
      const auto series = equivalence_study(
          reference, variants, kepler, x0, h,
          static_cast<std::size_t>(a.h_num) * a.periods);
      std::ofstream file;
      write_equivalence_csv(open_output(a.out, file), h, series);
    } else if (*interr) {
      const CommonArgs& a = interr_args;
      const StateVector x0 = kepler_initial({a.eccentricity});
      const PresetOptions opts = preset_options(a);
      const Integrator method = make_preset(interr_method, kepler, opts);
      const double h = 2.0 * std::numbers::pi / a.h_num;
      // Record against the method's own preserved subset.
      const OdeSystem record = subsystem(kepler, opts.integral_indices);
      const auto series = integral_error_study(
          method, record, x0, h,
          static_cast<std::size_t>(a.h_num) * a.periods);
      std::ofstream file;
      write_integral_error_csv(open_output(a.out, file), series);
    }
  } catch (const firstint::SolverDiverged& e) {
    std::cerr << "error=SolverDiverged step=" << e.step_index
              << " residual=" << e.last_residual << " message=\"" << e.what()
              << "\"\n";
    return 2;
  } catch (const firstint::Error& e) {
    std::cerr << "error=IntegrationError message=\"" << e.what() << "\"\n";
    return 2;
  }
  return 0;
}
