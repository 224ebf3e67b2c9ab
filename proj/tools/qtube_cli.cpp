#include <iostream>
#include <stdexcept>

#include "CLI11.hpp"
#include "cli_commands.hpp"
#include "qtube/errors.hpp"

using namespace qtube::cli;

namespace {

std::map<std::string, std::string> collect_flags(const CLI::App& sub) {
  std::map<std::string, std::string> flags;
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->count() == 0 || opt->get_name() == "--help") continue;
    std::string value;
    for (const std::string& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    flags[opt->get_name()] = value.empty() ? "true" : value;
  }
  return flags;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Support and quantile tubes with generalization bounds"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a support, quantile or multi-quantile tube to a CSV file");
  fit_cmd->add_option("--input", fit.input, "CSV with header x1,...,xd,y")->required();
  fit_cmd->add_option("--kind", fit.kind, "support | quantile | multi")->capture_default_str();
  fit_cmd->add_option("--C", fit.C, "Exclusion budget(s), comma separated for multi")->delimiter(',');
  fit_cmd->add_option("--features", fit.features, "affine | intercept | rbf:<k>")->capture_default_str();
  fit_cmd->add_flag("--symmetric", fit.symmetric, "Equal upper and lower increments (multi)");
  fit_cmd->add_option("--out", fit.out, "Model JSON path (default: standard output)");
  fit_cmd->add_option("--plot", fit.plot, "Write boundary curves on a 200-point x-grid as CSV");

  BoundsArgs bounds;
  auto* bounds_cmd = app.add_subcommand("bounds", "Evaluate a generalization bound");
  bounds_cmd->add_option("--kind", bounds.kind, "compression | orderstat | hull | qt")->capture_default_str();
  bounds_cmd->add_option("--n", bounds.n, "Training sample size")->required();
  bounds_cmd->add_option("--D", bounds.D, "Compression size")->capture_default_str();
  bounds_cmd->add_option("--delta", bounds.delta, "Confidence parameter")->capture_default_str();
  bounds_cmd->add_option("--mode", bounds.mode, "exact | loose tube counting")->capture_default_str();
  bounds_cmd->add_option("--variant", bounds.variant, "corrected | verbatim (qt only)")->capture_default_str();
  bounds_cmd->add_option("--out", bounds.out, "Report JSON path (default: standard output)");

  MiArgs mi;
  auto* mi_cmd = app.add_subcommand("mi", "Lower-bound the mutual information from a support tube");
  mi_cmd->add_option("--input", mi.input, "CSV with header x1,...,xd,y")->required();
  mi_cmd->add_option("--delta", mi.delta, "Confidence parameter")->capture_default_str();
  mi_cmd->add_option("--hy", mi.hy, "Known H(Y) in nats (default: spacing estimate)");
  mi_cmd->add_option("--features", mi.features, "affine | intercept | rbf:<k>")->capture_default_str();
  mi_cmd->add_option("--mode", mi.mode, "exact | loose tube counting")->capture_default_str();
  mi_cmd->add_option("--out", mi.out, "Report JSON path (default: standard output)");

  HullArgs hull;
  auto* hull_cmd = app.add_subcommand("hull", "Planar convex hull and separating tubes");
  hull_cmd->add_option("--input", hull.input, "CSV with header x1,y")->required();
  hull_cmd->add_option("--point", hull.point, "x,y to test and separate")->delimiter(',')->expected(2);
  hull_cmd->add_option("--delta", hull.delta, "Confidence parameter for the mass bound")->capture_default_str();
  hull_cmd->add_option("--polygon", hull.polygon_csv, "Write hull vertices as CSV");
  hull_cmd->add_option("--out", hull.out, "Report JSON path (default: standard output)");

  ValidateArgs val;
  auto* val_cmd = app.add_subcommand("validate", "Monte Carlo check of a bound on synthetic data");
  val_cmd->add_option("--bound", val.bound, "compression | orderstat | hull | qt | mi")->capture_default_str();
  val_cmd->add_option("--gen", val.gen, "Generator spec, e.g. linear:slope=2,u=0.25")->capture_default_str();
  val_cmd->add_option("--n", val.n, "Training size per trial")->capture_default_str();
  val_cmd->add_option("--n-eval", val.n_eval, "Held-out draws per trial")->capture_default_str();
  val_cmd->add_option("--trials", val.trials, "Number of trials")->capture_default_str();
  val_cmd->add_option("--delta", val.delta, "Confidence parameter")->capture_default_str();
  val_cmd->add_option("--seed", val.seed, "Base seed; trial i uses seed + i")->capture_default_str();
  val_cmd->add_option("--features", val.features, "affine | intercept | rbf:<k>")->capture_default_str();
  val_cmd->add_option("--mode", val.mode, "exact | loose tube counting")->capture_default_str();
  val_cmd->add_option("--C", val.C, "Exclusion budget (qt)");
  val_cmd->add_option("--threads", val.threads, "Worker threads (0 = all cores)")->capture_default_str();
  val_cmd->add_option("--out", val.out, "Report JSON path");
  val_cmd->add_option("--csv", val.csv, "Per-trial CSV path");

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic dataset as CSV");
  gen_cmd->add_option("--gen", gen.gen, "Generator spec")->capture_default_str();
  gen_cmd->add_option("--n", gen.n, "Number of samples")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "CSV path (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    RunManifest m;
    m.command = sub->get_name();
    m.flags = collect_flags(*sub);
    m.timestamp = utc_timestamp();
    if (sub == fit_cmd) return run_fit(fit, m);
    if (sub == bounds_cmd) return run_bounds(bounds, m);
    if (sub == mi_cmd) return run_mi(mi, m);
    if (sub == hull_cmd) return run_hull(hull, m);
    if (sub == val_cmd) return run_validate(val, m);
    if (sub == gen_cmd) return run_generate(gen);
  } catch (const qtube::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const qtube::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kSolver;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  }
  return kUsage;
}
