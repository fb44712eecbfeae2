#include <iostream>
#include <stdexcept>

#include <CLI11.hpp>

#include "commands.hpp"
#include "invbal/analysis.hpp"
#include "invbal/choice.hpp"
#include "invbal/io.hpp"
#include "invbal/policy.hpp"

namespace {

constexpr int kUserError = 2;
constexpr int kInternalError = 3;

void add_common(CLI::App* sub, invbal::cli::Common& common, bool with_replications = true) {
  sub->add_flag("--deterministic", common.deterministic, "Omit the timestamp header");
  sub->add_option("--seed", common.seed, "Base seed");
  if (with_replications) sub->add_option("--replications", common.replications, "Number of replications");
  sub->add_option("--out", common.out, "Output file (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace invbal::cli;

  CLI::App app{"Batched inventory balancing workbench"};
  app.require_subcommand(1);
  Common common;

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo run of the policies in a config");
  simulate_cmd->add_option("--config", sim.config, "Experiment config (JSON)")->check(CLI::ExistingFile);
  simulate_cmd->add_option("--instance", sim.instance, "Instance file; overrides the config scenario")
      ->check(CLI::ExistingFile);
  simulate_cmd->add_option("--policy", sim.policies, "KIND or BIB:GAMMA; repeatable, overrides the config");
  simulate_cmd->add_option("--psi", sim.psi, "Penalty for --policy: exponential, identity, step, tabulated:x:y,...");
  add_common(simulate_cmd, common);

  ReproduceArgs rep;
  auto* reproduce_cmd = app.add_subcommand("reproduce", "Regenerate a published table with deviations");
  reproduce_cmd->add_option("table", rep.table, "Table id")
      ->required()
      ->check(CLI::IsMember({"stylized", "random", "random-negative", "random-geometric", "cr-upper-bounds"}));
  reproduce_cmd->add_option("--n0", rep.n0, "Stylized n0");
  reproduce_cmd->add_option("--c", rep.c, "Stylized c (Gbar c for cr-upper-bounds)");
  reproduce_cmd->add_option("--c-sweep", rep.cs, "c values for cr-upper-bounds")->delimiter(',');
  reproduce_cmd->add_option("--gamma", rep.gamma, "BIB batch threshold");
  add_common(reproduce_cmd, common);

  IapArgs iap;
  auto* iap_cmd = app.add_subcommand("iap", "Interval assignment solver");
  iap_cmd->require_subcommand(1);
  auto* iap_solve_cmd = iap_cmd->add_subcommand("solve", "Label intervals and list chains");
  auto* iap_check_cmd = iap_cmd->add_subcommand("check", "Check the three properties of given labels");
  for (auto* sub : {iap_solve_cmd, iap_check_cmd}) {
    sub->add_option("input", iap.input, "\"a b\" (solve) or \"a b label\" (check) per line")->required();
    sub->add_flag("--json", iap.json, "JSON output");
    add_common(sub, common, false);
  }

  BoundArgs bnd;
  auto* bound_cmd = app.add_subcommand("bound", "Competitive-ratio bound table");
  bound_cmd->add_option("--psi", bnd.psi, "Penalty: exponential, identity, step, tabulated:x:y,...");
  bound_cmd->add_option("--gamma", bnd.gammas, "Batch threshold(s)")->delimiter(',');
  bound_cmd->add_option("--c0", bnd.c0s, "Smallest initial inventory, one or more")->delimiter(',')->required();
  bound_cmd->add_flag("--sqrt-gamma", bnd.sqrt_gamma, "Use gamma = ceil(sqrt(c0)) for each c0");
  bound_cmd->add_flag("--deterministic", common.deterministic, "Omit the timestamp header");
  bound_cmd->add_option("--out", common.out, "Output file (default: stdout)");

  RunArgs lp;
  RunArgs cert;
  auto* lp_cmd = app.add_subcommand("lp-benchmark", "Solve the batch-specified LP for BIB runs");
  auto* certify_cmd = app.add_subcommand("certify", "Dual certificate for BIB runs");
  for (auto [sub, args] : {std::pair{lp_cmd, &lp}, std::pair{certify_cmd, &cert}}) {
    sub->add_option("--instance", args->instance, "Instance file")->check(CLI::ExistingFile);
    sub->add_option("--config", args->config, "Experiment config; its scenario supplies the instances")
        ->check(CLI::ExistingFile);
    sub->add_option("--psi", args->psi, "Penalty");
    sub->add_option("--gamma", args->gamma, "BIB batch threshold")->check(CLI::PositiveNumber);
    add_common(sub, common);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUserError;
  }

  try {
    if (*simulate_cmd) return simulate(common, sim);
    if (*reproduce_cmd) return reproduce(common, rep);
    if (*iap_solve_cmd) return iap_solve(common, iap);
    if (*iap_check_cmd) return iap_check(common, iap);
    if (*bound_cmd) return bound(common, bnd);
    if (*lp_cmd) return lp_benchmark(common, lp);
    if (*certify_cmd) return certify(common, cert);
  } catch (const invbal::io::ConfigError& e) {
    std::cerr << "error: invalid config\n";
    for (const auto& d : e.diagnostics()) std::cerr << "  " << d << '\n';
    return kUserError;
  } catch (const invbal::io::UserError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUserError;
  } catch (const invbal::InstanceTooLarge& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUserError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUserError;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUserError;
  } catch (const invbal::InvariantViolation& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternalError;
  } catch (const invbal::LpNumericalFailure& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternalError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kUserError;
}
