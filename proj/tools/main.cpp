// Command-line laboratory: one subcommand per experiment, a key=value config,
// and deterministic JSON reports.  Exit codes: 0 pass, 1 check failure under
// --strict, 2 usage or config error, 3 operation-budget exhaustion.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "diomax/common.hpp"
#include "diomax/config.hpp"
#include "diomax/experiments.hpp"
#include "diomax/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "diomax: numerical laboratory for discrete averages and maximal "
      "operators along {Q(x) = lambda}"};
  app.require_subcommand(1);
  // Accept the global flags on either side of the subcommand name.
  app.fallthrough(true);

  std::string config_path;
  std::string out_dir;
  uint64_t seed = 1;
  uint64_t budget = diomax::WorkBudget::kDefaultOps;
  bool json = false, strict = false, no_timestamp = false;
  app.add_option("--config", config_path, "key=value config file");
  app.add_option("--seed", seed, "random stream seed (default 1)");
  app.add_option("--out", out_dir, "directory for JSON/CSV artifacts");
  app.add_option("--budget", budget, "operation budget (elementary steps)");
  app.add_flag("--json", json, "print the full JSON report to stdout");
  app.add_flag("--strict", strict, "exit 1 when any check fails");
  app.add_flag("--no-timestamp", no_timestamp,
               "omit timestamps so identical runs emit identical bytes");

  app.add_subcommand("identities",
                     "divisor-sum and completion identity suite");
  app.add_subcommand("weyl", "Gauss-point calibration and supremum table");
  app.add_subcommand("alpha", "Weyl supremum decay exponent fit");
  app.add_subcommand("error-decay", "truncated-multiplier error decay");
  app.add_subcommand("counterexample",
                     "residue-per-window plan and norm lower bounds");
  app.add_subcommand("lipschitz", "ball-count fits and congruence thinning");
  app.add_subcommand("dsigma", "surface-measure transform backends and decay");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version are clean exits; misuse is 2
  }

  try {
    diomax::Config cfg;
    if (!config_path.empty()) {
      cfg = diomax::Config::parse_file(config_path);
      if (cfg.entries().empty())
        throw diomax::input_error("config: " + config_path +
                                  " contains no keys");
    }
    diomax::ExperimentOptions opt;
    opt.seed = seed;
    opt.out_dir = out_dir;
    opt.budget_ops = budget;
    opt.include_timestamp = !no_timestamp;

    std::string name = app.get_subcommands().front()->get_name();
    diomax::ExperimentReport rep = diomax::run_experiment(name, cfg, opt);
    if (!out_dir.empty())
      diomax::write_report_json(rep, out_dir + "/" + name + "_report.json",
                                opt.include_timestamp);
    if (json)
      std::cout << diomax::report_json_text(rep, opt.include_timestamp);
    else
      std::cout << diomax::report_summary_text(rep);
    return strict && !rep.all_pass() ? 1 : 0;
  } catch (const diomax::budget_error& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return 3;
  } catch (const diomax::input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
