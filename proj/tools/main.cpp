#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "ifes/tarski.hpp"

namespace {

using namespace ifes;
using namespace ifes::app;

struct CommonFlags {
  std::string spec;
  std::string out = "ifes-out";
  std::uint64_t seed = 20240601;
  Overrides overrides;
  std::string mode;
  std::string method;
  bool json = false;
};

void add_solver_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--method", f.method, "banach | tarski-min | tarski-max | tarski-both");
  cmd->add_option("--grid", f.overrides.grid, "grid intervals m (m+1 nodes)")->check(CLI::PositiveNumber);
  cmd->add_option("--levels", f.overrides.levels, "value-grid intervals p")->check(CLI::PositiveNumber);
  cmd->add_option("--mode", f.mode, "pl | usc | lsc");
  cmd->add_option("--tol", f.overrides.tol, "Banach stopping tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", f.overrides.max_iter, "Banach iteration cap")->check(CLI::PositiveNumber);
  cmd->add_option("--relaxation", f.overrides.relaxation, "Banach relaxation weight in (0, 1]")
      ->check(CLI::Range(0.0, 1.0));
}

void add_common_flags(CLI::App* cmd, CommonFlags& f, bool needs_spec) {
  auto* spec = cmd->add_option("--spec", f.spec, "spec file");
  if (needs_spec) spec->required();
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--seed", f.seed, "seed recorded in the report");
  cmd->add_flag("--json", f.json, "print the JSON report instead of the summary");
}

void finish_overrides(CommonFlags& f) {
  if (!f.method.empty()) f.overrides.method = f.method;
  if (!f.mode.empty()) {
    try {
      f.overrides.mode = parse_eval_mode(f.mode);
    } catch (const Error& e) {
      throw SpecError({std::string("--mode: ") + e.what()});
    }
  }
}

LoadedSpec load_with(const CommonFlags& f) {
  LoadedSpec spec = load_spec(f.spec);
  apply(f.overrides, spec.solver);
  return spec;
}

int emit(const Outcome& o, bool json) {
  if (json) {
    std::cout << o.report.dump(2) << "\n";
  } else {
    std::cout << o.summary << "\n";
  }
  return o.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ifes: solver workbench for iterative functional equations"};
  app.require_subcommand(1);
  CommonFlags f;

  auto* solve = app.add_subcommand("solve", "solve a spec and write CSV + report.json");
  add_common_flags(solve, f, true);
  add_solver_flags(solve, f);

  auto* check = app.add_subcommand("check", "evaluate the hypotheses of the chosen method");
  add_common_flags(check, f, true);
  add_solver_flags(check, f);

  std::string solution;
  auto* verify = app.add_subcommand("verify", "recompute residual and class facts from a CSV");
  add_common_flags(verify, f, true);
  verify->add_option("--solution", solution, "CSV with header x,g")->required();
  verify->add_option("--mode", f.mode, "evaluation mode of the CSV (pl | usc | lsc)");

  std::string to = "log";
  std::string output;
  auto* conjugate = app.add_subcommand("conjugate", "write the log-conjugate or reflected spec");
  add_common_flags(conjugate, f, true);
  conjugate->add_option("--to", to, "log | reflect");
  conjugate->add_option("--output", output, "path of the written spec")->required();

  std::string param;
  std::string range;
  bool no_hold_sum = false;
  auto* scan = app.add_subcommand("scan", "tabulate constants and hypothesis flags over a parameter");
  add_common_flags(scan, f, true);
  scan->add_option("--param", param, "lambda.k | delta | M | l.k | L.k")->required();
  scan->add_option("--range", range, "lo:hi:steps")->required();
  scan->add_flag("--no-hold-sum", no_hold_sum, "vary lambda.k alone instead of keeping the sum");

  std::string example_name;
  auto* example = app.add_subcommand("example", "run a bundled example (exmp1, e1, ex2)");
  add_common_flags(example, f, false);
  add_solver_flags(example, f);
  example->add_option("name", example_name, "example name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    finish_overrides(f);
    if (solve->parsed()) {
      return emit(run_solve(load_with(f), f.out, f.seed), f.json);
    }
    if (check->parsed()) {
      const Outcome o = run_check(load_with(f), f.out);
      if (f.json) {
        std::cout << o.report.dump(2) << "\n";
      } else {
        std::cout << o.summary << "\n" << o.report.dump(2) << "\n";
      }
      return o.exit_code;
    }
    if (verify->parsed()) {
      return emit(run_verify(load_with(f), solution, f.overrides.mode, f.out), f.json);
    }
    if (conjugate->parsed()) {
      return emit(run_conjugate(load_with(f), to, output), f.json);
    }
    if (scan->parsed()) {
      return emit(run_scan(load_with(f), param, parse_range(range), !no_hold_sum, f.out), f.json);
    }
    if (example->parsed()) {
      return emit(run_example(example_name, f.overrides, f.out, f.seed), f.json);
    }
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const HypothesisFailure& e) {
    std::cerr << e.what() << "\n";
    return kHypothesisFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
