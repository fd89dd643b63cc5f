// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
// Exit status 0 iff every selected criterion passed.
#include <CLI11.hpp>
#include <iostream>

#include "zkpos/cli/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  zkpos::cli::AcceptanceOptions opt;
  opt.scenario_dir = ZKPOS_SCENARIO_DIR;
  app.add_option("--only", opt.only, "criterion ids to run");
  app.add_option("--scenarios", opt.scenario_dir, "bundled scenario directory");
  CLI11_PARSE(app, argc, argv);
  int failed = 0;
  zkpos::cli::run_acceptance(opt, [&](const zkpos::cli::CriterionResult& r) {
    std::cout << zkpos::cli::format_line(r) << std::endl;
    failed += !r.pass;
  });
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << std::endl;
  return failed ? 1 : 0;
}
