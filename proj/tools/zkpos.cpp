// Command-line front end. Exit codes: 0 accept / pass, 1 reject / fail,
// 2 configuration or usage error.
#include <omp.h>

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "zkpos/cli/acceptance.hpp"
#include "zkpos/cli/commands.hpp"

using namespace zkpos;
using namespace zkpos::cli;

namespace {

struct RunFlags {
  std::string config;
  OutputPaths out;
  std::size_t axis = 0;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--config", f.config, "scenario JSON")->required();
  cmd->add_option("--log", f.out.log, "NDJSON event log (overrides outputs.log)");
  cmd->add_option("--svg", f.out.svg, "spacetime diagram (overrides outputs.svg)");
  cmd->add_option("--verdict", f.out.verdict, "verdict JSON (overrides outputs.verdict)");
  cmd->add_option("--profile", f.out.profile, "per-tick work CSV (overrides outputs.profile)");
  cmd->add_option("--axis", f.axis, "projection axis of the diagram");
}

OutputPaths merged(const OutputPaths& from_config, const OutputPaths& flags) {
  OutputPaths o = from_config;
  if (!flags.log.empty()) o.log = flags.log;
  if (!flags.svg.empty()) o.svg = flags.svg;
  if (!flags.verdict.empty()) o.verdict = flags.verdict;
  if (!flags.profile.empty()) o.profile = flags.profile;
  return o;
}

int finish_run(const RunArtifacts& a, const ScenarioConfig& cfg, const RunFlags& f) {
  write_artifacts(a, merged(cfg.outputs, f.out), f.axis);
  std::cout << a.verdict.dump() << "\n";
  return a.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Position verification, position commitments and zero-knowledge position verification"};
  app.require_subcommand(1);
  int jobs = 0;
  app.add_option("--jobs", jobs, "threads for independent trials (default: OpenMP's choice)");

  RunFlags pv_flags, commit_flags, opt_flags, zk_flags;
  auto* pv_cmd = app.add_subcommand("pv", "singleton f-BB84 position verification")->require_subcommand(1);
  add_run_flags(pv_cmd->add_subcommand("run", "run the protocol on a scenario"), pv_flags);

  auto* pc_cmd = app.add_subcommand("pc", "position commitment (Encrypt-Then-Verify)")->require_subcommand(1);
  auto* commit_cmd = pc_cmd->add_subcommand("commit", "run Commit and store rho and the opening");
  add_run_flags(commit_cmd, commit_flags);
  std::string state_path, opening_path;
  commit_cmd->add_option("--state", state_path, "where to write rho (overrides outputs.state)");
  commit_cmd->add_option("--opening", opening_path, "where to write the opening (overrides outputs.opening)");
  auto* reveal_cmd = pc_cmd->add_subcommand("reveal", "run Reveal on a stored commitment");
  std::string reveal_state, reveal_opening, reveal_verdict;
  std::size_t reveal_alpha = 0;
  reveal_cmd->add_option("--state", reveal_state, "rho written by pc commit")->required();
  reveal_cmd->add_option("--opening", reveal_opening, "opening written by pc commit")->required();
  reveal_cmd->add_option("--alpha", reveal_alpha, "claimed index into S")->required();
  reveal_cmd->add_option("--verdict", reveal_verdict, "verdict JSON");

  auto* opt_cmd = app.add_subcommand("pc-opt", "optimized position commitment")->require_subcommand(1);
  add_run_flags(opt_cmd->add_subcommand("run", "commit to a mesh point and reveal it"), opt_flags);

  auto* zk_cmd = app.add_subcommand("zkpv", "zero-knowledge position verification")->require_subcommand(1);
  add_run_flags(zk_cmd->add_subcommand("run", "commit, prove membership in R, verify"), zk_flags);

  auto* attack_cmd = app.add_subcommand("attack", "spoofer and malicious-verifier strategies")->require_subcommand(1);
  auto* attack_run = attack_cmd->add_subcommand("run", "measure one named attack");
  std::string attack_name, attack_report, attack_config;
  std::uint64_t attack_trials = 1000, attack_seed = 0;
  attack_run->add_option("--name", attack_name, "attack id")->required()->check(CLI::IsMember(attack_names()));
  attack_run->add_option("--trials", attack_trials, "independent trials")->required();
  attack_run->add_option("--seed", attack_seed, "base seed")->required();
  attack_run->add_option("--report", attack_report, "report JSON");
  attack_run->add_option("--config", attack_config, "scenario overriding the built-in geometry");

  auto* report_cmd = app.add_subcommand("report", "acceptance suite")->require_subcommand(1);
  auto* acceptance_cmd = report_cmd->add_subcommand("acceptance", "run every criterion and print a pass/fail table");
  AcceptanceOptions acc;
  acc.scenario_dir = ZKPOS_SCENARIO_DIR;
  acceptance_cmd->add_option("--only", acc.only, "criterion ids to run");
  acceptance_cmd->add_option("--scenarios", acc.scenario_dir, "bundled scenario directory");

  auto* config_cmd = app.add_subcommand("config", "scenario files")->require_subcommand(1);
  auto* check_cmd = config_cmd->add_subcommand("check", "validate and print the normalized config");
  std::string check_path;
  check_cmd->add_option("--config", check_path, "scenario JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitAccept : kExitConfig;
  }
  if (jobs > 0) omp_set_num_threads(jobs);

  try {
    if (pv_cmd->parsed()) {
      const auto cfg = load_config(pv_flags.config);
      return finish_run(run_pv(cfg), cfg, pv_flags);
    }
    if (commit_cmd->parsed()) {
      const auto cfg = load_config(commit_flags.config);
      const auto c = run_pc_commit(cfg);
      const std::string sp = state_path.empty() ? cfg.outputs.state : state_path;
      const std::string op = opening_path.empty() ? cfg.outputs.opening : opening_path;
      if (!sp.empty()) {
        const auto bytes = c.rho.serialize();
        write_file(sp, std::string(bytes.begin(), bytes.end()));
      }
      if (!op.empty() && c.opening) {
        const auto bytes = c.opening->serialize();
        write_file(op, std::string(bytes.begin(), bytes.end()));
      }
      return finish_run(c.run, cfg, commit_flags);
    }
    if (reveal_cmd->parsed()) {
      pc::CommitmentState rho;
      pc::Opening opening;
      try {
        const auto s = cli::read_file(reveal_state), o = cli::read_file(reveal_opening);
        rho = pc::CommitmentState::parse(Bytes(s.begin(), s.end()));
        opening = pc::Opening::parse(Bytes(o.begin(), o.end()));
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
      }
      const auto a = run_pc_reveal(rho, reveal_alpha, opening);
      if (!reveal_verdict.empty()) write_file(reveal_verdict, a.verdict.dump(2) + "\n");
      std::cout << a.verdict.dump() << "\n";
      return a.exit_code();
    }
    if (opt_cmd->parsed()) {
      const auto cfg = load_config(opt_flags.config);
      return finish_run(run_pcopt(cfg), cfg, opt_flags);
    }
    if (zk_cmd->parsed()) {
      const auto cfg = load_config(zk_flags.config);
      return finish_run(run_zkpv(cfg), cfg, zk_flags);
    }
    if (attack_run->parsed()) {
      std::optional<ScenarioConfig> cfg;
      if (!attack_config.empty()) cfg = load_config(attack_config);
      const auto r = run_named_attack(attack_name, attack_trials, attack_seed, cfg ? &*cfg : nullptr);
      const auto j = report_json(r);
      if (!attack_report.empty()) write_file(attack_report, j.dump(2) + "\n");
      std::cout << j.dump() << "\n";
      return kExitAccept;
    }
    if (acceptance_cmd->parsed()) {
      bool all = true;
      run_acceptance(acc, [&](const CriterionResult& r) {
        std::cout << format_line(r) << std::endl;
        all = all && r.pass;
      });
      return all ? kExitAccept : kExitReject;
    }
    if (check_cmd->parsed()) {
      const auto cfg = load_config(check_path);
      std::cout << to_json(cfg).dump(2) << "\n";
      return kExitAccept;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error at " << (e.pointer().empty() ? "/" : e.pointer()) << ": " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    // Protocol-level validation (geometry, parameters) of a schema-valid file.
    std::cerr << "invalid scenario: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
