#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zkpos/attacks/attacks.hpp"
#include "zkpos/cli/config.hpp"
#include "zkpos/cli/svg.hpp"

namespace zkpos::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode : int { kExitAccept = 0, kExitReject = 1, kExitConfig = 2 };

/// Everything a pipeline run produces; write_artifacts puts it on disk.
struct RunArtifacts {
  bool accept = false;
  nlohmann::ordered_json verdict;
  std::vector<sim::Event> log;
  std::vector<SvgParty> parties;
  std::string profile_csv;
  std::size_t causality_violations = 0;

  int exit_code() const { return accept ? kExitAccept : kExitReject; }
};

/// Singleton f-BB84 against an honest prover at S[prover] (or none).
RunArtifacts run_pv(const ScenarioConfig& cfg);

struct CommitArtifacts {
  RunArtifacts run;
  pc::CommitmentState rho;
  std::optional<pc::Opening> opening;
};
/// Encrypt-Then-Verify Commit with an honest committer at S[prover] (or none). `accept`
/// means the commitment string reached the verifiers.
CommitArtifacts run_pc_commit(const ScenarioConfig& cfg);
RunArtifacts run_pc_reveal(const pc::CommitmentState& rho, std::size_t alpha, const pc::Opening& opening);

/// Optimized scheme: honest commit to mesh point params.mesh_target, then
/// reveal it. The profile is per-tick primitive-op counts.
RunArtifacts run_pcopt(const ScenarioConfig& cfg);

/// Commit, compile, prove, verify.
RunArtifacts run_zkpv(const ScenarioConfig& cfg);

/// Dispatches on cfg.protocol; "pc" is commit followed by reveal at the
/// prover's point.
RunArtifacts run_scenario(const ScenarioConfig& cfg);

/// Writes whichever of log, svg, verdict and profile have a path.
void write_artifacts(const RunArtifacts& a, const OutputPaths& out, std::size_t axis = 0);

/// Named attacks. Unknown names throw AttackError.
std::vector<std::string> attack_names();
attacks::AttackReport run_named_attack(const std::string& name, std::uint64_t trials, std::uint64_t seed,
                                       const ScenarioConfig* cfg = nullptr);
nlohmann::ordered_json report_json(const attacks::AttackReport& r);

void write_file(const std::string& path, const std::string& data);
std::string read_file(const std::string& path);

}  // namespace zkpos::cli
