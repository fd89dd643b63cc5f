#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "zkpos/kernels/trials.hpp"
#include "zkpos/pc/commit.hpp"
#include "zkpos/pv/fbb84.hpp"

// Spoofer coalitions against f-BB84, its deliberately weakened variants and
// the commitment built on it. Success rates measured here are specific to
// the strategies implemented; they are not security levels of the protocols.
namespace zkpos::attacks {

using sim::Rational;
using sim::SpatialPoint;

class AttackError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// f-BB84 with V1's qubit replaced by the bit b sent in the clear.
class ClassicalScheme final : public pv::ChallengeScheme {
 public:
  int basis(std::span<const Bits> xs) const override { return pv::f(xs); }
  bool quantum() const override { return false; }
};

/// Plain BB84: the basis is the first bit of the last verifier's string.
class PlainBb84Scheme final : public pv::ChallengeScheme {
 public:
  int basis(std::span<const Bits> xs) const override { return xs.back().at(0) & 1; }
};

const pv::ChallengeScheme& classical_scheme();
const pv::ChallengeScheme& plain_bb84_scheme();

enum class Strategy {
  /// Forward every classical challenge (b included) to the partner.
  kCopy,
  /// Measure the qubit in the computational basis at once, forward the bit.
  kInterceptResend,
  /// Teleport the qubit through a pre-shared EPR pair: the qubit holder
  /// Bell-measures, the far member measures its half in the basis it can
  /// compute locally (unknown strings taken as zero). Rounds without a pair
  /// fall back to intercept-resend.
  kTeleport,
};

const char* to_string(Strategy s);

/// Members sit outside the allowed region. Each verifier is answered by the
/// member nearest to it; the member nearest V1 holds the first EPR half.
struct SpooferCoalition {
  std::vector<SpatialPoint> members;
  Strategy strategy = Strategy::kCopy;
  int epr_budget = 0;  ///< E: EPR pairs the members may share
  std::uint64_t notes_seed = 0;  ///< shared classical notes fixed in advance
};

/// Filled in while a coalition runs.
struct CoalitionLedger {
  std::uint64_t epr_used = 0;
  std::uint64_t notes_sent = 0;
  std::uint64_t responses_sent = 0;
};

/// Spoofer programs for a singleton PV instance; every member intercepts.
/// Throws AttackError when a member sits at the target point.
std::vector<pv::PartySpec> make_pv_coalition(const pv::PvInstance& inst, const SpooferCoalition& co,
                                             const pv::ChallengeScheme& scheme,
                                             std::shared_ptr<CoalitionLedger> ledger);

/// Attack results, as written to report files.
struct AttackReport {
  std::string name;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double rate = 0;
  std::pair<double, double> ci95{0, 1};
  /// Per-round tallies across all trials (multi-round runs).
  std::uint64_t rounds = 0;
  std::uint64_t rounds_won = 0;
  std::uint64_t epr_budget = 0;
  std::uint64_t epr_used_max = 0;  ///< largest per-trial make_epr count

  static AttackReport from(std::string name, const kernels::TrialStats& stats);
  double round_rate() const { return rounds ? static_cast<double>(rounds_won) / static_cast<double>(rounds) : 0.0; }
};

/// d = 1 geometry shared by the PV attacks: verifiers at v0 < v1, target L
/// at time max(L - v0, v1 - L), challenges leaving at time 0.
struct LineSetup {
  Rational v0 = 0;
  Rational v1 = 6;
  Rational L = 3;
  std::vector<Rational> spoofers = {Rational(1), Rational(5)};
  int n = 8;
  int rounds = 1;

  pv::PvInstance instance() const;
  SpooferCoalition coalition(Strategy s, int epr_budget = 0) const;
};

/// Runs `trials` independent PV sessions against the coalition. Trial i
/// uses seed derive_seed(seed, i).
AttackReport run_pv_attack(std::string name, const pv::PvInstance& inst, const SpooferCoalition& co,
                           const pv::ChallengeScheme& scheme, std::uint64_t trials, std::uint64_t seed);

/// Classical variant, copy strategy. With two members they must straddle L
/// (AttackError otherwise); one member is the non-straddling control.
AttackReport classical_copy_attack(const LineSetup& setup, std::uint64_t trials, std::uint64_t seed);

/// Straddling pair, no entanglement, computational-basis measurement.
AttackReport intercept_resend_attack(const LineSetup& setup, std::uint64_t trials, std::uint64_t seed,
                                     const pv::ChallengeScheme& scheme = pv::fbb84_scheme());

/// Straddling pair sharing `epr_budget` pairs (one per round is needed).
AttackReport epr_attack(const LineSetup& setup, const pv::ChallengeScheme& scheme, int epr_budget,
                        std::uint64_t trials, std::uint64_t seed);

/// Malicious verifiers suppress every challenge aimed at the zone and guess
/// "prover in zone" exactly when the ZKPV verdict is reject. The prover is
/// placed uniformly in S; successes count correct guesses.
struct DenialReport {
  AttackReport report;
  std::uint64_t in_zone = 0;
  std::uint64_t in_zone_rejected = 0;
  std::uint64_t out_of_zone = 0;
  std::uint64_t out_of_zone_accepted = 0;
};
DenialReport denial_privacy_attack(const pc::CommitScenario& sc, std::span<const std::size_t> region,
                                   std::span<const std::size_t> zone, int reps, std::uint64_t trials,
                                   std::uint64_t seed);

/// Reveal successes per point of S for one strategy.
struct BindingRow {
  std::string strategy;
  std::size_t alpha = 0;  ///< true point (honest) or claimed point (coalition)
  std::uint64_t trials = 0;
  std::vector<std::uint64_t> successes;  ///< indexed by the revealed point
};

/// Honest committer at alpha; every trial reveals its true opening at every
/// point of S.
BindingRow honest_binding_baseline(const pc::CommitScenario& sc, std::size_t alpha, std::uint64_t trials,
                                   std::uint64_t seed);

/// Intercept-resend coalition that commits as if it were at S[claim], then
/// reveals its opening at every point.
BindingRow intercept_resend_binding(const pc::CommitScenario& sc, std::size_t claim,
                                    std::vector<SpatialPoint> members, std::uint64_t trials, std::uint64_t seed);

/// Honest commit at alpha, then key re-guessing: each try draws sk' != sk,
/// completes it with commitment seeds that reproduce c wherever they exist,
/// and reveals every complete opening at every other point.
struct EquivocationResult {
  std::uint64_t tries = 0;
  std::uint64_t openings = 0;  ///< tries that produced a c-consistent opening
  std::uint64_t successes = 0;
};
EquivocationResult equivocation_attack(const pc::CommitScenario& sc, std::size_t alpha, std::uint64_t tries,
                                       std::uint64_t seed);

}  // namespace zkpos::attacks
