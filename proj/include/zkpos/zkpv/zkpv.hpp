#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "zkpos/crypto/circuit.hpp"
#include "zkpos/crypto/zk.hpp"
#include "zkpos/pc/commit.hpp"

namespace zkpos::zkpv {

using sim::SpatialPoint;
using sim::Time;

class ZkpvError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Reveal_R as a circuit over the witness (sk, r). Everything that depends
/// only on public data (timestamps, expected bits b from s, membership in R,
/// delivery of c) is evaluated outside and baked in as constants.
struct RevealStatement {
  crypto::Circuit circuit;
  crypto::Digest hash{};
  std::vector<std::size_t> region;
  std::vector<std::uint8_t> timing_ok;  ///< per alpha: every entry present and on time
  bool commitment_delivered = false;
  std::size_t witness_bits = 0;
};

/// Throws ZkpvError when R is empty, not a subset of S, or rho is malformed.
RevealStatement compile_reveal_circuit(const pc::CommitmentState& rho, std::span<const std::size_t> region);

/// sk followed by r.
Bits reveal_witness(const pc::Opening& opening);

struct WitnessSearch {
  std::uint64_t keys_tried = 0;
  /// (sk, r) pairs consistent with c; each one is evaluated on the circuit.
  std::uint64_t com_consistent = 0;
  std::uint64_t satisfying = 0;
};

/// Exhaustive search of the whole 2^(kappa + lambda*kappa) witness space.
/// The commitment check factors per key bit, so for each sk only the r
/// blocks that reproduce c are enumerated; everything else fails the
/// circuit's commitment subcircuit. Limited to kappa <= 16, lambda <= 8.
WitnessSearch exhaustive_witness_search(const pc::CommitmentState& rho, const RevealStatement& st);

struct ZkpvOptions {
  int reps = 40;
  crypto::ZkCheat cheat = crypto::ZkCheat::kFlipOutputShare;  ///< used when the prover has no witness
  kernels::Kernel kernel = kernels::Kernel::kPacked;
  bool record_log = false;
  /// Malicious-verifier hook forwarded to the commit phase.
  std::vector<SpatialPoint> suppressed_targets;
};

struct ZkpvVerdict {
  bool accept = false;
  bool commit_ran = false;
  bool prover_had_witness = false;
  bool hash_match = false;
  std::size_t and_gates = 0;
  crypto::Digest circuit_hash{};
  pc::CommitmentState rho;
  crypto::PublicParams zk_pp;
  std::vector<std::uint8_t> challenges;
  crypto::ZkProof proof;
  std::vector<sim::Event> log;
};

/// Commit phase with an honest committer at S[alpha] (nullopt: no prover),
/// rho handed to the prover, both sides compile the statement and compare
/// circuit hashes, then the ZK proof with honest-verifier challenges. The
/// prover proves honestly when its opening satisfies the circuit and runs
/// the canonical cheat otherwise.
ZkpvVerdict zk_position_verify(const pc::CommitScenario& sc, std::span<const std::size_t> region,
                               std::optional<std::size_t> alpha, std::uint64_t seed, const ZkpvOptions& options = {});

/// Verifier view at tau. Up to t_final it is the commit view; afterwards it
/// also holds the circuit hash, the challenges and the proof.
struct ZkpvView {
  pc::VerifierView commit;
  std::optional<crypto::Digest> circuit_hash;
  std::vector<std::uint8_t> challenges;
  std::optional<crypto::ZkProof> proof;
};

ZkpvView real_view(const ZkpvVerdict& v, Time tau);

/// Sim_C for tau <= t_final; afterwards Sim_C's full rho' compiled and fed
/// to the HVZK transcript simulator.
ZkpvView zkpv_simulator(const crypto::PublicParams& pp, const pc::CommitScenario& sc,
                        std::span<const std::size_t> region, int reps, Time tau, std::uint64_t seed);

struct StatTest {
  std::string name;
  double statistic = 0;
  double p_value = 1;
  bool pass = true;
};

struct DistinguisherReport {
  bool structural_equal = false;
  std::vector<StatTest> tests;
  double threshold = 0;  ///< Bonferroni-corrected per-test level
  bool pass = false;
};

/// Structural equality of view shapes, then per-set monobit, per-position
/// and runs tests on the pseudorandom bits (ciphertext bodies, the
/// commitment string, proof view commitments), plus two-sample monobit and
/// per-position tests between the sets. Needs >= 100 views per side.
DistinguisherReport distinguisher_suite(std::span<const ZkpvView> a, std::span<const ZkpvView> b,
                                        double alpha = 0.01);

/// Commit-only views.
DistinguisherReport distinguisher_suite(std::span<const pc::VerifierView> a, std::span<const pc::VerifierView> b,
                                        double alpha = 0.01);

}  // namespace zkpos::zkpv
