#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "zkpos/crypto/circuit.hpp"
#include "zkpos/crypto/commitment.hpp"
#include "zkpos/kernels/mpc.hpp"

// Honest-verifier zero-knowledge proof of circuit satisfiability by
// three-party MPC in the head. The prover commits to all three views with the
// Naor commitment (to a 128-bit digest of each view), the verifier sends one
// challenge e in {0,1,2} per repetition, and the prover opens views e and
// e+1. Soundness error per repetition is 2/3.
namespace zkpos::crypto {

constexpr std::size_t kViewDigestBits = 128;

/// Verifier-sampled commitment parameters for view digests.
PublicParams zk_setup(int lambda_com, Rng& rng);

struct ZkRepCommit {
  std::array<Commitment, 3> view_commitments;
  std::array<std::uint8_t, 3> output_shares{};
};

struct OpenedView {
  kernels::PartyView view;
  Bits com_randomness;  ///< lambda_com bits per digest bit
};

struct ZkRepetition {
  ZkRepCommit commit;
  std::uint8_t challenge = 0;
  std::array<OpenedView, 2> opened;  ///< parties e and e+1
};

struct ZkProof {
  std::vector<ZkRepetition> reps;

  Bytes serialize() const;
  static ZkProof parse(std::span<const std::uint8_t> bytes);
};

enum class ZkCheat {
  kNone,
  /// Flip one uniformly chosen party's AND output at the output gate, so the
  /// output shares XOR to 1 even for an unsatisfying witness.
  kFlipOutputShare,
};

Digest view_digest(const kernels::PartyView& v, std::size_t n_inputs, std::size_t n_and);

class ZkProver {
 public:
  /// Throws CryptoError if the witness does not satisfy the circuit and no
  /// cheat is selected.
  ZkProver(const Circuit& c, Bits witness, PublicParams pp, int reps, std::uint64_t seed,
           ZkCheat cheat = ZkCheat::kNone, kernels::Kernel kernel = kernels::Kernel::kPacked);

  const std::vector<ZkRepCommit>& commit();
  ZkProof respond(std::span<const std::uint8_t> challenges);

 private:
  const Circuit& c_;
  Bits witness_;
  PublicParams pp_;
  int reps_;
  std::uint64_t seed_;
  ZkCheat cheat_;
  kernels::Kernel kernel_;
  std::vector<kernels::RepTranscript> transcripts_;
  std::vector<std::array<Bits, 3>> com_randomness_;
  std::vector<ZkRepCommit> commits_;
};

std::vector<std::uint8_t> zk_challenges(int reps, Rng& rng);

ZkProof zk_prove(const Circuit& c, const Bits& witness, const PublicParams& pp, std::span<const std::uint8_t> challenges,
                 std::uint64_t seed, ZkCheat cheat = ZkCheat::kNone, kernels::Kernel kernel = kernels::Kernel::kPacked);

/// Malformed proofs are rejected, never thrown.
bool zk_verify(const Circuit& c, const PublicParams& pp, const ZkProof& proof, std::span<const std::uint8_t> challenges,
               kernels::Kernel kernel = kernels::Kernel::kPacked);

/// Transcript simulator: fixes each challenge first, fabricates the two
/// opened views and commits to a random digest for the third.
ZkProof zk_simulate(const Circuit& c, const PublicParams& pp, std::span<const std::uint8_t> challenges,
                    std::uint64_t seed);

}  // namespace zkpos::crypto
