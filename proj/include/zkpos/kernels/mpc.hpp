#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "zkpos/crypto/circuit.hpp"
#include "zkpos/kernels/bitpack.hpp"

// Three-party XOR-sharing evaluation of a circuit ("MPC in the head").
//
// Party i holds a share of every wire. XOR is local, NOT and constants are
// applied by party 0 only, and AND gate g computes
//   z_i = a_i b_i ^ a_{i+1} b_i ^ a_i b_{i+1} ^ R_i[g] ^ R_{i+1}[g]
// with R_i the party's tape, toy_prg keyed by its 128-bit seed.
//
// Two interchangeable implementations: the reference walks one repetition at
// a time; the packed kernel evaluates 64 repetitions per machine word. They
// must produce identical views.
namespace zkpos::kernels {

using Seed = std::array<std::uint8_t, 16>;

struct PartyView {
  Seed seed{};
  PackedBits input_share;  ///< num_inputs bits
  PackedBits and_outputs;  ///< one bit per AND gate, in gate order
  bool operator==(const PartyView&) const = default;
};

struct RepInput {
  std::array<Seed, 3> seeds{};
  std::array<PackedBits, 3> input_shares;
  /// Party whose AND output at the output gate is flipped (-1: none). This
  /// is the canonical cheat for an unsatisfied circuit.
  int fault_party = -1;
};

struct RepTranscript {
  std::array<PartyView, 3> views;
  std::array<std::uint8_t, 3> output_shares{};
};

/// Views e and e+1 (mod 3) of one repetition.
struct OpenedPair {
  int e = 0;
  const PartyView* first = nullptr;
  const PartyView* second = nullptr;
};

struct PairCheck {
  bool consistent = false;  ///< party e's recorded AND outputs match recomputation
  std::uint8_t y_first = 0;
  std::uint8_t y_second = 0;
};

enum class Kernel { kPacked, kReference };

std::vector<RepTranscript> mpc_run_reference(const crypto::Circuit& c, std::span<const RepInput> reps);
std::vector<RepTranscript> mpc_run_packed(const crypto::Circuit& c, std::span<const RepInput> reps);
std::vector<RepTranscript> mpc_run(const crypto::Circuit& c, std::span<const RepInput> reps, Kernel k);

/// View lengths must already match the circuit.
std::vector<PairCheck> mpc_check_reference(const crypto::Circuit& c, std::span<const OpenedPair> pairs);
std::vector<PairCheck> mpc_check_packed(const crypto::Circuit& c, std::span<const OpenedPair> pairs);
std::vector<PairCheck> mpc_check(const crypto::Circuit& c, std::span<const OpenedPair> pairs, Kernel k);

/// Fills first->and_outputs so that the pair is consistent, given the second
/// view; returns (y_first, y_second). Used by the transcript simulator.
std::pair<std::uint8_t, std::uint8_t> mpc_complete_first(const crypto::Circuit& c, int e, PartyView& first,
                                                         const PartyView& second);

/// AND-gate tape of one party.
PackedBits party_tape(const Seed& seed, std::size_t n_and);

}  // namespace zkpos::kernels
