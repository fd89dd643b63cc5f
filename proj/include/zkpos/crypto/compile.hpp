#pragma once

#include <array>
#include <vector>

#include "zkpos/crypto/circuit.hpp"
#include "zkpos/crypto/commitment.hpp"
#include "zkpos/crypto/encryption.hpp"

// Circuit forms of the primitives. Each must agree bit-for-bit with the direct
// implementation it mirrors.
namespace zkpos::crypto {

using KeyWords = std::array<Word32, 4>;
using BlockWords = std::array<Word32, 2>;  ///< (a, b) = (high, low)

/// Up to 128 key bits, left-aligned MSB-first; the rest is constant zero.
KeyWords key_words_from_bits(CircuitBuilder& cb, std::span<const Wire> bits);

BlockWords toy_encrypt_circuit(CircuitBuilder& cb, const KeyWords& key, const BlockWords& block);

/// Keystream bits MSB-first, matching toy_prg.
std::vector<Wire> toy_prg_circuit(CircuitBuilder& cb, const KeyWords& key, std::size_t n_bits);

std::vector<Wire> naor_stretch_circuit(CircuitBuilder& cb, std::span<const Wire> seed, int lambda);

std::vector<Wire> com_circuit(CircuitBuilder& cb, const PublicParams& pp, std::span<const Wire> message,
                              std::span<const Wire> randomness);

/// 1 iff com(pp, message, randomness) == c.
Wire com_check_circuit(CircuitBuilder& cb, const PublicParams& pp, const Commitment& c, std::span<const Wire> message,
                       std::span<const Wire> randomness);

KeyWords expand_key_circuit(CircuitBuilder& cb, std::span<const Wire> sk, std::uint64_t index);

/// Decrypted validity bit followed by the payload bits (fill omitted).
std::vector<Wire> decrypt_frame_circuit(CircuitBuilder& cb, std::span<const Wire> sk, const Ciphertext& ct,
                                        const FrameLayout& layout);

}  // namespace zkpos::crypto
