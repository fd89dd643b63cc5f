#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "zkpos/common/bytes.hpp"

namespace zkpos::crypto {

/// 128-bit key as four big-endian 32-bit words k0..k3.
struct ToyKey {
  std::array<std::uint32_t, 4> words{};

  static ToyKey from_bytes(std::span<const std::uint8_t> bytes16);
  /// Bits are placed MSB-first from the start of the key; the rest is zero.
  static ToyKey from_bits(std::span<const std::uint8_t> bits);
  std::array<std::uint8_t, 16> to_bytes() const;
};

constexpr int kToyRounds = 32;

constexpr std::uint32_t rotl32(std::uint32_t x, int r) { return (x << r) | (x >> (32 - r)); }

/// Simeck-style Feistel with an AND-rotation round function. Not a secure
/// cipher; it exists because it compiles to a small AND/XOR circuit.
///
///   f(a) = (a & rotl(a, 5)) ^ rotl(a, 1)
///   round i: (a, b) <- (b ^ f(a) ^ k[i mod 4] ^ i, a)
///
/// The block is (a, b) = (high word, low word).
constexpr std::uint64_t toy_encrypt(const ToyKey& key, std::uint64_t block) {
  auto a = static_cast<std::uint32_t>(block >> 32);
  auto b = static_cast<std::uint32_t>(block);
  for (int i = 0; i < kToyRounds; ++i) {
    const std::uint32_t f = (a & rotl32(a, 5)) ^ rotl32(a, 1);
    const std::uint32_t next = b ^ f ^ key.words[i % 4] ^ static_cast<std::uint32_t>(i);
    b = a;
    a = next;
  }
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

/// Counter-mode keystream: block j = toy_encrypt(key, j), emitted MSB-first.
Bits toy_prg(const ToyKey& key, std::size_t n_bits);

/// out[i] = toy_encrypt(keys[i], blocks[i]), evaluated several lanes at a time.
void toy_encrypt_many(std::span<const ToyKey> keys, std::span<const std::uint64_t> blocks, std::span<std::uint64_t> out);

/// Raw counter-mode blocks [first, first + count).
void toy_prg_blocks(const ToyKey& key, std::uint64_t first, std::span<std::uint64_t> out);

}  // namespace zkpos::crypto
