#include "zkpos/crypto/toy_cipher.hpp"

#include <stdexcept>

namespace zkpos::crypto {

ToyKey ToyKey::from_bytes(std::span<const std::uint8_t> bytes16) {
  if (bytes16.size() != 16) throw std::invalid_argument("ToyKey needs 16 bytes");
  ToyKey k;
  for (int w = 0; w < 4; ++w) {
    k.words[w] = static_cast<std::uint32_t>(bytes16[4 * w]) << 24 | static_cast<std::uint32_t>(bytes16[4 * w + 1]) << 16 |
                 static_cast<std::uint32_t>(bytes16[4 * w + 2]) << 8 | bytes16[4 * w + 3];
  }
  return k;
}

ToyKey ToyKey::from_bits(std::span<const std::uint8_t> bits) {
  if (bits.size() > 128) throw std::invalid_argument("ToyKey holds at most 128 bits");
  ToyKey k;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) k.words[i / 32] |= 1u << (31 - i % 32);
  }
  return k;
}

std::array<std::uint8_t, 16> ToyKey::to_bytes() const {
  std::array<std::uint8_t, 16> out{};
  for (int w = 0; w < 4; ++w) {
    for (int b = 0; b < 4; ++b) out[4 * w + b] = static_cast<std::uint8_t>(words[w] >> (24 - 8 * b));
  }
  return out;
}

__attribute__((target_clones("avx2", "default"))) void toy_encrypt_many(std::span<const ToyKey> keys, std::span<const std::uint64_t> blocks, std::span<std::uint64_t> out) {
  if (keys.size() != blocks.size() || out.size() != keys.size()) throw std::invalid_argument("toy_encrypt_many size mismatch");
  constexpr std::size_t L = 32;
  std::size_t base = 0;
  for (; base + L <= keys.size(); base += L) {
    std::uint32_t a[L], b[L], k[4][L];
    for (std::size_t l = 0; l < L; ++l) {
      a[l] = static_cast<std::uint32_t>(blocks[base + l] >> 32);
      b[l] = static_cast<std::uint32_t>(blocks[base + l]);
      for (int w = 0; w < 4; ++w) k[w][l] = keys[base + l].words[w];
    }
    for (int i = 0; i < kToyRounds; ++i) {
      const std::uint32_t* ki = k[i % 4];
      for (std::size_t l = 0; l < L; ++l) {
        const std::uint32_t x = a[l];
        const std::uint32_t next = b[l] ^ ((x & rotl32(x, 5)) ^ rotl32(x, 1)) ^ ki[l] ^ static_cast<std::uint32_t>(i);
        b[l] = x;
        a[l] = next;
      }
    }
    for (std::size_t l = 0; l < L; ++l) out[base + l] = (static_cast<std::uint64_t>(a[l]) << 32) | b[l];
  }
  for (; base < keys.size(); ++base) out[base] = toy_encrypt(keys[base], blocks[base]);
}

__attribute__((target_clones("avx2", "default"))) void toy_prg_blocks(const ToyKey& key, std::uint64_t first, std::span<std::uint64_t> out) {
  constexpr std::size_t L = 32;
  std::size_t base = 0;
  for (; base + L <= out.size(); base += L) {
    std::uint32_t a[L], b[L];
    for (std::size_t l = 0; l < L; ++l) {
      const std::uint64_t block = first + base + l;
      a[l] = static_cast<std::uint32_t>(block >> 32);
      b[l] = static_cast<std::uint32_t>(block);
    }
    for (int i = 0; i < kToyRounds; ++i) {
      const std::uint32_t ki = key.words[i % 4] ^ static_cast<std::uint32_t>(i);
      for (std::size_t l = 0; l < L; ++l) {
        const std::uint32_t x = a[l];
        const std::uint32_t next = b[l] ^ ((x & rotl32(x, 5)) ^ rotl32(x, 1)) ^ ki;
        b[l] = x;
        a[l] = next;
      }
    }
    for (std::size_t l = 0; l < L; ++l) out[base + l] = (static_cast<std::uint64_t>(a[l]) << 32) | b[l];
  }
  for (; base < out.size(); ++base) out[base] = toy_encrypt(key, first + base);
}

Bits toy_prg(const ToyKey& key, std::size_t n_bits) {
  Bits out(n_bits);
  std::uint64_t block = 0;
  for (std::size_t i = 0; i < n_bits; ++i) {
    if (i % 64 == 0) block = toy_encrypt(key, i / 64);
    out[i] = static_cast<std::uint8_t>((block >> (63 - i % 64)) & 1u);
  }
  return out;
}

}  // namespace zkpos::crypto
