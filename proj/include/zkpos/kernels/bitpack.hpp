#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "zkpos/common/bytes.hpp"

namespace zkpos::kernels {

/// Bit string in 64-bit words, LSB-first: bit j is (w[j / 64] >> (j % 64)) & 1.
using PackedBits = std::vector<std::uint64_t>;

inline std::size_t words_for(std::size_t n_bits) { return (n_bits + 63) / 64; }

inline int get_bit(const PackedBits& p, std::size_t j) { return static_cast<int>((p[j / 64] >> (j % 64)) & 1u); }
inline void set_bit(PackedBits& p, std::size_t j, int v) {
  const std::uint64_t m = std::uint64_t{1} << (j % 64);
  p[j / 64] = v ? (p[j / 64] | m) : (p[j / 64] & ~m);
}

PackedBits pack_words(std::span<const std::uint8_t> bits);
Bits unpack_words(const PackedBits& p, std::size_t n_bits);

/// MSB-first byte serialization of the logical bit string (same layout as
/// pack_bits on the unpacked bits).
Bytes packed_to_bytes(const PackedBits& p, std::size_t n_bits);

std::uint64_t reverse_bits64(std::uint64_t x);

/// In-place 64x64 bit-matrix transpose: bit c of a[r] moves to bit r of a[c].
void transpose64(std::uint64_t a[64]);

}  // namespace zkpos::kernels
