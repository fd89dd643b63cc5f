#include "zkpos/kernels/bitpack.hpp"

namespace zkpos::kernels {

PackedBits pack_words(std::span<const std::uint8_t> bits) {
  PackedBits p(words_for(bits.size()), 0);
  for (std::size_t j = 0; j < bits.size(); ++j) {
    if (bits[j] & 1) p[j / 64] |= std::uint64_t{1} << (j % 64);
  }
  return p;
}

Bits unpack_words(const PackedBits& p, std::size_t n_bits) {
  Bits out(n_bits);
  for (std::size_t j = 0; j < n_bits; ++j) out[j] = static_cast<std::uint8_t>(get_bit(p, j));
  return out;
}

Bytes packed_to_bytes(const PackedBits& p, std::size_t n_bits) {
  Bytes out((n_bits + 7) / 8, 0);
  for (std::size_t w = 0; w < p.size(); ++w) {
    const std::uint64_t r = reverse_bits64(p[w]);
    for (int b = 0; b < 8; ++b) {
      const std::size_t idx = w * 8 + static_cast<std::size_t>(b);
      if (idx < out.size()) out[idx] = static_cast<std::uint8_t>(r >> (56 - 8 * b));
    }
  }
  // Clear bits past the logical end.
  if (n_bits % 8) out.back() &= static_cast<std::uint8_t>(0xFF00u >> (n_bits % 8));
  return out;
}

std::uint64_t reverse_bits64(std::uint64_t x) {
  x = ((x >> 1) & 0x5555555555555555ull) | ((x & 0x5555555555555555ull) << 1);
  x = ((x >> 2) & 0x3333333333333333ull) | ((x & 0x3333333333333333ull) << 2);
  x = ((x >> 4) & 0x0F0F0F0F0F0F0F0Full) | ((x & 0x0F0F0F0F0F0F0F0Full) << 4);
  return __builtin_bswap64(x);
}

void transpose64(std::uint64_t a[64]) {
  std::uint64_t m = 0x00000000FFFFFFFFull;
  for (int j = 32; j != 0; j >>= 1, m ^= (m << j)) {
    for (int k = 0; k < 64; k = ((k | j) + 1) & ~j) {
      const std::uint64_t t = ((a[k] >> j) ^ a[k | j]) & m;
      a[k] ^= t << j;
      a[k | j] ^= t;
    }
  }
}

}  // namespace zkpos::kernels
