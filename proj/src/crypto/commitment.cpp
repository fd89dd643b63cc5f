#include "zkpos/crypto/commitment.hpp"

#include "zkpos/crypto/encryption.hpp"
#include "zkpos/crypto/toy_cipher.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <vector>

namespace zkpos::crypto {

namespace {
void check_lambda(int lambda) {
  if (lambda < 1 || lambda > kMaxLambdaCom) throw CryptoError("lambda_com must be in [1, 96]");
}
static_assert(std::endian::native == std::endian::little, "bit gathering below assumes little-endian loads");

// kSpread[b] holds the 8 bits of b, MSB first, one per byte in memory order.
constexpr auto kSpread = [] {
  std::array<std::uint64_t, 256> t{};
  for (int b = 0; b < 256; ++b) {
    for (int q = 0; q < 8; ++q) t[b] |= static_cast<std::uint64_t>((b >> (7 - q)) & 1) << (8 * q);
  }
  return t;
}();

}  // namespace

Bytes PublicParams::serialize() const {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(lambda));
  w.u64(bits.size());
  w.raw(pack_bits(bits));
  return w.take();
}

PublicParams PublicParams::parse(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  PublicParams pp;
  pp.lambda = static_cast<int>(r.u32());
  const std::uint64_t n = r.u64();
  if (pp.lambda < 1 || pp.lambda > kMaxLambdaCom || n % (3 * pp.lambda) != 0) throw FormatError("bad public parameters");
  if (r.remaining() != (n + 7) / 8) throw FormatError("public parameter length mismatch");
  pp.bits = unpack_bits(r.raw(r.remaining()), n);
  return pp;
}

PublicParams com_setup(int lambda, std::size_t message_bits, Rng& rng) {
  check_lambda(lambda);
  return PublicParams{lambda, rng.bits(3 * static_cast<std::size_t>(lambda) * message_bits)};
}

Bits naor_stretch(std::span<const std::uint8_t> seed, int lambda) {
  check_lambda(lambda);
  if (seed.size() != static_cast<std::size_t>(lambda)) throw CryptoError("seed length must equal lambda_com");
  ToyKey k = ToyKey::from_bits(seed);
  k.words[3] = kCommitDomainTag;
  return toy_prg(k, 3 * static_cast<std::size_t>(lambda));
}

Commitment com(const PublicParams& pp, std::span<const std::uint8_t> message, std::span<const std::uint8_t> randomness) {
  check_lambda(pp.lambda);
  const auto lam = static_cast<std::size_t>(pp.lambda);
  if (pp.bits.size() != 3 * lam * message.size()) throw CryptoError("public parameters do not match message length");
  if (randomness.size() != lam * message.size()) throw CryptoError("randomness length must be lambda_com per message bit");
  // Same keystream as naor_stretch, batched over all message bits.
  const std::size_t out_bits = 3 * lam, nb = (out_bits + 63) / 64, n = message.size();
  std::vector<ToyKey> keys(n * nb);
  std::vector<std::uint64_t> ctr(n * nb), blocks(n * nb);
  for (std::size_t i = 0; i < n; ++i) {
    ToyKey k;
    const std::uint8_t* r = randomness.data() + i * lam;
    std::size_t t = 0;
    for (; t + 8 <= lam; t += 8) {
      std::uint64_t x;
      std::memcpy(&x, r + t, 8);
      const auto byte = static_cast<std::uint32_t>(((x & 0x0101010101010101ull) * 0x8040201008040201ull) >> 56);
      k.words[t >> 5] |= byte << (24 - (t & 31));
    }
    for (; t < lam; ++t) k.words[t >> 5] |= static_cast<std::uint32_t>(r[t] & 1u) << (31 - (t & 31));
    k.words[3] = kCommitDomainTag;
    for (std::size_t j = 0; j < nb; ++j) {
      keys[i * nb + j] = k;
      ctr[i * nb + j] = j;
    }
  }
  toy_encrypt_many(keys, ctr, blocks);
  Commitment out(out_bits * n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t m = message[i] & 1;
    const std::uint8_t* p = pp.bits.data() + i * out_bits;
    std::uint8_t* o = out.data() + i * out_bits;
    for (std::size_t blk = 0; blk < nb; ++blk) {
      const std::uint64_t g = blocks[i * nb + blk];
      const std::size_t len = std::min<std::size_t>(64, out_bits - 64 * blk);
      std::uint8_t spread[64];
      for (int q = 0; q < 8; ++q) {
        const std::uint64_t v = kSpread[(g >> (56 - 8 * q)) & 0xFF];
        std::memcpy(spread + 8 * q, &v, 8);
      }
      const std::uint8_t* pb = p + 64 * blk;
      std::uint8_t* ob = o + 64 * blk;
      for (std::size_t j = 0; j < len; ++j) ob[j] = static_cast<std::uint8_t>(spread[j] ^ (m & pb[j]));
    }
  }
  return out;
}

bool com_verify(const PublicParams& pp, const Commitment& c, const Opening& opening) {
  try {
    return com(pp, opening.message, opening.randomness) == c;
  } catch (const CryptoError&) {
    return false;
  }
}

}  // namespace zkpos::crypto
