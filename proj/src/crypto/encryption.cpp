#include "zkpos/crypto/encryption.hpp"

namespace zkpos::crypto {

SecretKey gen_secret_key(int kappa, Rng& rng) {
  if (kappa < 1 || kappa > 64) throw CryptoError("kappa must be in [1, 64]");
  return SecretKey{rng.bits(static_cast<std::size_t>(kappa))};
}

ToyKey expand_key(const SecretKey& sk, std::uint64_t index) {
  if (sk.bits.empty() || sk.bits.size() > 64) throw CryptoError("secret key length must be in [1, 64]");
  ToyKey k = ToyKey::from_bits(sk.bits);
  k.words[2] = static_cast<std::uint32_t>(index >> 32);
  k.words[3] = static_cast<std::uint32_t>(index);
  return k;
}

Bytes Ciphertext::serialize() const {
  ByteWriter w;
  w.u64(index);
  w.raw(pack_bits(body));
  return w.take();
}

Ciphertext Ciphertext::parse(std::span<const std::uint8_t> bytes, const FrameLayout& layout) {
  ByteReader r(bytes);
  Ciphertext ct;
  ct.index = r.u64();
  const std::size_t n = layout.frame_bits();
  if (r.remaining() != n / 8) throw FormatError("ciphertext body has the wrong length");
  ct.body = unpack_bits(r.raw(n / 8), n);
  return ct;
}

Ciphertext enc(const SecretKey& sk, std::uint64_t index, const std::optional<Bits>& payload, const FrameLayout& layout) {
  const std::size_t n = layout.frame_bits();
  Bits frame(n, 0);
  if (payload) {
    if (payload->size() != layout.payload_bits) throw CryptoError("payload width mismatch");
    frame[0] = 1;
    std::copy(payload->begin(), payload->end(), frame.begin() + 1);
  }
  const Bits ks = toy_prg(expand_key(sk, index), n);
  for (std::size_t i = 0; i < n; ++i) frame[i] ^= ks[i];
  return Ciphertext{index, std::move(frame)};
}

std::optional<Bits> dec(const SecretKey& sk, const Ciphertext& ct, const FrameLayout& layout) {
  const std::size_t n = layout.frame_bits();
  if (ct.body.size() != n) throw CryptoError("ciphertext body has the wrong length");
  const Bits ks = toy_prg(expand_key(sk, ct.index), n);
  if ((ct.body[0] ^ ks[0]) == 0) return std::nullopt;
  Bits payload(layout.payload_bits);
  for (std::size_t i = 0; i < payload.size(); ++i) payload[i] = ct.body[1 + i] ^ ks[1 + i];
  return payload;
}

Ciphertext SessionEncryptor::encrypt(std::uint64_t index, const std::optional<Bits>& payload) {
  if (!used_.insert(index).second) throw CryptoError("encryption index reused");
  return enc(sk_, index, payload, layout_);
}

}  // namespace zkpos::crypto
