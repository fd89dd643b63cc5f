#include "zkpos/crypto/compile.hpp"

namespace zkpos::crypto {

KeyWords key_words_from_bits(CircuitBuilder& cb, std::span<const Wire> bits) {
  if (bits.size() > 128) throw CryptoError("key holds at most 128 bits");
  KeyWords k;
  for (auto& w : k) w = cb.word_const(0);
  for (std::size_t i = 0; i < bits.size(); ++i) k[i / 32][31 - i % 32] = bits[i];
  return k;
}

BlockWords toy_encrypt_circuit(CircuitBuilder& cb, const KeyWords& key, const BlockWords& block) {
  Word32 a = block[0], b = block[1];
  for (int i = 0; i < kToyRounds; ++i) {
    const Word32 f = cb.word_xor(cb.word_and(a, CircuitBuilder::word_rotl(a, 5)), CircuitBuilder::word_rotl(a, 1));
    Word32 next = cb.word_xor(cb.word_xor(b, f), key[i % 4]);
    next = cb.word_xor_const(next, static_cast<std::uint32_t>(i));
    b = a;
    a = next;
  }
  return {a, b};
}

std::vector<Wire> toy_prg_circuit(CircuitBuilder& cb, const KeyWords& key, std::size_t n_bits) {
  std::vector<Wire> out;
  out.reserve(n_bits);
  for (std::uint64_t j = 0; out.size() < n_bits; ++j) {
    const BlockWords ctr{cb.word_const(static_cast<std::uint32_t>(j >> 32)), cb.word_const(static_cast<std::uint32_t>(j))};
    const BlockWords ct = toy_encrypt_circuit(cb, key, ctr);
    for (int t = 0; t < 64 && out.size() < n_bits; ++t) out.push_back(t < 32 ? ct[0][31 - t] : ct[1][63 - t]);
  }
  return out;
}

std::vector<Wire> naor_stretch_circuit(CircuitBuilder& cb, std::span<const Wire> seed, int lambda) {
  if (lambda < 1 || lambda > kMaxLambdaCom || seed.size() != static_cast<std::size_t>(lambda)) {
    throw CryptoError("seed length must equal lambda_com");
  }
  KeyWords k = key_words_from_bits(cb, seed);
  k[3] = cb.word_const(kCommitDomainTag);
  return toy_prg_circuit(cb, k, 3 * static_cast<std::size_t>(lambda));
}

std::vector<Wire> com_circuit(CircuitBuilder& cb, const PublicParams& pp, std::span<const Wire> message,
                              std::span<const Wire> randomness) {
  const auto lam = static_cast<std::size_t>(pp.lambda);
  if (pp.bits.size() != 3 * lam * message.size() || randomness.size() != lam * message.size()) {
    throw CryptoError("commitment circuit length mismatch");
  }
  std::vector<Wire> out;
  out.reserve(3 * lam * message.size());
  for (std::size_t i = 0; i < message.size(); ++i) {
    const auto g = naor_stretch_circuit(cb, randomness.subspan(i * lam, lam), pp.lambda);
    for (std::size_t j = 0; j < 3 * lam; ++j) {
      out.push_back(pp.bits[i * 3 * lam + j] ? cb.xor_(g[j], message[i]) : g[j]);
    }
  }
  return out;
}

Wire com_check_circuit(CircuitBuilder& cb, const PublicParams& pp, const Commitment& c, std::span<const Wire> message,
                       std::span<const Wire> randomness) {
  const auto out = com_circuit(cb, pp, message, randomness);
  if (out.size() != c.size()) throw CryptoError("commitment length mismatch");
  return cb.equals_const(out, c);
}

KeyWords expand_key_circuit(CircuitBuilder& cb, std::span<const Wire> sk, std::uint64_t index) {
  if (sk.empty() || sk.size() > 64) throw CryptoError("secret key length must be in [1, 64]");
  KeyWords k = key_words_from_bits(cb, sk);
  k[2] = cb.word_const(static_cast<std::uint32_t>(index >> 32));
  k[3] = cb.word_const(static_cast<std::uint32_t>(index));
  return k;
}

std::vector<Wire> decrypt_frame_circuit(CircuitBuilder& cb, std::span<const Wire> sk, const Ciphertext& ct,
                                        const FrameLayout& layout) {
  if (ct.body.size() != layout.frame_bits()) throw CryptoError("ciphertext body has the wrong length");
  const std::size_t n = 1 + layout.payload_bits;
  const auto ks = toy_prg_circuit(cb, expand_key_circuit(cb, sk, ct.index), n);
  std::vector<Wire> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = ct.body[i] ? cb.not_(ks[i]) : ks[i];
  return out;
}

}  // namespace zkpos::crypto
