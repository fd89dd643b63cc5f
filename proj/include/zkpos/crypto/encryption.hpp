#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>

#include "zkpos/common/bytes.hpp"
#include "zkpos/common/rng.hpp"
#include "zkpos/crypto/toy_cipher.hpp"

namespace zkpos::crypto {

class CryptoError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

constexpr int kDefaultKappa = 64;

struct SecretKey {
  Bits bits;  ///< kappa bits, 1 <= kappa <= 64
};

SecretKey gen_secret_key(int kappa, Rng& rng);

/// Keystream key for message `index`: sk left-aligned in the high 64 bits,
/// index big-endian in the low 64 bits.
ToyKey expand_key(const SecretKey& sk, std::uint64_t index);

/// validity bit, payload, then fill up to a whole number of bytes. The fill
/// is encrypted like everything else and ignored on decryption.
struct FrameLayout {
  std::size_t payload_bits = 1;
  std::size_t frame_bits() const { return (1 + payload_bits + 7) / 8 * 8; }
};

struct Ciphertext {
  std::uint64_t index = 0;
  Bits body;

  Bytes serialize() const;
  static Ciphertext parse(std::span<const std::uint8_t> bytes, const FrameLayout& layout);
  bool operator==(const Ciphertext&) const = default;
};

/// `payload` = nullopt encrypts the dummy message (validity bit 0).
Ciphertext enc(const SecretKey& sk, std::uint64_t index, const std::optional<Bits>& payload, const FrameLayout& layout);

/// nullopt when the validity bit is 0.
std::optional<Bits> dec(const SecretKey& sk, const Ciphertext& ct, const FrameLayout& layout);

/// Enforces one encryption per index under a key.
class SessionEncryptor {
 public:
  SessionEncryptor(SecretKey sk, FrameLayout layout) : sk_(std::move(sk)), layout_(layout) {}
  Ciphertext encrypt(std::uint64_t index, const std::optional<Bits>& payload);
  const SecretKey& key() const { return sk_; }
  const FrameLayout& layout() const { return layout_; }

 private:
  SecretKey sk_;
  FrameLayout layout_;
  std::set<std::uint64_t> used_;
};

}  // namespace zkpos::crypto
