#pragma once

#include "zkpos/common/bytes.hpp"
#include "zkpos/common/rng.hpp"

namespace zkpos::crypto {

constexpr int kDefaultLambdaCom = 24;

/// Naor first message: 3*lambda uniformly random bits per committed bit.
struct PublicParams {
  int lambda = kDefaultLambdaCom;
  Bits bits;

  std::size_t message_bits() const { return bits.size() / (3 * static_cast<std::size_t>(lambda)); }
  Bytes serialize() const;
  static PublicParams parse(std::span<const std::uint8_t> bytes);
  bool operator==(const PublicParams&) const = default;
};

using Commitment = Bits;

struct Opening {
  Bits message;
  Bits randomness;  ///< lambda bits per message bit
};

PublicParams com_setup(int lambda, std::size_t message_bits, Rng& rng);

/// G: lambda-bit seed -> 3*lambda bits. toy_prg keyed by the seed
/// (left-aligned) with a fixed domain tag in the last key word.
Bits naor_stretch(std::span<const std::uint8_t> seed, int lambda);

constexpr std::uint32_t kCommitDomainTag = 0x434F4D31;  // "COM1"
constexpr int kMaxLambdaCom = 96;

/// out_i = G(r_i) XOR m_i * pp_i, concatenated over message bits.
Commitment com(const PublicParams& pp, std::span<const std::uint8_t> message, std::span<const std::uint8_t> randomness);

bool com_verify(const PublicParams& pp, const Commitment& c, const Opening& opening);

}  // namespace zkpos::crypto
