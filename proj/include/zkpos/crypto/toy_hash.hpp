#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace zkpos::crypto {

using Digest = std::array<std::uint8_t, 16>;

/// Two-lane Davies-Meyer over ToyCipher with Merkle-Damgard length padding.
/// Used only to bind large views and circuits to short strings; inherits the
/// (non-)strength of ToyCipher.
Digest toy_hash(std::span<const std::uint8_t> data);

constexpr std::size_t kStripedMinBytes = 4096;

/// Below kStripedMinBytes this is toy_hash. Longer data is cut into 32 equal
/// stripes (whole 16-byte blocks, the last ones possibly shorter or empty),
/// each stripe is hashed with toy_hash in lockstep with the others, and the
/// result is toy_hash of the input length followed by the 32 stripe digests.
Digest toy_hash_striped(std::span<const std::uint8_t> data);

/// Incremental form of toy_hash.
class ToyHasher {
 public:
  ToyHasher();
  /// Continues a hash whose first `length` bytes (a multiple of 16) were
  /// already compressed into the chaining values h0, h1.
  static ToyHasher resume(std::uint64_t h0, std::uint64_t h1, std::uint64_t length);
  void update(std::span<const std::uint8_t> data);
  void update_u64(std::uint64_t v);
  Digest finish();

 private:
  void compress(const std::uint8_t* chunk);

  std::uint64_t h_[2];
  std::array<std::uint8_t, 16> buf_{};
  std::size_t fill_ = 0;
  std::uint64_t length_ = 0;
};

}  // namespace zkpos::crypto
