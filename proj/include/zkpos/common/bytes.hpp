#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace zkpos {

using Bytes = std::vector<std::uint8_t>;

/// One bit per element, each element 0 or 1. Bit strings are short enough
/// throughout (keys, frames, commitments) that the unpacked form is the
/// convenient one; the MPC kernels use their own packed layout.
using Bits = std::vector<std::uint8_t>;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string to_hex(std::span<const std::uint8_t> bytes);
Bytes from_hex(std::string_view hex);

/// MSB-first packing; the tail of the last byte is zero.
Bytes pack_bits(std::span<const std::uint8_t> bits);
Bits unpack_bits(std::span<const std::uint8_t> bytes, std::size_t n_bits);

Bits u64_to_bits(std::uint64_t value, int width);
std::uint64_t bits_to_u64(std::span<const std::uint8_t> bits);

Bits xor_bits(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

/// Big-endian binary writer for the on-disk formats.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void i128(__int128 v);
  void raw(std::span<const std::uint8_t> bytes);
  /// u32 length prefix followed by the bytes.
  void section(std::span<const std::uint8_t> bytes);
  const Bytes& bytes() const { return out_; }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> in) : in_(in) {}
  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  __int128 i128();
  Bytes raw(std::size_t n);
  Bytes section();
  bool done() const { return pos_ == in_.size(); }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  void need(std::size_t n) const;
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

Bytes read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> bytes);

}  // namespace zkpos
