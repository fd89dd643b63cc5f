#include "zkpos/common/bytes.hpp"

#include <fstream>
#include <iterator>

namespace zkpos {

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

namespace {
int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  throw FormatError(std::string("invalid hex digit '") + c + "'");
}
}  // namespace

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw FormatError("odd-length hex string");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(hex_value(hex[2 * i]) << 4 | hex_value(hex[2 * i + 1]));
  }
  return out;
}

Bytes pack_bits(std::span<const std::uint8_t> bits) {
  Bytes out((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  }
  return out;
}

Bits unpack_bits(std::span<const std::uint8_t> bytes, std::size_t n_bits) {
  if (n_bits > bytes.size() * 8) throw FormatError("bit count exceeds byte buffer");
  Bits out(n_bits);
  for (std::size_t i = 0; i < n_bits; ++i) {
    out[i] = (bytes[i / 8] >> (7 - i % 8)) & 1u;
  }
  return out;
}

Bits u64_to_bits(std::uint64_t value, int width) {
  Bits out(static_cast<std::size_t>(width));
  for (int i = 0; i < width; ++i) out[i] = (value >> (width - 1 - i)) & 1u;
  return out;
}

std::uint64_t bits_to_u64(std::span<const std::uint8_t> bits) {
  std::uint64_t v = 0;
  for (auto b : bits) v = (v << 1) | (b & 1u);
  return v;
}

Bits xor_bits(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) throw std::invalid_argument("xor_bits: length mismatch");
  Bits out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
  return out;
}

void ByteWriter::u16(std::uint16_t v) {
  u8(static_cast<std::uint8_t>(v >> 8));
  u8(static_cast<std::uint8_t>(v));
}
void ByteWriter::u32(std::uint32_t v) {
  u16(static_cast<std::uint16_t>(v >> 16));
  u16(static_cast<std::uint16_t>(v));
}
void ByteWriter::u64(std::uint64_t v) {
  u32(static_cast<std::uint32_t>(v >> 32));
  u32(static_cast<std::uint32_t>(v));
}
void ByteWriter::i128(__int128 v) {
  const auto u = static_cast<unsigned __int128>(v);
  u64(static_cast<std::uint64_t>(u >> 64));
  u64(static_cast<std::uint64_t>(u));
}
void ByteWriter::raw(std::span<const std::uint8_t> bytes) {
  out_.insert(out_.end(), bytes.begin(), bytes.end());
}
void ByteWriter::section(std::span<const std::uint8_t> bytes) {
  u32(static_cast<std::uint32_t>(bytes.size()));
  raw(bytes);
}

void ByteReader::need(std::size_t n) const {
  if (in_.size() - pos_ < n) throw FormatError("truncated input");
}
std::uint8_t ByteReader::u8() {
  need(1);
  return in_[pos_++];
}
std::uint16_t ByteReader::u16() {
  std::uint16_t hi = u8();
  return static_cast<std::uint16_t>(hi << 8 | u8());
}
std::uint32_t ByteReader::u32() {
  std::uint32_t hi = u16();
  return hi << 16 | u16();
}
std::uint64_t ByteReader::u64() {
  std::uint64_t hi = u32();
  return hi << 32 | u32();
}
__int128 ByteReader::i128() {
  unsigned __int128 hi = u64();
  const unsigned __int128 v = hi << 64 | u64();
  return static_cast<__int128>(v);
}
Bytes ByteReader::raw(std::size_t n) {
  need(n);
  Bytes out(in_.begin() + static_cast<std::ptrdiff_t>(pos_),
            in_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
  pos_ += n;
  return out;
}
Bytes ByteReader::section() { return raw(u32()); }

Bytes read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace zkpos
