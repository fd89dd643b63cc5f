#pragma once

// Serialization helpers shared by the commitment-state formats.

#include <string>

#include "zkpos/common/bytes.hpp"
#include "zkpos/sim/geometry.hpp"

namespace zkpos::pc::detail {

using sim::Rational;
using sim::SpatialPoint;

inline void write_rational(ByteWriter& w, const Rational& q) {
  const std::string s = sim::rational_to_string(q);
  w.section(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

inline Rational read_rational(ByteReader& r) {
  const Bytes b = r.section();
  try {
    return sim::parse_rational(std::string(b.begin(), b.end()));
  } catch (const std::exception&) {
    throw FormatError("bad rational in scenario section");
  }
}

inline void write_point(ByteWriter& w, const SpatialPoint& p) {
  for (const auto& c : p) write_rational(w, c);
}

inline SpatialPoint read_point(ByteReader& r, std::size_t d) {
  SpatialPoint p;
  for (std::size_t i = 0; i < d; ++i) p.push_back(read_rational(r));
  return p;
}

inline void write_bits(ByteWriter& w, const Bits& bits) {
  w.u64(bits.size());
  w.raw(pack_bits(bits));
}

inline Bits read_bits(ByteReader& r) {
  const std::uint64_t n = r.u64();
  if (n > (std::uint64_t{1} << 32)) throw FormatError("bit string too long");
  return unpack_bits(r.raw((n + 7) / 8), n);
}

}  // namespace zkpos::pc::detail
