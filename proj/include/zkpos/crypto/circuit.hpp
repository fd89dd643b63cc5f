#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "zkpos/common/bytes.hpp"
#include "zkpos/crypto/toy_hash.hpp"

namespace zkpos::crypto {

enum class GateOp : std::uint8_t { kInput = 0, kConst = 1, kXor = 2, kAnd = 3, kNot = 4 };

/// Gate i defines wire i. kInput: a = witness index. kConst: a = value.
/// kNot: a = operand. kXor/kAnd: a, b = operands (both < i).
struct Gate {
  GateOp op = GateOp::kInput;
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  bool operator==(const Gate&) const = default;
};

/// Topologically ordered single-output circuit. The first num_inputs gates
/// are the witness inputs; the output wire is always an AND gate.
struct Circuit {
  std::uint32_t num_inputs = 0;
  std::vector<Gate> gates;
  std::uint32_t output = 0;

  std::size_t and_count() const;
  std::size_t size() const { return gates.size(); }
  /// Checks ordering and operand bounds; throws FormatError.
  void validate() const;
  Bytes serialize() const;
  static Circuit parse(std::span<const std::uint8_t> bytes);
  Digest hash() const;
};

/// Plain evaluation; throws CryptoError on witness length mismatch.
bool circuit_eval(const Circuit& c, std::span<const std::uint8_t> witness);

/// Every wire value (one byte per wire).
std::vector<std::uint8_t> circuit_eval_wires(const Circuit& c, std::span<const std::uint8_t> witness);

struct Wire {
  std::uint32_t id = 0;
};

/// 32-bit word as wires, index 0 = least significant bit.
using Word32 = std::array<Wire, 32>;

/// Builds circuits with constant folding, NOT cancellation, constant-wire
/// sharing and dead-gate removal at finish().
class CircuitBuilder {
 public:
  explicit CircuitBuilder(std::uint32_t num_inputs);
  /// Capacity hint for large circuits.
  void reserve(std::size_t gates);

  Wire input(std::uint32_t i) const;
  std::uint32_t num_inputs() const { return num_inputs_; }
  Wire constant(bool v);
  Wire xor_(Wire a, Wire b);
  Wire and_(Wire a, Wire b);
  Wire not_(Wire a);
  Wire or_(Wire a, Wire b);
  /// AND without folding; used where a gate must exist.
  Wire raw_and(Wire a, Wire b);
  std::optional<bool> const_value(Wire w) const;
  std::size_t and_count() const { return and_count_; }

  Word32 word_const(std::uint32_t v);
  Word32 word_xor(const Word32& a, const Word32& b);
  Word32 word_and(const Word32& a, const Word32& b);
  Word32 word_xor_const(const Word32& a, std::uint32_t v);
  static Word32 word_rotl(const Word32& a, int r);

  /// Balanced AND over all wires (constant 1 when empty).
  Wire and_all(std::span<const Wire> ws);
  /// 1 iff bits equal the given constant bits.
  Wire equals_const(std::span<const Wire> bits, std::span<const std::uint8_t> value);
  Wire equals(std::span<const Wire> a, std::span<const Wire> b);

  /// Finalizes with `out` as the output; gates that do not feed the output
  /// are dropped and wires renumbered.
  Circuit finish(Wire out);

 private:
  Wire push(GateOp op, std::uint32_t a, std::uint32_t b);

  std::uint32_t num_inputs_;
  std::vector<Gate> gates_;
  std::vector<std::int8_t> const_;     // -1 unknown, else value
  std::vector<std::uint32_t> not_of_;  // operand if the wire is NOT(x), else self
  std::optional<Wire> zero_, one_;
  std::size_t and_count_ = 0;
};

}  // namespace zkpos::crypto
