#include "zkpos/crypto/circuit.hpp"

#include <algorithm>

#include "zkpos/crypto/encryption.hpp"

namespace zkpos::crypto {

std::size_t Circuit::and_count() const {
  return static_cast<std::size_t>(std::count_if(gates.begin(), gates.end(), [](const Gate& g) { return g.op == GateOp::kAnd; }));
}

void Circuit::validate() const {
  if (gates.size() < num_inputs) throw FormatError("circuit has fewer gates than inputs");
  for (std::uint32_t i = 0; i < gates.size(); ++i) {
    const Gate& g = gates[i];
    const bool is_input = i < num_inputs;
    if (is_input != (g.op == GateOp::kInput)) throw FormatError("inputs must come first");
    switch (g.op) {
      case GateOp::kInput:
        if (g.a != i) throw FormatError("input gate index mismatch");
        break;
      case GateOp::kConst:
        if (g.a > 1) throw FormatError("constant gate value must be 0 or 1");
        break;
      case GateOp::kNot:
        if (g.a >= i) throw FormatError("gate operand out of order");
        break;
      case GateOp::kXor:
      case GateOp::kAnd:
        if (g.a >= i || g.b >= i) throw FormatError("gate operand out of order");
        break;
      default:
        throw FormatError("unknown gate opcode");
    }
  }
  if (output >= gates.size() || gates[output].op != GateOp::kAnd) throw FormatError("output must be an AND gate");
}

Bytes Circuit::serialize() const {
  // Same big-endian layout ByteWriter produces, written in place.
  Bytes out(12 + 9 * gates.size());
  std::uint8_t* p = out.data();
  const auto put32 = [&p](std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) *p++ = static_cast<std::uint8_t>(v >> s);
  };
  put32(num_inputs);
  put32(static_cast<std::uint32_t>(gates.size()));
  put32(output);
  for (const auto& g : gates) {
    *p++ = static_cast<std::uint8_t>(g.op);
    put32(g.a);
    put32(g.b);
  }
  return out;
}

Circuit Circuit::parse(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  Circuit c;
  c.num_inputs = r.u32();
  const std::uint32_t n = r.u32();
  c.output = r.u32();
  if (r.remaining() != static_cast<std::size_t>(n) * 9) throw FormatError("circuit length mismatch");
  c.gates.resize(n);
  for (auto& g : c.gates) {
    g.op = static_cast<GateOp>(r.u8());
    g.a = r.u32();
    g.b = r.u32();
  }
  c.validate();
  return c;
}

Digest Circuit::hash() const { return toy_hash_striped(serialize()); }

std::vector<std::uint8_t> circuit_eval_wires(const Circuit& c, std::span<const std::uint8_t> witness) {
  if (witness.size() != c.num_inputs) throw CryptoError("witness length does not match circuit inputs");
  std::vector<std::uint8_t> v(c.gates.size());
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    switch (g.op) {
      case GateOp::kInput: v[i] = witness[g.a] & 1; break;
      case GateOp::kConst: v[i] = static_cast<std::uint8_t>(g.a); break;
      case GateOp::kXor: v[i] = v[g.a] ^ v[g.b]; break;
      case GateOp::kAnd: v[i] = v[g.a] & v[g.b]; break;
      case GateOp::kNot: v[i] = v[g.a] ^ 1; break;
    }
  }
  return v;
}

bool circuit_eval(const Circuit& c, std::span<const std::uint8_t> witness) {
  return circuit_eval_wires(c, witness)[c.output] != 0;
}

CircuitBuilder::CircuitBuilder(std::uint32_t num_inputs) : num_inputs_(num_inputs) {
  for (std::uint32_t i = 0; i < num_inputs; ++i) push(GateOp::kInput, i, 0);
}

void CircuitBuilder::reserve(std::size_t gates) {
  gates_.reserve(gates);
  const_.reserve(gates);
  not_of_.reserve(gates);
}

Wire CircuitBuilder::push(GateOp op, std::uint32_t a, std::uint32_t b) {
  const auto id = static_cast<std::uint32_t>(gates_.size());
  gates_.push_back({op, a, b});
  const_.push_back(op == GateOp::kConst ? static_cast<std::int8_t>(a) : -1);
  not_of_.push_back(op == GateOp::kNot ? a : id);
  if (op == GateOp::kAnd) ++and_count_;
  return {id};
}

Wire CircuitBuilder::input(std::uint32_t i) const {
  if (i >= num_inputs_) throw CryptoError("input index out of range");
  return {i};
}

Wire CircuitBuilder::constant(bool v) {
  auto& slot = v ? one_ : zero_;
  if (!slot) slot = push(GateOp::kConst, v ? 1 : 0, 0);
  return *slot;
}

std::optional<bool> CircuitBuilder::const_value(Wire w) const {
  if (const_[w.id] < 0) return std::nullopt;
  return const_[w.id] != 0;
}

Wire CircuitBuilder::not_(Wire a) {
  if (auto c = const_value(a)) return constant(!*c);
  if (not_of_[a.id] != a.id) return {not_of_[a.id]};
  return push(GateOp::kNot, a.id, 0);
}

Wire CircuitBuilder::xor_(Wire a, Wire b) {
  const auto ca = const_value(a), cb = const_value(b);
  if (ca && cb) return constant(*ca != *cb);
  if (ca) return *ca ? not_(b) : b;
  if (cb) return *cb ? not_(a) : a;
  if (a.id == b.id) return constant(false);
  if (not_of_[a.id] == b.id || not_of_[b.id] == a.id) return constant(true);
  return push(GateOp::kXor, a.id, b.id);
}

Wire CircuitBuilder::and_(Wire a, Wire b) {
  const auto ca = const_value(a), cb = const_value(b);
  if (ca) return *ca ? b : constant(false);
  if (cb) return *cb ? a : constant(false);
  if (a.id == b.id) return a;
  return push(GateOp::kAnd, a.id, b.id);
}

Wire CircuitBuilder::raw_and(Wire a, Wire b) { return push(GateOp::kAnd, a.id, b.id); }

Wire CircuitBuilder::or_(Wire a, Wire b) { return not_(and_(not_(a), not_(b))); }

Word32 CircuitBuilder::word_const(std::uint32_t v) {
  Word32 w;
  for (int i = 0; i < 32; ++i) w[i] = constant((v >> i) & 1u);
  return w;
}

Word32 CircuitBuilder::word_xor(const Word32& a, const Word32& b) {
  Word32 w;
  for (int i = 0; i < 32; ++i) w[i] = xor_(a[i], b[i]);
  return w;
}

Word32 CircuitBuilder::word_and(const Word32& a, const Word32& b) {
  Word32 w;
  for (int i = 0; i < 32; ++i) w[i] = and_(a[i], b[i]);
  return w;
}

Word32 CircuitBuilder::word_xor_const(const Word32& a, std::uint32_t v) {
  Word32 w = a;
  for (int i = 0; i < 32; ++i) {
    if ((v >> i) & 1u) w[i] = not_(a[i]);
  }
  return w;
}

Word32 CircuitBuilder::word_rotl(const Word32& a, int r) {
  Word32 w;
  for (int i = 0; i < 32; ++i) w[i] = a[(i - r + 32) % 32];
  return w;
}

Wire CircuitBuilder::and_all(std::span<const Wire> ws) {
  if (ws.empty()) return constant(true);
  std::vector<Wire> level(ws.begin(), ws.end());
  while (level.size() > 1) {
    std::vector<Wire> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(and_(level[i], level[i + 1]));
    if (level.size() % 2) next.push_back(level.back());
    level = std::move(next);
  }
  return level[0];
}

Wire CircuitBuilder::equals_const(std::span<const Wire> bits, std::span<const std::uint8_t> value) {
  if (bits.size() != value.size()) throw CryptoError("equals_const length mismatch");
  std::vector<Wire> eq(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) eq[i] = value[i] ? bits[i] : not_(bits[i]);
  return and_all(eq);
}

Wire CircuitBuilder::equals(std::span<const Wire> a, std::span<const Wire> b) {
  if (a.size() != b.size()) throw CryptoError("equals length mismatch");
  std::vector<Wire> eq(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) eq[i] = not_(xor_(a[i], b[i]));
  return and_all(eq);
}

Circuit CircuitBuilder::finish(Wire out) {
  if (gates_[out.id].op != GateOp::kAnd) out = raw_and(out, constant(true));
  std::vector<std::uint8_t> live(gates_.size(), 0);
  live[out.id] = 1;
  for (std::size_t i = gates_.size(); i-- > num_inputs_;) {
    if (!live[i]) continue;
    const Gate& g = gates_[i];
    if (g.op == GateOp::kNot) live[g.a] = 1;
    if (g.op == GateOp::kXor || g.op == GateOp::kAnd) live[g.a] = live[g.b] = 1;
  }
  Circuit c;
  c.num_inputs = num_inputs_;
  c.gates.reserve(num_inputs_ + static_cast<std::size_t>(std::count(live.begin() + num_inputs_, live.end(), 1)));
  std::vector<std::uint32_t> remap(gates_.size());
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    if (i >= num_inputs_ && !live[i]) continue;
    Gate g = gates_[i];
    if (g.op == GateOp::kNot) g.a = remap[g.a];
    if (g.op == GateOp::kXor || g.op == GateOp::kAnd) {
      g.a = remap[g.a];
      g.b = remap[g.b];
    }
    remap[i] = static_cast<std::uint32_t>(c.gates.size());
    c.gates.push_back(g);
  }
  c.output = remap[out.id];
  return c;
}

}  // namespace zkpos::crypto
