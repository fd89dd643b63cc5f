#include "zkpos/kernels/batch_eval.hpp"

#include "zkpos/crypto/encryption.hpp"

namespace zkpos::kernels {

using crypto::GateOp;

std::vector<std::uint8_t> circuit_eval_batch(const crypto::Circuit& c, std::span<const Bits> witnesses) {
  for (const auto& w : witnesses) {
    if (w.size() != c.num_inputs) throw crypto::CryptoError("witness length does not match circuit inputs");
  }
  std::vector<std::uint8_t> out(witnesses.size());
  const std::size_t n_blocks = (witnesses.size() + 63) / 64;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t blk = 0; blk < n_blocks; ++blk) {
    const std::size_t base = blk * 64;
    const std::size_t L = std::min<std::size_t>(64, witnesses.size() - base);
    const std::uint64_t all = L == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << L) - 1;
    std::vector<std::uint64_t> v(c.gates.size());
    for (std::size_t g = 0; g < c.gates.size(); ++g) {
      const auto& gate = c.gates[g];
      switch (gate.op) {
        case GateOp::kInput: {
          std::uint64_t x = 0;
          for (std::size_t r = 0; r < L; ++r) x |= static_cast<std::uint64_t>(witnesses[base + r][gate.a] & 1) << r;
          v[g] = x;
          break;
        }
        case GateOp::kConst: v[g] = gate.a ? all : 0; break;
        case GateOp::kXor: v[g] = v[gate.a] ^ v[gate.b]; break;
        case GateOp::kAnd: v[g] = v[gate.a] & v[gate.b]; break;
        case GateOp::kNot: v[g] = v[gate.a] ^ all; break;
      }
    }
    for (std::size_t r = 0; r < L; ++r) out[base + r] = static_cast<std::uint8_t>((v[c.output] >> r) & 1u);
  }
  return out;
}

std::vector<std::uint8_t> circuit_eval_batch_reference(const crypto::Circuit& c, std::span<const Bits> witnesses) {
  std::vector<std::uint8_t> out(witnesses.size());
  for (std::size_t i = 0; i < witnesses.size(); ++i) out[i] = crypto::circuit_eval(c, witnesses[i]) ? 1 : 0;
  return out;
}

}  // namespace zkpos::kernels
