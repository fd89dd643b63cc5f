#pragma once

#include <span>
#include <vector>

#include "zkpos/crypto/circuit.hpp"

namespace zkpos::kernels {

/// Output bit for each witness, evaluating 64 witnesses per pass.
std::vector<std::uint8_t> circuit_eval_batch(const crypto::Circuit& c, std::span<const Bits> witnesses);

/// One circuit_eval per witness.
std::vector<std::uint8_t> circuit_eval_batch_reference(const crypto::Circuit& c, std::span<const Bits> witnesses);

}  // namespace zkpos::kernels
