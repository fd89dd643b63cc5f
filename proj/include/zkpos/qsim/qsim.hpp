#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "zkpos/common/rng.hpp"

namespace zkpos::qsim {

class QsimError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Opaque reference to one qubit held in a QuantumArena. Handles are moved
/// between parties inside signals; measuring (or discarding) consumes them.
/// There is deliberately no way to duplicate the underlying qubit.
struct QubitHandle {
  std::uint32_t id = 0;
  bool operator==(const QubitHandle&) const = default;
};

struct BellOutcome {
  int x = 0;  ///< apply X^x to the partner qubit
  int z = 0;  ///< then Z^z
};

using Amplitude = std::complex<double>;

/// Read-only copy of the tensor factor that currently holds a qubit.
/// Bit k of a basis index corresponds to qubits[k].
struct FactorSnapshot {
  std::vector<QubitHandle> qubits;
  std::vector<Amplitude> amplitudes;
};

/// Scenario-global register of live qubits, kept as a product of small
/// state-vector factors. Entangled qubits share a factor; a factor never
/// exceeds kMaxFactorQubits.
///
/// Not thread-safe: one arena per simulation instance.
class QuantumArena {
 public:
  static constexpr int kMaxFactorQubits = 8;
  static constexpr double kNormTolerance = 1e-9;

  explicit QuantumArena(std::size_t capacity = 4096) : capacity_(capacity) {}

  /// Fresh qubit in H^theta |b>.
  QubitHandle prepare_bb84(int b, int theta);
  /// Fresh pair in (|00> + |11>) / sqrt(2).
  std::pair<QubitHandle, QubitHandle> make_epr();

  /// Projective measurement in {H^basis|0>, H^basis|1>}; consumes q.
  int measure(QubitHandle q, int basis, Rng& rng);
  /// Bell-basis measurement of (q1, q2): CNOT(q1 -> q2), H(q1), then
  /// z = outcome of q1 and x = outcome of q2. Consumes both.
  BellOutcome bell_measure(QubitHandle q1, QubitHandle q2, Rng& rng);
  /// X^x then Z^z.
  void apply_pauli(QubitHandle q, int x, int z);

  /// Drops a qubit nobody will ever receive. Implemented as a computational
  /// basis measurement whose outcome is forgotten, which leaves every other
  /// party's reduced state unchanged.
  void discard(QubitHandle q, Rng& rng);

  bool is_live(QubitHandle q) const;
  std::size_t live_count() const { return live_; }
  std::uint64_t qubits_created() const { return created_; }
  FactorSnapshot snapshot(QubitHandle q) const;

 private:
  struct Factor {
    std::vector<std::uint32_t> qubits;
    std::vector<Amplitude> amp;
    bool in_use = false;
  };
  struct Record {
    std::uint32_t factor = 0;
    bool live = false;
  };

  std::uint32_t new_factor(std::vector<std::uint32_t> qubits, std::vector<Amplitude> amp);
  std::uint32_t new_qubit();
  const Record& live_record(QubitHandle q) const;
  int position(const Factor& f, std::uint32_t qubit) const;
  /// Brings q1 and q2 into one factor; returns its index.
  std::uint32_t merge(std::uint32_t fa, std::uint32_t fb);
  void hadamard(Factor& f, int pos);
  void pauli_x(Factor& f, int pos);
  void pauli_z(Factor& f, int pos);
  void cnot(Factor& f, int control, int target);
  int measure_computational(std::uint32_t qubit, Rng& rng);
  void check_norm(const Factor& f) const;

  std::size_t capacity_;
  std::vector<Factor> factors_;
  std::vector<std::uint32_t> free_factors_;
  std::vector<Record> records_;
  std::size_t live_ = 0;
  std::uint64_t created_ = 0;
};

}  // namespace zkpos::qsim
