#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "zkpos/common/bytes.hpp"
#include "zkpos/common/rng.hpp"
#include "zkpos/sim/engine.hpp"
#include "zkpos/sim/geometry.hpp"

namespace zkpos::pv {

using sim::Rational;
using sim::SpacetimePoint;
using sim::SpatialPoint;
using sim::Time;

class PvError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Basis function. k = 2: <x1, x2> mod 2. k > 2: <x1 ^ ... ^ x_{k-1}, x_k>.
int f(std::span<const Bits> xs);

/// Decides the qubit basis from the classical challenges and whether the
/// hidden bit travels as a qubit at all. The secure protocol is f-BB84;
/// deliberately weakened variants live with the attacks.
class ChallengeScheme {
 public:
  virtual ~ChallengeScheme() = default;
  virtual int basis(std::span<const Bits> xs) const = 0;
  /// False: V1 sends b in the clear instead of a qubit.
  virtual bool quantum() const { return true; }
};

class Fbb84Scheme final : public ChallengeScheme {
 public:
  int basis(std::span<const Bits> xs) const override { return f(xs); }
};

const ChallengeScheme& fbb84_scheme();

struct PvInstance {
  std::vector<SpatialPoint> verifiers;
  SpacetimePoint target;
  int n = 8;
  int rounds = 1;
  Rational start = 0;

  std::size_t dimension() const { return target.L.size(); }
  std::size_t k() const { return verifiers.size(); }
  /// Throws PvError: k != d + 1, dimension mismatch, target outside the
  /// verifiers' hull, challenges that would have to leave before `start`.
  void validate() const;
  Time target_time() const { return target.time(); }
  Time send_time(std::size_t verifier) const;
  /// When verifier i expects the honest response.
  Time response_time(std::size_t verifier) const;
};

/// Verifier placement covering S: the enclosing simplex with clearance
/// `margin`.
std::vector<SpatialPoint> place_verifiers(std::span<const SpacetimePoint> S, const Rational& margin);

struct RoundSecrets {
  std::vector<Bits> x;
  int b = 0;
};

/// The verifiers' shared random string s, split into independent per-round
/// streams so that rounds can be regenerated in any order.
class SharedRandomness {
 public:
  explicit SharedRandomness(std::uint64_t seed) : seed_(seed) {}
  std::uint64_t seed() const { return seed_; }
  RoundSecrets round(std::uint64_t index, std::size_t k, int n) const;
  /// Independent stream for a labeled sub-session (e.g. one per committable
  /// point).
  SharedRandomness sub(std::uint64_t label) const { return SharedRandomness(derive_seed(seed_, 0xA1FA0000ull + label)); }

 private:
  std::uint64_t seed_;
};

struct PvChallengeRound {
  int round = 0;
  std::vector<Bits> x;
  int b = 0;
  int theta = 0;
  std::vector<Time> send_times;
  Time arrival;
};

PvChallengeRound gen_challenge(const SharedRandomness& s, const PvInstance& inst, int round,
                               const ChallengeScheme& scheme = fbb84_scheme());

/// Measures the challenge qubit in the basis the challenges select.
int honest_respond(std::span<const Bits> xs, qsim::QubitHandle q, qsim::QuantumArena& arena, Rng& rng,
                   const ChallengeScheme& scheme = fbb84_scheme());

struct ReceivedResponse {
  int y = 0;
  Time time;
};

/// W(s, y, t_1..t_k) for one round: every verifier got the same bit, equal
/// to b, exactly at its expected time. Missing responses give false.
bool predicate_W(const SharedRandomness& s, const PvInstance& inst, int round,
                 std::span<const std::optional<ReceivedResponse>> received);

// Wire formats shared by verifiers, honest provers and spoofers.

struct ChallengeMsg {
  std::uint32_t round = 0;
  std::uint16_t verifier = 0;
  Bits x;
  std::optional<int> b;  ///< classical variant only

  Bytes encode() const;
  static std::optional<ChallengeMsg> decode(std::span<const std::uint8_t> bytes);
};

struct ResponseMsg {
  std::uint32_t round = 0;
  int y = 0;

  Bytes encode() const;
  static std::optional<ResponseMsg> decode(std::span<const std::uint8_t> bytes);
};

/// Collects the k challenge components (and V1's qubit) of each round as
/// they arrive. Qubits the collector is handed but cannot use are discarded.
class ChallengeCollector {
 public:
  struct Round {
    std::vector<std::optional<Bits>> x;
    std::optional<qsim::QubitHandle> qubit;
    std::optional<int> b;
    bool done = false;
  };

  explicit ChallengeCollector(std::size_t k, bool quantum) : k_(k), quantum_(quantum) {}
  /// Returns the round index if this delivery completed it.
  std::optional<std::uint32_t> add(sim::Context& ctx, sim::Delivery& d);
  Round& round(std::uint32_t index) { return rounds_.at(index); }
  std::vector<Bits> xs(std::uint32_t index) const;

 private:
  std::size_t k_;
  bool quantum_;
  std::map<std::uint32_t, Round> rounds_;
};

/// The honest prover: measures each completed round and broadcasts y at once.
class HonestProver final : public sim::Party {
 public:
  HonestProver(std::size_t k, const ChallengeScheme& scheme) : collector_(k, scheme.quantum()), scheme_(scheme) {}
  void on_receive(sim::Context& ctx, sim::Delivery& d) override;

 private:
  ChallengeCollector collector_;
  const ChallengeScheme& scheme_;
};

/// Verifier i: sends its challenge component for every round so that it
/// reaches the target exactly at target time, and records the first
/// response per round.
class PvVerifier final : public sim::Party {
 public:
  PvVerifier(const PvInstance& inst, const SharedRandomness& s, std::size_t index, const ChallengeScheme& scheme);
  void on_start(sim::Context& ctx) override;
  void on_receive(sim::Context& ctx, sim::Delivery& d) override;
  const std::vector<std::optional<ReceivedResponse>>& received() const { return received_; }

 private:
  const PvInstance& inst_;
  SharedRandomness s_;
  std::size_t index_;
  const ChallengeScheme& scheme_;
  std::vector<std::optional<ReceivedResponse>> received_;
};

struct PartySpec {
  SpatialPoint position;
  std::unique_ptr<sim::Party> party;
  bool intercepts = false;  ///< see sim::Engine::add_party
};

struct PvRunOptions {
  bool record_log = true;
  const ChallengeScheme* scheme = nullptr;  ///< defaults to f-BB84
};

struct PvOutcome {
  bool accept = false;
  std::vector<std::uint8_t> round_ok;
  std::vector<sim::Event> log;
  std::size_t causality_violations = 0;
  std::uint64_t qubits_created = 0;
};

/// Runs all rounds in parallel against the given prover parties (none, one
/// honest prover, or a spoofer coalition). Accepts iff W holds in every
/// round. Verifiers are parties 0..k-1.
PvOutcome run_singleton_pv(const PvInstance& inst, std::uint64_t seed, std::vector<PartySpec> provers,
                           const PvRunOptions& options = {});

/// Seeds for the two independent consumers of a run seed.
inline SharedRandomness shared_randomness_for(std::uint64_t seed) { return SharedRandomness(derive_seed(seed, 1)); }
inline std::uint64_t engine_seed_for(std::uint64_t seed) { return derive_seed(seed, 2); }

}  // namespace zkpos::pv
