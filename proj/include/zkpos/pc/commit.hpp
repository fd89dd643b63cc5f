#pragma once

#include <memory>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "zkpos/crypto/commitment.hpp"
#include "zkpos/crypto/encryption.hpp"
#include "zkpos/pv/fbb84.hpp"

namespace zkpos::pc {

using pv::PartySpec;
using sim::Rational;
using sim::SpacetimePoint;
using sim::SpatialPoint;
using sim::Time;

class PcError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Label of the commitment-string entries in M.
constexpr std::uint32_t kCommitLabel = 0xFFFFFFFFu;

/// Verifier geometry, committable set S and protocol parameters. Everything
/// Reveal needs besides (pp, c, M, s).
struct CommitScenario {
  std::vector<SpatialPoint> verifiers;
  std::vector<SpacetimePoint> S;
  int n = 8;
  int rounds = 1;
  int kappa = crypto::kDefaultKappa;
  int lambda_com = crypto::kDefaultLambdaCom;
  Rational t_init = 0;

  std::size_t k() const { return verifiers.size(); }
  std::size_t dimension() const { return verifiers.empty() ? 0 : verifiers.front().size(); }
  void validate() const;

  /// Longest travel time between a point of S and a verifier.
  Time T() const;
  Time t1() const { return Time::from_rational(t_init) + T() + T(); }
  /// Latest honest prover message arrival.
  Time t_final() const;
  /// The singleton f-BB84 instance for alpha; its challenges leave no
  /// earlier than t1.
  pv::PvInstance instance(std::size_t alpha) const;
  Time expected_time(std::size_t alpha, std::size_t verifier) const;
  std::uint32_t label(std::size_t alpha, int round) const { return static_cast<std::uint32_t>(alpha * rounds + round); }
  /// Canonical encryption counter: (alpha, verifier, round) order.
  std::uint64_t enc_index(std::size_t alpha, std::size_t verifier, int round) const {
    return (static_cast<std::uint64_t>(alpha) * k() + verifier) * static_cast<std::uint64_t>(rounds) + round;
  }
  crypto::FrameLayout layout() const { return crypto::FrameLayout{1}; }
  /// Largest t_init for which every challenge can leave after t1.
  Rational latest_t_init() const;

  Bytes serialize() const;
  static CommitScenario parse(std::span<const std::uint8_t> bytes);
  bool operator==(const CommitScenario&) const = default;
};

struct TranscriptEntry {
  std::uint16_t receiver = 0;
  Time timestamp;
  std::uint32_t label = 0;
  Bytes body;  ///< serialized ciphertext, or the packed commitment string

  bool operator==(const TranscriptEntry&) const = default;
};

/// rho = (pp, c, M, s) plus the scenario. M is kept in canonical
/// (receiver, timestamp, label) order: the engine's delivery order among
/// simultaneous arrivals depends on when the prover scheduled them.
struct CommitmentState {
  CommitScenario scenario;
  crypto::PublicParams pp;
  crypto::Commitment c;
  std::uint64_t s = 0;
  std::vector<TranscriptEntry> M;

  const TranscriptEntry* find(std::uint16_t receiver, std::uint32_t label) const;
  Bytes serialize() const;
  static CommitmentState parse(std::span<const std::uint8_t> bytes);
  bool operator==(const CommitmentState&) const = default;
};

struct Opening {
  Bits sk;
  Bits r;

  Bytes serialize() const;
  static Opening parse(std::span<const std::uint8_t> bytes);
};

// Prover message formats.
Bytes encode_pp(const crypto::PublicParams& pp);
std::optional<crypto::PublicParams> decode_pp(std::span<const std::uint8_t> bytes);
Bytes encode_commitment(const crypto::Commitment& c);
std::optional<crypto::Commitment> decode_commitment(std::span<const std::uint8_t> bytes);
Bytes encode_entry(std::uint32_t label, const crypto::Ciphertext& ct);
std::optional<std::pair<std::uint32_t, Bytes>> decode_entry(std::span<const std::uint8_t> bytes);

/// Verifier i during Commit. V1 (index 0) is the coordinator: it broadcasts
/// pp at t_init. From t1 every verifier sends its challenge components for
/// all alpha in S, and it records the first commitment and the first entry
/// per label it receives.
class CommitVerifier final : public sim::Party {
 public:
  CommitVerifier(const CommitScenario& sc, pv::SharedRandomness s, std::size_t index,
                 std::optional<crypto::PublicParams> pp = std::nullopt,
                 std::vector<SpatialPoint> suppressed_targets = {});
  void on_start(sim::Context& ctx) override;
  void on_timer(sim::Context& ctx, std::uint64_t tag) override;
  void on_receive(sim::Context& ctx, sim::Delivery& d) override;
  std::vector<TranscriptEntry> take_entries() { return std::move(entries_); }

 private:
  const CommitScenario& sc_;
  pv::SharedRandomness s_;
  std::size_t index_;
  std::optional<crypto::PublicParams> pp_;
  std::vector<SpatialPoint> suppressed_;
  std::vector<TranscriptEntry> entries_;
  std::set<std::uint32_t> seen_;
};

/// The honest Encrypt-Then-Verify prover sitting at S[alpha] (or at a point outside S
/// when alpha is empty, in which case it only sends dummies). Every message
/// it sends is directional, one copy per verifier.
class HonestCommitter final : public sim::Party {
 public:
  HonestCommitter(const CommitScenario& sc, std::optional<std::size_t> alpha,
                  std::shared_ptr<std::optional<Opening>> opening_out = nullptr);
  void on_receive(sim::Context& ctx, sim::Delivery& d) override;

 private:
  void start(sim::Context& ctx, const crypto::PublicParams& pp);

  const CommitScenario& sc_;
  std::optional<std::size_t> alpha_;
  std::shared_ptr<std::optional<Opening>> opening_out_;
  std::optional<crypto::SessionEncryptor> enc_;
  pv::ChallengeCollector collector_;
  bool started_ = false;
};

struct CommitOptions {
  bool record_log = true;
  /// Commit-phase verifiers skip directional challenges whose target is in
  /// this list (a malicious-verifier hook; honest runs leave it empty).
  std::vector<SpatialPoint> suppressed_targets;
};

struct CommitRun {
  CommitmentState rho;
  std::vector<sim::Event> log;
  std::vector<sim::OpRecord> ops;
  std::size_t causality_violations = 0;
};

CommitRun run_commit(const CommitScenario& sc, std::uint64_t seed, std::vector<PartySpec> provers,
                     const CommitOptions& options = {});

/// One honest prover at S[alpha]; the opening is written to `opening`.
CommitRun run_honest_commit(const CommitScenario& sc, std::size_t alpha, std::uint64_t seed, Opening& opening,
                            const CommitOptions& options = {});

struct RevealRequest {
  std::size_t alpha = 0;
  Opening opening;
};

struct RevealResult {
  bool accept = false;
  std::vector<std::size_t> accepting;  ///< the set A
  std::string reason;
};

/// Deterministic in (rho, request); never throws on malformed input.
RevealResult reveal_phase(const CommitmentState& rho, const RevealRequest& req);

/// What the verifiers hold at time tau: their coins, pp, and every recorded
/// prover message with timestamp <= tau.
struct VerifierView {
  Time tau;
  crypto::PublicParams pp;
  std::uint64_t s = 0;
  std::vector<TranscriptEntry> entries;
};

VerifierView verifier_view(const CommitmentState& rho, Time tau);

/// Runs the verifiers against a transcript built from a fresh key: the
/// commitment at t1 and Enc(sk, bot) at every time a verifier expects a
/// response for any alpha. Needs no prover and no position.
VerifierView hiding_simulator(const crypto::PublicParams& pp, const CommitScenario& sc, Time tau, std::uint64_t seed);

/// The full simulated state rho' behind hiding_simulator (its view at
/// t_final), with fresh verifier coins s.
CommitmentState simulated_commitment_state(const crypto::PublicParams& pp, const CommitScenario& sc,
                                           std::uint64_t seed);

/// (receiver, timestamp, label, length) per entry.
using ViewShape = std::vector<std::tuple<std::uint16_t, Time, std::uint32_t, std::size_t>>;
ViewShape view_shape(const VerifierView& v);

}  // namespace zkpos::pc
