#pragma once

#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "zkpos/pc/commit.hpp"

namespace zkpos::pc {

/// Optimized Encrypt-Then-Verify: verifiers broadcast a fresh classical
/// challenge every tick, and the prover keeps every verifier supplied with
/// exactly one ciphertext per tick. Challenge ticks start at t1; response
/// slot s is received by every verifier at slot_time(s).
struct OptScenario {
  std::vector<SpatialPoint> verifiers;
  Rational delta = 1;
  int ticks = 16;
  int n = 8;
  int kappa = crypto::kDefaultKappa;
  int lambda_com = crypto::kDefaultLambdaCom;
  Rational t_init = 0;

  std::size_t k() const { return verifiers.size(); }
  std::size_t dimension() const { return verifiers.empty() ? 0 : verifiers.front().size(); }
  /// Throws PcError.
  void validate() const;

  /// Largest verifier-to-verifier distance; bounds travel within the hull.
  Time D() const;
  Time t1() const { return Time::from_rational(t_init) + D() + D(); }
  Time delta_time() const { return Time::from_rational(delta); }
  Time tick_time(std::int64_t m) const;
  Time slot_time(std::int64_t s) const;
  std::int64_t slots() const;
  Time t_final() const { return slot_time(slots() - 1); }
  /// Response payload: per-verifier tick (32 bits each), root bit, y.
  crypto::FrameLayout layout() const { return crypto::FrameLayout{32 * k() + 2}; }
  std::uint64_t enc_index(std::int64_t slot, std::size_t verifier) const {
    return static_cast<std::uint64_t>(slot) * k() + verifier;
  }

  Bytes serialize() const;
  static OptScenario parse(std::span<const std::uint8_t> bytes);
  bool operator==(const OptScenario&) const = default;
};

/// Tolerance on wavefront coincidence, 2^-20 time units.
Time mesh_tolerance();

/// A point where one broadcast from each verifier (tick ticks[i] from
/// verifier i) arrives within mesh_tolerance(). t is the latest of those
/// arrivals. `root` separates the two solutions a tick tuple can have for
/// d >= 2.
struct MeshPoint {
  std::vector<std::int64_t> ticks;
  int root = 0;
  SpatialPoint L;
  Time t;

  bool operator==(const MeshPoint&) const = default;
};

std::optional<MeshPoint> mesh_point_for(const OptScenario& sc, std::span<const std::int64_t> ticks, int root);

/// Every mesh point inside the verifiers' hull, sorted by (t, L).
std::vector<MeshPoint> mesh_points(const OptScenario& sc);

/// The slot in which verifier j expects the response for p.
std::int64_t response_slot(const OptScenario& sc, const MeshPoint& p, std::size_t verifier);

/// x_{i,m}: drawn from verifier i's own stream, independent of the others.
Bits tick_challenge(const pv::SharedRandomness& s, std::size_t verifier, std::int64_t tick, int n);

/// The classical challenge-response placeholder y(x_1..x_k) = f(x_1..x_k).
int placeholder_response(std::span<const Bits> xs);

Bits encode_response(const OptScenario& sc, const MeshPoint& p, int y);

struct OptCommitmentState {
  OptScenario scenario;
  crypto::PublicParams pp;
  crypto::Commitment c;
  std::uint64_t s = 0;
  std::vector<TranscriptEntry> M;  ///< labeled by response slot

  Bytes serialize() const;
  static OptCommitmentState parse(std::span<const std::uint8_t> bytes);
  bool operator==(const OptCommitmentState&) const = default;
};

class OptVerifier final : public sim::Party {
 public:
  OptVerifier(const OptScenario& sc, pv::SharedRandomness s, std::size_t index,
              std::optional<crypto::PublicParams> pp = std::nullopt);
  void on_start(sim::Context& ctx) override;
  void on_timer(sim::Context& ctx, std::uint64_t tick) override;
  void on_receive(sim::Context& ctx, sim::Delivery& d) override;
  std::vector<TranscriptEntry> take_entries() { return std::move(entries_); }

 private:
  const OptScenario& sc_;
  pv::SharedRandomness s_;
  std::size_t index_;
  std::optional<crypto::PublicParams> pp_;
  std::vector<TranscriptEntry> entries_;
  std::set<std::uint32_t> seen_;
};

/// Honest prover committed to `target` (or to nothing). One directional
/// message per verifier per slot, sent so that it arrives at slot_time.
class OptCommitter final : public sim::Party {
 public:
  OptCommitter(const OptScenario& sc, std::optional<MeshPoint> target,
               std::shared_ptr<std::optional<Opening>> opening_out = nullptr);
  void on_receive(sim::Context& ctx, sim::Delivery& d) override;
  void on_timer(sim::Context& ctx, std::uint64_t verifier) override;

 private:
  void start(sim::Context& ctx, const crypto::PublicParams& pp);
  void schedule(sim::Context& ctx, std::size_t verifier);

  const OptScenario& sc_;
  std::optional<MeshPoint> target_;
  std::shared_ptr<std::optional<Opening>> opening_out_;
  std::optional<crypto::SessionEncryptor> enc_;
  std::vector<std::optional<Bits>> xs_;
  std::optional<Bits> response_;
  std::vector<std::int64_t> next_slot_;
  std::vector<std::int64_t> real_slot_;
  bool started_ = false;
};

struct OptRun {
  OptCommitmentState rho;
  std::vector<sim::Event> log;
  std::vector<sim::OpRecord> ops;
  std::size_t causality_violations = 0;
};

OptRun run_optimized_commit(const OptScenario& sc, std::uint64_t seed, std::vector<PartySpec> provers,
                            bool record_log = true);
OptRun run_honest_optimized_commit(const OptScenario& sc, const MeshPoint& target, std::uint64_t seed,
                                   Opening& opening, bool record_log = true);

struct OptRevealResult {
  bool accept = false;
  std::vector<MeshPoint> accepting;
  std::string reason;
};

/// Accepts iff the set of mesh points whose responses check out is exactly
/// {claimed}. Never throws.
OptRevealResult reveal_optimized(const OptCommitmentState& rho, const MeshPoint& claimed, const Opening& opening);

struct TickWork {
  std::int64_t tick = 0;
  std::uint64_t prover_ops = 0;
  std::uint64_t verifier_ops = 0;
};

/// Buckets ops into [origin + m*delta, origin + (m+1)*delta). Parties with
/// id < verifier_count are verifiers, the rest provers. Every tick between
/// the first and last busy one is listed.
std::vector<TickWork> per_tick_work_profile(std::span<const sim::OpRecord> ops, std::size_t verifier_count,
                                            Time origin, Time delta);

struct WorkPeak {
  std::uint64_t prover = 0;
  std::uint64_t verifier = 0;
};
WorkPeak peak_work(std::span<const TickWork> profile);

}  // namespace zkpos::pc
