#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "zkpos/common/bytes.hpp"
#include "zkpos/common/rng.hpp"
#include "zkpos/qsim/qsim.hpp"
#include "zkpos/sim/geometry.hpp"

namespace zkpos::sim {

using PartyId = std::uint32_t;

class SimError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class SignalMode { kDirectional, kBroadcast };

struct Signal {
  Time send_time;
  SignalMode mode = SignalMode::kBroadcast;
  /// Spatial target for directional signals; delivered only to parties
  /// located exactly there.
  SpatialPoint target;
  /// Filled in by the engine; if set by the caller it must equal the
  /// sender's position.
  SpatialPoint origin;
  Bytes payload;
  std::vector<qsim::QubitHandle> qubits;
  std::string label;

  static Signal broadcast(Time at, Bytes payload, std::string label = {});
  static Signal directional(Time at, SpatialPoint target, Bytes payload, std::string label = {});
};

struct Delivery {
  PartyId from = 0;
  Time time;
  Time send_time;
  SignalMode mode = SignalMode::kBroadcast;
  Bytes payload;
  /// Ownership of these handles passes to the receiver.
  std::vector<qsim::QubitHandle> qubits;
  std::string label;
};

enum class EventKind { kSend, kDeliver, kTick };

struct Event {
  std::uint64_t seq = 0;
  Time time;
  EventKind kind = EventKind::kSend;
  PartyId party = 0;
  /// Deliver: the sender. Send: the sender itself.
  PartyId from = 0;
  /// Seq of the originating send event (deliver) or of this event (send).
  std::uint64_t signal = 0;
  std::optional<SignalMode> mode;
  std::string label;
  Bytes payload;
};

/// Primitive-operation categories recorded for per-tick work profiles.
enum class OpKind { kEncrypt, kPrgBlock, kSend, kReceive, kChallenge };

struct OpRecord {
  PartyId party = 0;
  Time time;
  OpKind kind = OpKind::kSend;
  std::uint64_t count = 1;
};

class Engine;

/// Handle passed to party callbacks; scoped to one callback invocation.
class Context {
 public:
  Context(Engine& engine, PartyId id) : engine_(engine), id_(id) {}

  Time now() const;
  PartyId id() const { return id_; }
  const SpatialPoint& position() const;
  void send(Signal signal);
  void set_timer(Time at, std::uint64_t tag);
  void count(OpKind kind, std::uint64_t n = 1);
  qsim::QuantumArena& arena();
  Rng& rng();

 private:
  Engine& engine_;
  PartyId id_;
};

/// A party's program. Positions are static for the whole scenario.
class Party {
 public:
  virtual ~Party() = default;
  virtual void on_start(Context&) {}
  virtual void on_receive(Context&, Delivery&) {}
  virtual void on_timer(Context&, std::uint64_t /*tag*/) {}
};

struct EngineOptions {
  std::uint64_t seed = 0;
  Time start_time;
  bool record_log = true;
  bool record_payloads = true;
  std::size_t qubit_capacity = 4096;
};

/// Deterministic single-threaded discrete-event simulator. Events are
/// processed in (time, sender id, per-sender sequence, receiver) order.
class Engine {
 public:
  explicit Engine(EngineOptions options = {});

  /// An intercepting party also receives directional signals whose ray
  /// (from the origin through the target) passes through its position.
  /// Honest parties never intercept.
  PartyId add_party(SpatialPoint position, std::unique_ptr<Party> party, bool intercepts = false);
  template <class P>
  P& add(SpatialPoint position, std::unique_ptr<P> party, bool intercepts = false) {
    P& ref = *party;
    add_party(std::move(position), std::move(party), intercepts);
    return ref;
  }

  /// Validated enqueue on behalf of `party`.
  void schedule_send(PartyId party, Signal signal);
  void schedule_timer(PartyId party, Time at, std::uint64_t tag);

  /// Processes every event with time <= t_end. Parties' on_start run on the
  /// first call.
  const std::vector<Event>& run_until(Time t_end);

  Time now() const { return now_; }
  const std::vector<Event>& log() const { return log_; }
  const std::vector<OpRecord>& ops() const { return ops_; }
  const SpatialPoint& position(PartyId id) const { return parties_.at(id).position; }
  std::size_t party_count() const { return parties_.size(); }
  qsim::QuantumArena& arena() { return arena_; }
  Rng& party_rng(PartyId id) { return parties_.at(id).rng; }
  void count(PartyId party, OpKind kind, std::uint64_t n);
  /// Cached distance between two party positions.
  Time travel(PartyId a, PartyId b);

 private:
  struct Key {
    Time time;
    PartyId party = 0;
    std::uint64_t seq = 0;
    std::int64_t sub = -1;
    auto operator<=>(const Key&) const = default;
  };
  struct Pending {
    Key key;
    EventKind kind = EventKind::kSend;
    std::shared_ptr<Signal> signal;
    PartyId receiver = 0;
    std::uint64_t signal_seq = 0;
    std::uint64_t tag = 0;
    bool operator>(const Pending& o) const { return key > o.key; }
  };
  struct Slot {
    SpatialPoint position;
    std::unique_ptr<Party> party;
    std::uint64_t next_seq = 0;
    Rng rng;
    bool intercepts = false;
  };

  void process(Pending& p);
  std::uint64_t append_log(Event e);

  EngineOptions options_;
  Time now_;
  bool started_ = false;
  std::vector<Slot> parties_;
  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> queue_;
  std::vector<Event> log_;
  std::uint64_t event_counter_ = 0;
  std::vector<OpRecord> ops_;
  std::map<std::pair<PartyId, PartyId>, Time> travel_cache_;
  qsim::QuantumArena arena_;
  Rng engine_rng_;
};

/// Every delivery's time equals its send time plus the shared-rounding
/// distance between sender and receiver. Returns the seqs of violating
/// deliveries (empty on success).
std::vector<std::uint64_t> audit_causality(const std::vector<Event>& log, const Engine& engine);

std::string to_ndjson(const std::vector<Event>& log);
const char* to_string(EventKind kind);
const char* to_string(SignalMode mode);

}  // namespace zkpos::sim
