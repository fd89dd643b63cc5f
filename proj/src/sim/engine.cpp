#include "zkpos/sim/engine.hpp"

#include <nlohmann/json.hpp>
#include <unordered_map>

namespace zkpos::sim {

Signal Signal::broadcast(Time at, Bytes payload, std::string label) {
  Signal s;
  s.send_time = at;
  s.mode = SignalMode::kBroadcast;
  s.payload = std::move(payload);
  s.label = std::move(label);
  return s;
}

Signal Signal::directional(Time at, SpatialPoint target, Bytes payload, std::string label) {
  Signal s;
  s.send_time = at;
  s.mode = SignalMode::kDirectional;
  s.target = std::move(target);
  s.payload = std::move(payload);
  s.label = std::move(label);
  return s;
}

Time Context::now() const { return engine_.now(); }
const SpatialPoint& Context::position() const { return engine_.position(id_); }
void Context::send(Signal signal) { engine_.schedule_send(id_, std::move(signal)); }
void Context::set_timer(Time at, std::uint64_t tag) { engine_.schedule_timer(id_, at, tag); }
void Context::count(OpKind kind, std::uint64_t n) { engine_.count(id_, kind, n); }
qsim::QuantumArena& Context::arena() { return engine_.arena(); }
Rng& Context::rng() { return engine_.party_rng(id_); }

Engine::Engine(EngineOptions options)
    : options_(options),
      now_(options.start_time),
      arena_(options.qubit_capacity),
      engine_rng_(derive_seed(options.seed, 0xE17E)) {}

PartyId Engine::add_party(SpatialPoint position, std::unique_ptr<Party> party, bool intercepts) {
  if (started_) throw SimError("parties must be added before the simulation starts");
  if (!parties_.empty() && parties_.front().position.size() != position.size()) {
    throw GeometryError("party dimension mismatch");
  }
  const auto id = static_cast<PartyId>(parties_.size());
  parties_.push_back(Slot{std::move(position), std::move(party), 0, Rng(derive_seed(options_.seed, 1000 + id)),
                          intercepts});
  return id;
}

void Engine::count(PartyId party, OpKind kind, std::uint64_t n) { ops_.push_back({party, now_, kind, n}); }

Time Engine::travel(PartyId a, PartyId b) {
  const auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  auto it = travel_cache_.find(key);
  if (it != travel_cache_.end()) return it->second;
  const Time t = distance(parties_[a].position, parties_[b].position).value;
  travel_cache_.emplace(key, t);
  return t;
}

void Engine::schedule_send(PartyId party, Signal signal) {
  Slot& slot = parties_.at(party);
  if (signal.send_time < now_) throw SimError("send into the past");
  if (signal.origin.empty()) {
    signal.origin = slot.position;
  } else if (signal.origin != slot.position) {
    throw SimError("signal origin differs from the sender's position");
  }
  if (signal.mode == SignalMode::kBroadcast && !signal.qubits.empty()) {
    throw SimError("broadcast signals cannot carry quantum payloads");
  }
  if (signal.mode == SignalMode::kDirectional && signal.target.size() != slot.position.size()) {
    throw GeometryError("directional target dimension mismatch");
  }
  Pending p;
  p.key = {signal.send_time, party, slot.next_seq++, -1};
  p.kind = EventKind::kSend;
  p.signal = std::make_shared<Signal>(std::move(signal));
  queue_.push(std::move(p));
}

void Engine::schedule_timer(PartyId party, Time at, std::uint64_t tag) {
  Slot& slot = parties_.at(party);
  if (at < now_) throw SimError("timer in the past");
  Pending p;
  p.key = {at, party, slot.next_seq++, -1};
  p.kind = EventKind::kTick;
  p.tag = tag;
  queue_.push(std::move(p));
}

std::uint64_t Engine::append_log(Event e) {
  e.seq = event_counter_++;
  if (options_.record_log) {
    if (!options_.record_payloads) e.payload.clear();
    log_.push_back(std::move(e));
  }
  return event_counter_ - 1;
}

void Engine::process(Pending& p) {
  now_ = p.key.time;
  switch (p.kind) {
    case EventKind::kSend: {
      Signal& s = *p.signal;
      Event e;
      e.time = now_;
      e.kind = EventKind::kSend;
      e.party = p.key.party;
      e.from = p.key.party;
      e.mode = s.mode;
      e.label = s.label;
      if (options_.record_log) e.payload = s.payload;
      const std::uint64_t seq = append_log(std::move(e));
      if (options_.record_log) log_.back().signal = seq;
      count(p.key.party, OpKind::kSend, 1);

      std::vector<PartyId> receivers;
      for (PartyId r = 0; r < parties_.size(); ++r) {
        if (s.mode == SignalMode::kDirectional && parties_[r].position != s.target &&
            !(parties_[r].intercepts && r != p.key.party && on_ray(parties_[r].position, s.origin, s.target))) {
          continue;
        }
        receivers.push_back(r);
      }
      // Quantum payloads cannot be copied: only the first receiver along the
      // ray gets them (lowest id among equals).
      std::optional<PartyId> quantum_to;
      for (PartyId r : receivers) {
        if (!quantum_to || travel(p.key.party, r) < travel(p.key.party, *quantum_to)) quantum_to = r;
      }
      bool quantum_taken = false;
      for (PartyId r : receivers) {
        Pending d;
        d.key = {now_ + travel(p.key.party, r), p.key.party, p.key.seq, static_cast<std::int64_t>(r)};
        d.kind = EventKind::kDeliver;
        d.signal = p.signal;
        d.receiver = r;
        d.signal_seq = seq;
        d.tag = r == quantum_to ? 1 : 0;
        quantum_taken = true;
        queue_.push(std::move(d));
      }
      if (!quantum_taken) {
        for (auto q : s.qubits) arena_.discard(q, engine_rng_);
        s.qubits.clear();
      }
      break;
    }
    case EventKind::kDeliver: {
      const Signal& s = *p.signal;
      Event e;
      e.time = now_;
      e.kind = EventKind::kDeliver;
      e.party = p.receiver;
      e.from = p.key.party;
      e.signal = p.signal_seq;
      e.mode = s.mode;
      e.label = s.label;
      if (options_.record_log) e.payload = s.payload;
      append_log(std::move(e));

      Delivery d;
      d.from = p.key.party;
      d.time = now_;
      d.send_time = s.send_time;
      d.mode = s.mode;
      d.payload = s.payload;
      d.label = s.label;
      if (p.tag == 1) d.qubits = s.qubits;
      Context ctx(*this, p.receiver);
      parties_[p.receiver].party->on_receive(ctx, d);
      // Handles the receiver did not consume or keep are its responsibility;
      // parties that ignore qubits must discard them explicitly.
      break;
    }
    case EventKind::kTick: {
      Event e;
      e.time = now_;
      e.kind = EventKind::kTick;
      e.party = p.key.party;
      e.from = p.key.party;
      append_log(std::move(e));
      Context ctx(*this, p.key.party);
      parties_[p.key.party].party->on_timer(ctx, p.tag);
      break;
    }
  }
}

const std::vector<Event>& Engine::run_until(Time t_end) {
  if (!started_) {
    started_ = true;
    for (PartyId id = 0; id < parties_.size(); ++id) {
      Context ctx(*this, id);
      parties_[id].party->on_start(ctx);
    }
  }
  while (!queue_.empty() && queue_.top().key.time <= t_end) {
    Pending p = queue_.top();
    queue_.pop();
    process(p);
  }
  if (now_ < t_end) now_ = t_end;
  return log_;
}

std::vector<std::uint64_t> audit_causality(const std::vector<Event>& log, const Engine& engine) {
  std::unordered_map<std::uint64_t, const Event*> sends;
  std::vector<std::uint64_t> bad;
  for (const auto& e : log) {
    if (e.kind == EventKind::kSend) sends.emplace(e.seq, &e);
  }
  for (const auto& e : log) {
    if (e.kind != EventKind::kDeliver) continue;
    auto it = sends.find(e.signal);
    if (it == sends.end()) {
      bad.push_back(e.seq);
      continue;
    }
    const Event& s = *it->second;
    const Time expected = arrival_time(s.time, engine.position(s.party), engine.position(e.party));
    if (expected != e.time || s.party != e.from) bad.push_back(e.seq);
  }
  return bad;
}

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kSend: return "send";
    case EventKind::kDeliver: return "deliver";
    case EventKind::kTick: return "tick";
  }
  return "?";
}

const char* to_string(SignalMode mode) {
  return mode == SignalMode::kBroadcast ? "broadcast" : "directional";
}

std::string to_ndjson(const std::vector<Event>& log) {
  std::string out;
  for (const auto& e : log) {
    nlohmann::ordered_json j;
    j["seq"] = e.seq;
    j["time"] = e.time.to_decimal();
    j["kind"] = to_string(e.kind);
    j["party"] = e.party;
    if (e.kind == EventKind::kDeliver) j["from"] = e.from;
    if (e.kind != EventKind::kTick) j["signal"] = e.signal;
    j["mode"] = e.mode ? nlohmann::ordered_json(to_string(*e.mode)) : nlohmann::ordered_json(nullptr);
    j["label"] = e.label.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(e.label);
    j["payload_hex"] = to_hex(e.payload);
    j["payload_len"] = e.payload.size();
    out += j.dump();
    out.push_back('\n');
  }
  return out;
}

}  // namespace zkpos::sim
