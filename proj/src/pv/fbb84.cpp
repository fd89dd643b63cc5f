#include "zkpos/pv/fbb84.hpp"

#include <algorithm>

namespace zkpos::pv {

namespace {
constexpr std::uint8_t kChallengeTag = 'C';
constexpr std::uint8_t kResponseTag = 'R';
}  // namespace

int f(std::span<const Bits> xs) {
  if (xs.size() < 2) throw PvError("f needs at least two challenge strings");
  const std::size_t n = xs[0].size();
  for (const auto& x : xs) {
    if (x.size() != n) throw PvError("challenge strings must have equal length");
  }
  const Bits& last = xs.back();
  int acc = 0;
  for (std::size_t j = 0; j < n; ++j) {
    int fold = 0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) fold ^= xs[i][j] & 1;
    acc ^= fold & last[j];
  }
  return acc;
}

const ChallengeScheme& fbb84_scheme() {
  static const Fbb84Scheme scheme;
  return scheme;
}

void PvInstance::validate() const {
  const std::size_t d = dimension();
  if (d < 1 || d > 3) throw PvError("dimension must be 1, 2 or 3");
  if (k() != d + 1) throw PvError("need exactly d + 1 verifiers");
  for (const auto& v : verifiers) {
    if (v.size() != d) throw PvError("verifier dimension mismatch");
  }
  if (n < 1) throw PvError("challenge length n must be positive");
  if (rounds < 1) throw PvError("rounds must be positive");
  if (!sim::in_convex_hull(target.L, verifiers)) throw PvError("target lies outside the verifiers' convex hull");
  const Time t0 = Time::from_rational(start);
  for (std::size_t i = 0; i < k(); ++i) {
    if (send_time(i) < t0) throw PvError("target time too early: a challenge would leave before the start");
  }
}

Time PvInstance::send_time(std::size_t verifier) const {
  return target_time() - sim::distance(verifiers.at(verifier), target.L).value;
}

Time PvInstance::response_time(std::size_t verifier) const {
  return sim::arrival_time(target_time(), target.L, verifiers.at(verifier));
}

std::vector<SpatialPoint> place_verifiers(std::span<const SpacetimePoint> S, const Rational& margin) {
  return sim::enclosing_simplex(S, margin);
}

RoundSecrets SharedRandomness::round(std::uint64_t index, std::size_t k, int n) const {
  Rng rng(derive_seed(seed_, index));
  RoundSecrets out;
  out.x.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.x.push_back(rng.bits(static_cast<std::size_t>(n)));
  out.b = rng.bit();
  return out;
}

PvChallengeRound gen_challenge(const SharedRandomness& s, const PvInstance& inst, int round,
                               const ChallengeScheme& scheme) {
  if (round < 0 || round >= inst.rounds) throw PvError("round out of range");
  auto secrets = s.round(static_cast<std::uint64_t>(round), inst.k(), inst.n);
  PvChallengeRound out;
  out.round = round;
  out.theta = scheme.basis(secrets.x);
  out.x = std::move(secrets.x);
  out.b = secrets.b;
  for (std::size_t i = 0; i < inst.k(); ++i) out.send_times.push_back(inst.send_time(i));
  out.arrival = inst.target_time();
  return out;
}

int honest_respond(std::span<const Bits> xs, qsim::QubitHandle q, qsim::QuantumArena& arena, Rng& rng,
                   const ChallengeScheme& scheme) {
  return arena.measure(q, scheme.basis(xs), rng);
}

bool predicate_W(const SharedRandomness& s, const PvInstance& inst, int round,
                 std::span<const std::optional<ReceivedResponse>> received) {
  if (received.size() != inst.k()) return false;
  const int b = s.round(static_cast<std::uint64_t>(round), inst.k(), inst.n).b;
  for (std::size_t i = 0; i < inst.k(); ++i) {
    if (!received[i] || received[i]->y != b || received[i]->time != inst.response_time(i)) return false;
  }
  return true;
}

Bytes ChallengeMsg::encode() const {
  ByteWriter w;
  w.u8(kChallengeTag);
  w.u32(round);
  w.u16(verifier);
  w.u16(static_cast<std::uint16_t>(x.size()));
  w.raw(pack_bits(x));
  w.u8(b ? 1 : 0);
  w.u8(b ? static_cast<std::uint8_t>(*b & 1) : 0);
  return w.take();
}

std::optional<ChallengeMsg> ChallengeMsg::decode(std::span<const std::uint8_t> bytes) {
  try {
    ByteReader r(bytes);
    if (r.u8() != kChallengeTag) return std::nullopt;
    ChallengeMsg m;
    m.round = r.u32();
    m.verifier = r.u16();
    const std::size_t n = r.u16();
    m.x = unpack_bits(r.raw((n + 7) / 8), n);
    const std::uint8_t has_b = r.u8();
    const std::uint8_t b = r.u8();
    if (has_b > 1 || b > 1 || !r.done()) return std::nullopt;
    if (has_b) m.b = b;
    return m;
  } catch (const FormatError&) {
    return std::nullopt;
  }
}

Bytes ResponseMsg::encode() const {
  ByteWriter w;
  w.u8(kResponseTag);
  w.u32(round);
  w.u8(static_cast<std::uint8_t>(y & 1));
  return w.take();
}

std::optional<ResponseMsg> ResponseMsg::decode(std::span<const std::uint8_t> bytes) {
  try {
    ByteReader r(bytes);
    if (r.u8() != kResponseTag) return std::nullopt;
    ResponseMsg m;
    m.round = r.u32();
    const std::uint8_t y = r.u8();
    if (y > 1 || !r.done()) return std::nullopt;
    m.y = y;
    return m;
  } catch (const FormatError&) {
    return std::nullopt;
  }
}

std::optional<std::uint32_t> ChallengeCollector::add(sim::Context& ctx, sim::Delivery& d) {
  auto discard_all = [&] {
    for (auto q : d.qubits) ctx.arena().discard(q, ctx.rng());
    d.qubits.clear();
  };
  const auto msg = ChallengeMsg::decode(d.payload);
  if (!msg || msg->verifier >= k_) {
    discard_all();
    return std::nullopt;
  }
  Round& rd = rounds_[msg->round];
  if (rd.x.empty()) rd.x.resize(k_);
  if (rd.done || rd.x[msg->verifier]) {
    discard_all();
    return std::nullopt;
  }
  rd.x[msg->verifier] = msg->x;
  if (msg->verifier == 0) {
    if (quantum_ && !d.qubits.empty()) {
      rd.qubit = d.qubits.front();
      d.qubits.erase(d.qubits.begin());
    }
    if (msg->b) rd.b = msg->b;
  }
  discard_all();
  const bool all_x = std::all_of(rd.x.begin(), rd.x.end(), [](const auto& x) { return x.has_value(); });
  if (!all_x || (quantum_ ? !rd.qubit : !rd.b)) return std::nullopt;
  rd.done = true;
  return msg->round;
}

std::vector<Bits> ChallengeCollector::xs(std::uint32_t index) const {
  std::vector<Bits> out;
  for (const auto& x : rounds_.at(index).x) out.push_back(x.value_or(Bits{}));
  return out;
}

void HonestProver::on_receive(sim::Context& ctx, sim::Delivery& d) {
  const auto done = collector_.add(ctx, d);
  if (!done) return;
  auto& rd = collector_.round(*done);
  const auto xs = collector_.xs(*done);
  const int y = scheme_.quantum() ? honest_respond(xs, *rd.qubit, ctx.arena(), ctx.rng(), scheme_) : *rd.b;
  rd.qubit.reset();
  ctx.send(sim::Signal::broadcast(ctx.now(), ResponseMsg{*done, y}.encode(), "response"));
}

PvVerifier::PvVerifier(const PvInstance& inst, const SharedRandomness& s, std::size_t index,
                       const ChallengeScheme& scheme)
    : inst_(inst), s_(s), index_(index), scheme_(scheme), received_(inst.rounds) {}

void PvVerifier::on_start(sim::Context& ctx) {
  for (int r = 0; r < inst_.rounds; ++r) {
    const auto ch = gen_challenge(s_, inst_, r, scheme_);
    ChallengeMsg msg{static_cast<std::uint32_t>(r), static_cast<std::uint16_t>(index_), ch.x[index_], std::nullopt};
    if (index_ == 0 && !scheme_.quantum()) msg.b = ch.b;
    auto sig = sim::Signal::directional(ch.send_times[index_], inst_.target.L, msg.encode(), "challenge");
    if (index_ == 0 && scheme_.quantum()) sig.qubits.push_back(ctx.arena().prepare_bb84(ch.b, ch.theta));
    ctx.count(sim::OpKind::kChallenge);
    ctx.send(std::move(sig));
  }
}

void PvVerifier::on_receive(sim::Context& ctx, sim::Delivery& d) {
  for (auto q : d.qubits) ctx.arena().discard(q, ctx.rng());
  d.qubits.clear();
  const auto msg = ResponseMsg::decode(d.payload);
  if (!msg || msg->round >= received_.size() || received_[msg->round]) return;
  received_[msg->round] = ReceivedResponse{msg->y, d.time};
}

PvOutcome run_singleton_pv(const PvInstance& inst, std::uint64_t seed, std::vector<PartySpec> provers,
                           const PvRunOptions& options) {
  inst.validate();
  const ChallengeScheme& scheme = options.scheme ? *options.scheme : fbb84_scheme();
  const SharedRandomness s = shared_randomness_for(seed);
  sim::EngineOptions eo;
  eo.seed = engine_seed_for(seed);
  eo.start_time = Time::from_rational(inst.start);
  eo.record_log = options.record_log;
  sim::Engine engine(eo);
  std::vector<PvVerifier*> verifiers;
  for (std::size_t i = 0; i < inst.k(); ++i) {
    verifiers.push_back(&engine.add(inst.verifiers[i], std::make_unique<PvVerifier>(inst, s, i, scheme)));
  }
  for (auto& p : provers) engine.add_party(std::move(p.position), std::move(p.party), p.intercepts);
  Time t_end = inst.target_time();
  for (std::size_t i = 0; i < inst.k(); ++i) t_end = std::max(t_end, inst.response_time(i));
  engine.run_until(t_end);

  PvOutcome out;
  out.accept = true;
  for (int r = 0; r < inst.rounds; ++r) {
    std::vector<std::optional<ReceivedResponse>> got;
    for (auto* v : verifiers) got.push_back(v->received()[r]);
    const bool ok = predicate_W(s, inst, r, got);
    out.round_ok.push_back(ok ? 1 : 0);
    out.accept = out.accept && ok;
  }
  if (options.record_log) {
    out.causality_violations = sim::audit_causality(engine.log(), engine).size();
    out.log = engine.log();
  }
  out.qubits_created = engine.arena().qubits_created();
  return out;
}

}  // namespace zkpos::pv
