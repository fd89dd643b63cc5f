#include "zkpos/pc/commit.hpp"

#include "codec.hpp"

#include <algorithm>
#include <map>

namespace zkpos::pc {

using crypto::Ciphertext;
using crypto::PublicParams;
using namespace detail;

namespace {

constexpr std::uint8_t kPpTag = 'P';
constexpr std::uint8_t kCommitTag = 'K';
constexpr std::uint8_t kEntryTag = 'E';
constexpr std::uint32_t kRhoMagic = 0x50434D54;  // "PCMT"
constexpr std::uint32_t kOpeningMagic = 0x504F504E;  // "POPN"
constexpr std::uint16_t kRhoVersion = 1;

bool suppressed(const std::vector<SpatialPoint>& list, const SpatialPoint& p) {
  return std::find(list.begin(), list.end(), p) != list.end();
}

std::string entry_label(std::size_t alpha, int round) {
  return "a" + std::to_string(alpha) + "." + std::to_string(round);
}

}  // namespace

void CommitScenario::validate() const {
  if (S.empty()) throw PcError("committable set S is empty");
  const std::size_t d = dimension();
  if (d < 1 || d > 3 || k() != d + 1) throw PcError("need d + 1 verifiers with 1 <= d <= 3");
  if (kappa < 1 || kappa > 64) throw PcError("kappa must be in [1, 64]");
  if (lambda_com < 1 || lambda_com > crypto::kMaxLambdaCom) throw PcError("lambda_com must be in [1, 96]");
  if (S.size() * static_cast<std::size_t>(rounds) >= kCommitLabel) throw PcError("too many sessions");
  Rational t_min = S.front().t;
  for (const auto& a : S) t_min = std::min(t_min, a.t);
  if (t_init > t_min) throw PcError("t_init must not exceed the earliest committable time");
  for (std::size_t a = 0; a < S.size(); ++a) {
    if (S[a].L.size() != d) throw PcError("committable point dimension mismatch");
    for (std::size_t b = 0; b < a; ++b) {
      if (S[a] == S[b]) throw PcError("duplicate committable point");
    }
    try {
      instance(a).validate();
    } catch (const pv::PvError& e) {
      throw PcError("point " + std::to_string(a) + ": " + e.what() + " (challenges may not leave before t1)");
    }
  }
}

Time CommitScenario::T() const {
  Time t = Time::zero();
  for (const auto& a : S) {
    for (const auto& x : verifiers) t = std::max(t, sim::distance(a.L, x).value);
  }
  return t;
}

Time CommitScenario::t_final() const {
  Time t = t1();
  for (std::size_t a = 0; a < S.size(); ++a) {
    for (std::size_t i = 0; i < k(); ++i) t = std::max(t, expected_time(a, i));
  }
  return t;
}

pv::PvInstance CommitScenario::instance(std::size_t alpha) const {
  pv::PvInstance inst;
  inst.verifiers = verifiers;
  inst.target = S.at(alpha);
  inst.n = n;
  inst.rounds = rounds;
  inst.start = t1().to_rational();
  return inst;
}

Time CommitScenario::expected_time(std::size_t alpha, std::size_t verifier) const {
  return sim::arrival_time(S.at(alpha).time(), S[alpha].L, verifiers.at(verifier));
}

Rational CommitScenario::latest_t_init() const {
  std::optional<Time> earliest;
  for (const auto& a : S) {
    for (const auto& x : verifiers) {
      const Time send = a.time() - sim::distance(a.L, x).value;
      earliest = earliest ? std::min(*earliest, send) : send;
    }
  }
  if (!earliest) throw PcError("committable set S is empty");
  return (*earliest - T() - T()).to_rational();
}

Bytes CommitScenario::serialize() const {
  ByteWriter w;
  w.u16(static_cast<std::uint16_t>(dimension()));
  w.u16(static_cast<std::uint16_t>(k()));
  for (const auto& v : verifiers) write_point(w, v);
  w.u32(static_cast<std::uint32_t>(S.size()));
  for (const auto& a : S) {
    write_point(w, a.L);
    write_rational(w, a.t);
  }
  w.u32(static_cast<std::uint32_t>(n));
  w.u32(static_cast<std::uint32_t>(rounds));
  w.u32(static_cast<std::uint32_t>(kappa));
  w.u32(static_cast<std::uint32_t>(lambda_com));
  write_rational(w, t_init);
  return w.take();
}

CommitScenario CommitScenario::parse(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  CommitScenario sc;
  const std::size_t d = r.u16();
  const std::size_t k = r.u16();
  if (d < 1 || d > 3 || k != d + 1) throw FormatError("bad scenario dimensions");
  for (std::size_t i = 0; i < k; ++i) sc.verifiers.push_back(read_point(r, d));
  const std::uint32_t n_s = r.u32();
  if (n_s > r.remaining()) throw FormatError("bad committable set size");
  for (std::uint32_t a = 0; a < n_s; ++a) {
    SpacetimePoint p;
    p.L = read_point(r, d);
    p.t = read_rational(r);
    sc.S.push_back(std::move(p));
  }
  sc.n = static_cast<int>(r.u32());
  sc.rounds = static_cast<int>(r.u32());
  sc.kappa = static_cast<int>(r.u32());
  sc.lambda_com = static_cast<int>(r.u32());
  sc.t_init = read_rational(r);
  if (!r.done()) throw FormatError("trailing bytes in scenario section");
  if (sc.n < 1 || sc.n > 4096 || sc.rounds < 1 || sc.rounds > 4096) throw FormatError("bad protocol parameters");
  try {
    sc.validate();
  } catch (const PcError& e) {
    throw FormatError(std::string("invalid scenario: ") + e.what());
  }
  return sc;
}

const TranscriptEntry* CommitmentState::find(std::uint16_t receiver, std::uint32_t label) const {
  for (const auto& e : M) {
    if (e.receiver == receiver && e.label == label) return &e;
  }
  return nullptr;
}

Bytes CommitmentState::serialize() const {
  ByteWriter w;
  w.u32(kRhoMagic);
  w.u16(kRhoVersion);
  w.section(scenario.serialize());
  w.section(pp.serialize());
  {
    ByteWriter c_w;
    write_bits(c_w, c);
    w.section(c_w.bytes());
  }
  {
    ByteWriter s_w;
    s_w.u64(s);
    w.section(s_w.bytes());
  }
  ByteWriter m_w;
  m_w.u32(static_cast<std::uint32_t>(M.size()));
  for (const auto& e : M) {
    m_w.u16(e.receiver);
    m_w.i128(e.timestamp.raw());
    m_w.u32(e.label);
    m_w.section(e.body);
  }
  w.section(m_w.bytes());
  return w.take();
}

CommitmentState CommitmentState::parse(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  if (r.u32() != kRhoMagic) throw FormatError("not a commitment-state file");
  if (r.u16() != kRhoVersion) throw FormatError("unsupported commitment-state version");
  CommitmentState rho;
  rho.scenario = CommitScenario::parse(r.section());
  rho.pp = PublicParams::parse(r.section());
  {
    const Bytes c_b = r.section();
    ByteReader c_r(c_b);
    rho.c = read_bits(c_r);
    if (!c_r.done()) throw FormatError("trailing bytes in commitment section");
  }
  {
    const Bytes s_b = r.section();
    ByteReader s_r(s_b);
    rho.s = s_r.u64();
    if (!s_r.done()) throw FormatError("trailing bytes in seed section");
  }
  const Bytes m_b = r.section();
  ByteReader m_r(m_b);
  const std::uint32_t count = m_r.u32();
  for (std::uint32_t i = 0; i < count; ++i) {
    TranscriptEntry e;
    e.receiver = m_r.u16();
    e.timestamp = Time::from_raw(m_r.i128());
    e.label = m_r.u32();
    e.body = m_r.section();
    rho.M.push_back(std::move(e));
  }
  if (!m_r.done() || !r.done()) throw FormatError("trailing bytes in commitment state");
  return rho;
}

Bytes Opening::serialize() const {
  ByteWriter w;
  w.u32(kOpeningMagic);
  write_bits(w, sk);
  write_bits(w, r);
  return w.take();
}

Opening Opening::parse(std::span<const std::uint8_t> bytes) {
  ByteReader rd(bytes);
  if (rd.u32() != kOpeningMagic) throw FormatError("not an opening file");
  Opening o;
  o.sk = read_bits(rd);
  o.r = read_bits(rd);
  if (!rd.done()) throw FormatError("trailing bytes in opening");
  return o;
}

Bytes encode_pp(const PublicParams& pp) {
  Bytes out{kPpTag};
  const Bytes body = pp.serialize();
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

std::optional<PublicParams> decode_pp(std::span<const std::uint8_t> bytes) {
  if (bytes.empty() || bytes[0] != kPpTag) return std::nullopt;
  try {
    return PublicParams::parse(bytes.subspan(1));
  } catch (const FormatError&) {
    return std::nullopt;
  }
}

Bytes encode_commitment(const crypto::Commitment& c) {
  ByteWriter w;
  w.u8(kCommitTag);
  write_bits(w, c);
  return w.take();
}

std::optional<crypto::Commitment> decode_commitment(std::span<const std::uint8_t> bytes) {
  try {
    ByteReader r(bytes);
    if (r.u8() != kCommitTag) return std::nullopt;
    Bits c = read_bits(r);
    if (!r.done()) return std::nullopt;
    return c;
  } catch (const FormatError&) {
    return std::nullopt;
  }
}

Bytes encode_entry(std::uint32_t label, const Ciphertext& ct) {
  ByteWriter w;
  w.u8(kEntryTag);
  w.u32(label);
  w.section(ct.serialize());
  return w.take();
}

std::optional<std::pair<std::uint32_t, Bytes>> decode_entry(std::span<const std::uint8_t> bytes) {
  try {
    ByteReader r(bytes);
    if (r.u8() != kEntryTag) return std::nullopt;
    const std::uint32_t label = r.u32();
    Bytes body = r.section();
    if (!r.done()) return std::nullopt;
    return std::make_pair(label, std::move(body));
  } catch (const FormatError&) {
    return std::nullopt;
  }
}

CommitVerifier::CommitVerifier(const CommitScenario& sc, pv::SharedRandomness s, std::size_t index,
                               std::optional<PublicParams> pp, std::vector<SpatialPoint> suppressed_targets)
    : sc_(sc), s_(s), index_(index), pp_(std::move(pp)), suppressed_(std::move(suppressed_targets)) {}

void CommitVerifier::on_start(sim::Context& ctx) {
  if (index_ == 0 && pp_) ctx.send(sim::Signal::broadcast(ctx.now(), encode_pp(*pp_), "pp"));
  ctx.set_timer(sc_.t1(), 1);
}

void CommitVerifier::on_timer(sim::Context& ctx, std::uint64_t) {
  // The basic scheme starts every per-point session at t1.
  for (std::size_t a = 0; a < sc_.S.size(); ++a) {
    if (suppressed(suppressed_, sc_.S[a].L)) continue;
    const auto inst = sc_.instance(a);
    const auto s_a = s_.sub(a);
    for (int j = 0; j < sc_.rounds; ++j) {
      const auto ch = pv::gen_challenge(s_a, inst, j);
      const pv::ChallengeMsg msg{sc_.label(a, j), static_cast<std::uint16_t>(index_), ch.x[index_], std::nullopt};
      auto sig = sim::Signal::directional(ch.send_times[index_], sc_.S[a].L, msg.encode(), "x" + entry_label(a, j));
      if (index_ == 0) sig.qubits.push_back(ctx.arena().prepare_bb84(ch.b, ch.theta));
      ctx.count(sim::OpKind::kChallenge);
      ctx.send(std::move(sig));
    }
  }
}

void CommitVerifier::on_receive(sim::Context& ctx, sim::Delivery& d) {
  for (auto q : d.qubits) ctx.arena().discard(q, ctx.rng());
  d.qubits.clear();
  const auto idx = static_cast<std::uint16_t>(index_);
  if (auto c = decode_commitment(d.payload)) {
    if (seen_.insert(kCommitLabel).second) {
      entries_.push_back({idx, d.time, kCommitLabel, pack_bits(*c)});
      ctx.count(sim::OpKind::kReceive);
    }
  } else if (auto e = decode_entry(d.payload)) {
    if (e->first != kCommitLabel && seen_.insert(e->first).second) {
      entries_.push_back({idx, d.time, e->first, std::move(e->second)});
      ctx.count(sim::OpKind::kReceive);
    }
  }
}

HonestCommitter::HonestCommitter(const CommitScenario& sc, std::optional<std::size_t> alpha,
                                 std::shared_ptr<std::optional<Opening>> opening_out)
    : sc_(sc), alpha_(alpha), opening_out_(std::move(opening_out)), collector_(sc.k(), true) {}

void HonestCommitter::start(sim::Context& ctx, const PublicParams& pp) {
  started_ = true;
  auto sk = crypto::gen_secret_key(sc_.kappa, ctx.rng());
  const Bits r = ctx.rng().bits(static_cast<std::size_t>(sc_.kappa) * sc_.lambda_com);
  const auto c = crypto::com(pp, sk.bits, r);
  if (opening_out_) *opening_out_ = Opening{sk.bits, r};
  enc_.emplace(std::move(sk), sc_.layout());
  const SpatialPoint& here = ctx.position();
  auto send_to = [&](std::size_t i, Time arrive, Bytes payload, std::string label) {
    const Time at = std::max(ctx.now(), arrive - sim::distance(here, sc_.verifiers[i]).value);
    ctx.send(sim::Signal::directional(at, sc_.verifiers[i], std::move(payload), std::move(label)));
  };
  for (std::size_t i = 0; i < sc_.k(); ++i) send_to(i, sc_.t1(), encode_commitment(c), "c");
  // Every other point's responses are dummies, computed now and timed to
  // arrive when that point's verifiers expect them.
  for (std::size_t a = 0; a < sc_.S.size(); ++a) {
    if (alpha_ && *alpha_ == a) continue;
    for (int j = 0; j < sc_.rounds; ++j) {
      for (std::size_t i = 0; i < sc_.k(); ++i) {
        const auto ct = enc_->encrypt(sc_.enc_index(a, i, j), std::nullopt);
        ctx.count(sim::OpKind::kEncrypt);
        ctx.count(sim::OpKind::kPrgBlock);
        send_to(i, sc_.expected_time(a, i), encode_entry(sc_.label(a, j), ct), entry_label(a, j));
      }
    }
  }
}

void HonestCommitter::on_receive(sim::Context& ctx, sim::Delivery& d) {
  if (!started_) {
    if (auto pp = decode_pp(d.payload)) {
      start(ctx, *pp);
      return;
    }
  }
  const auto done = collector_.add(ctx, d);
  if (!done) return;
  auto& rd = collector_.round(*done);
  const std::size_t a = *done / static_cast<std::uint32_t>(sc_.rounds);
  const int j = static_cast<int>(*done % static_cast<std::uint32_t>(sc_.rounds));
  if (!started_ || !alpha_ || *alpha_ != a || a >= sc_.S.size()) {
    ctx.arena().discard(*rd.qubit, ctx.rng());
    rd.qubit.reset();
    return;
  }
  const int y = pv::honest_respond(collector_.xs(*done), *rd.qubit, ctx.arena(), ctx.rng());
  rd.qubit.reset();
  for (std::size_t i = 0; i < sc_.k(); ++i) {
    const auto ct = enc_->encrypt(sc_.enc_index(a, i, j), Bits{static_cast<std::uint8_t>(y)});
    ctx.count(sim::OpKind::kEncrypt);
    ctx.count(sim::OpKind::kPrgBlock);
    ctx.send(sim::Signal::directional(ctx.now(), sc_.verifiers[i], encode_entry(*done, ct), entry_label(a, j)));
  }
}

CommitRun run_commit(const CommitScenario& sc, std::uint64_t seed, std::vector<PartySpec> provers,
                     const CommitOptions& options) {
  sc.validate();
  const auto s = pv::shared_randomness_for(seed);
  Rng pp_rng(derive_seed(seed, 3));
  const auto pp = crypto::com_setup(sc.lambda_com, static_cast<std::size_t>(sc.kappa), pp_rng);
  sim::EngineOptions eo;
  eo.seed = pv::engine_seed_for(seed);
  eo.start_time = Time::from_rational(sc.t_init);
  eo.record_log = options.record_log;
  sim::Engine engine(eo);
  std::vector<CommitVerifier*> verifiers;
  for (std::size_t i = 0; i < sc.k(); ++i) {
    verifiers.push_back(&engine.add(
        sc.verifiers[i], std::make_unique<CommitVerifier>(sc, s, i, i == 0 ? std::optional(pp) : std::nullopt,
                                                          options.suppressed_targets)));
  }
  for (auto& p : provers) engine.add_party(std::move(p.position), std::move(p.party), p.intercepts);
  engine.run_until(sc.t_final());

  CommitRun out;
  out.rho.scenario = sc;
  out.rho.pp = pp;
  out.rho.s = s.seed();
  for (auto* v : verifiers) {
    auto e = v->take_entries();
    out.rho.M.insert(out.rho.M.end(), std::make_move_iterator(e.begin()), std::make_move_iterator(e.end()));
  }
  std::sort(out.rho.M.begin(), out.rho.M.end(), [](const TranscriptEntry& a, const TranscriptEntry& b) {
    return std::tie(a.receiver, a.timestamp, a.label) < std::tie(b.receiver, b.timestamp, b.label);
  });
  const std::size_t c_bits = 3 * static_cast<std::size_t>(sc.lambda_com) * sc.kappa;
  if (const auto* e = out.rho.find(0, kCommitLabel); e && e->body.size() == (c_bits + 7) / 8) {
    out.rho.c = unpack_bits(e->body, c_bits);
  }
  out.ops = engine.ops();
  if (options.record_log) {
    out.causality_violations = sim::audit_causality(engine.log(), engine).size();
    out.log = engine.log();
  }
  return out;
}

CommitRun run_honest_commit(const CommitScenario& sc, std::size_t alpha, std::uint64_t seed, Opening& opening,
                            const CommitOptions& options) {
  auto sink = std::make_shared<std::optional<Opening>>();
  std::vector<PartySpec> provers;
  provers.push_back({sc.S.at(alpha).L, std::make_unique<HonestCommitter>(sc, alpha, sink)});
  auto run = run_commit(sc, seed, std::move(provers), options);
  if (*sink) opening = **sink;
  return run;
}

RevealResult reveal_phase(const CommitmentState& rho, const RevealRequest& req) {
  RevealResult out;
  try {
    const CommitScenario& sc = rho.scenario;
    if (req.alpha >= sc.S.size()) {
      out.reason = "claimed point is not in S";
      return out;
    }
    const std::size_t kappa = static_cast<std::size_t>(sc.kappa);
    if (req.opening.sk.size() != kappa || !crypto::com_verify(rho.pp, rho.c, {req.opening.sk, req.opening.r})) {
      out.reason = "opening does not match the commitment";
      return out;
    }
    std::map<std::pair<std::uint16_t, std::uint32_t>, const TranscriptEntry*> index;
    for (const auto& e : rho.M) index.emplace(std::make_pair(e.receiver, e.label), &e);
    const Bytes c_packed = pack_bits(rho.c);
    for (std::size_t i = 0; i < sc.k(); ++i) {
      auto it = index.find({static_cast<std::uint16_t>(i), kCommitLabel});
      if (it == index.end() || it->second->body != c_packed || it->second->timestamp > sc.t1()) {
        out.reason = "commitment did not reach every verifier by t1";
        return out;
      }
    }
    const crypto::SecretKey sk{req.opening.sk};
    const auto layout = sc.layout();
    for (std::size_t a = 0; a < sc.S.size(); ++a) {
      const auto inst = sc.instance(a);
      const auto s_a = pv::SharedRandomness(rho.s).sub(a);
      bool ok = true;
      for (int j = 0; ok && j < sc.rounds; ++j) {
        std::vector<std::optional<pv::ReceivedResponse>> got(sc.k());
        std::optional<int> y;
        for (std::size_t i = 0; ok && i < sc.k(); ++i) {
          auto it = index.find({static_cast<std::uint16_t>(i), sc.label(a, j)});
          if (it == index.end()) {
            ok = false;
            break;
          }
          std::optional<Bits> m;
          try {
            m = crypto::dec(sk, Ciphertext::parse(it->second->body, layout), layout);
          } catch (const FormatError&) {
            m.reset();
          }
          if (!m || (y && *y != (*m)[0])) {
            ok = false;
            break;
          }
          y = (*m)[0];
          got[i] = pv::ReceivedResponse{*y, it->second->timestamp};
        }
        ok = ok && pv::predicate_W(s_a, inst, j, got);
      }
      if (ok) out.accepting.push_back(a);
    }
    out.accept = out.accepting.size() == 1 && out.accepting.front() == req.alpha;
    if (!out.accept) out.reason = out.accepting.empty() ? "no point accepted" : "accepting set differs from {alpha}";
  } catch (const std::exception& e) {
    out.accept = false;
    out.reason = e.what();
  }
  return out;
}

VerifierView verifier_view(const CommitmentState& rho, Time tau) {
  VerifierView v{tau, rho.pp, rho.s, {}};
  for (const auto& e : rho.M) {
    if (e.timestamp <= tau) v.entries.push_back(e);
  }
  return v;
}

CommitmentState simulated_commitment_state(const PublicParams& pp, const CommitScenario& sc, std::uint64_t seed) {
  Rng rng(seed);
  const auto sk = crypto::gen_secret_key(sc.kappa, rng);
  const Bits r = rng.bits(static_cast<std::size_t>(sc.kappa) * sc.lambda_com);
  const auto c = crypto::com(pp, sk.bits, r);
  CommitmentState sim;
  sim.scenario = sc;
  sim.pp = pp;
  sim.c = c;
  sim.s = rng.u64();
  const auto layout = sc.layout();
  for (std::size_t i = 0; i < sc.k(); ++i) {
    sim.M.push_back({static_cast<std::uint16_t>(i), sc.t1(), kCommitLabel, pack_bits(c)});
    for (std::size_t a = 0; a < sc.S.size(); ++a) {
      for (int j = 0; j < sc.rounds; ++j) {
        const auto ct = crypto::enc(sk, sc.enc_index(a, i, j), std::nullopt, layout);
        sim.M.push_back({static_cast<std::uint16_t>(i), sc.expected_time(a, i), sc.label(a, j), ct.serialize()});
      }
    }
  }
  std::sort(sim.M.begin(), sim.M.end(), [](const TranscriptEntry& a, const TranscriptEntry& b) {
    return std::tie(a.receiver, a.timestamp, a.label) < std::tie(b.receiver, b.timestamp, b.label);
  });
  return sim;
}

VerifierView hiding_simulator(const PublicParams& pp, const CommitScenario& sc, Time tau, std::uint64_t seed) {
  return verifier_view(simulated_commitment_state(pp, sc, seed), tau);
}

ViewShape view_shape(const VerifierView& v) {
  ViewShape out;
  for (const auto& e : v.entries) out.emplace_back(e.receiver, e.timestamp, e.label, e.body.size());
  return out;
}

}  // namespace zkpos::pc
