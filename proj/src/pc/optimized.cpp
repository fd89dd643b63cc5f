#include "zkpos/pc/optimized.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "codec.hpp"

namespace zkpos::pc {

using crypto::PublicParams;
using namespace detail;
using sim::BigInt;

namespace {

constexpr std::uint32_t kRhoMagic = 0x50434D54;  // "PCMT"
constexpr std::uint16_t kOptVersion = 2;
constexpr int kSnapBits = 24;

Rational snap(double v) {
  const double scaled = std::nearbyint(std::ldexp(v, kSnapBits));
  return Rational(BigInt(static_cast<long long>(scaled)), BigInt(1) << kSnapBits);
}

std::vector<double> to_doubles(const SpatialPoint& p) {
  std::vector<double> out;
  for (const auto& c : p) out.push_back(static_cast<double>(c));
  return out;
}

/// Solves M x = b for d <= 3 by Gaussian elimination with partial pivoting.
bool solve(std::vector<std::vector<double>> M, std::vector<double>& b) {
  const std::size_t d = b.size();
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < d; ++r) {
      if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
    }
    if (std::abs(M[piv][col]) < 1e-12) return false;
    std::swap(M[piv], M[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < d; ++r) {
      if (r == col) continue;
      const double f = M[r][col] / M[col][col];
      for (std::size_t c = col; c < d; ++c) M[r][c] -= f * M[col][c];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t r = 0; r < d; ++r) b[r] /= M[r][r];
  return true;
}

std::optional<SpatialPoint> candidate_line(const OptScenario& sc, std::span<const std::int64_t> ticks, int root) {
  if (root != 0) return std::nullopt;
  const std::size_t lo = sc.verifiers[0][0] < sc.verifiers[1][0] ? 0 : 1, hi = 1 - lo;
  const Rational s_lo = sc.tick_time(ticks[lo]).to_rational(), s_hi = sc.tick_time(ticks[hi]).to_rational();
  return SpatialPoint{(sc.verifiers[lo][0] + sc.verifiers[hi][0] + s_hi - s_lo) / 2};
}

std::optional<SpatialPoint> candidate_numeric(const OptScenario& sc, std::span<const std::int64_t> ticks, int root) {
  // Origin at verifier 0 and its send time: |L - X_i| = t - s_i for all i.
  const std::size_t d = sc.dimension();
  const auto x0 = to_doubles(sc.verifiers[0]);
  const double s0 = sc.tick_time(ticks[0]).to_double();
  std::vector<std::vector<double>> M(d, std::vector<double>(d));
  std::vector<double> c(d), e(d);
  for (std::size_t i = 1; i <= d; ++i) {
    const auto xi = to_doubles(sc.verifiers[i]);
    const double si = sc.tick_time(ticks[i]).to_double() - s0;
    double norm = 0;
    for (std::size_t a = 0; a < d; ++a) {
      M[i - 1][a] = 2 * (xi[a] - x0[a]);
      norm += (xi[a] - x0[a]) * (xi[a] - x0[a]);
    }
    c[i - 1] = norm - si * si;
    e[i - 1] = 2 * si;
  }
  if (!solve(M, c) || !solve(M, e)) return std::nullopt;
  double qa = -1, qb = 0, qc = 0;
  for (std::size_t a = 0; a < d; ++a) {
    qa += e[a] * e[a];
    qb += 2 * c[a] * e[a];
    qc += c[a] * c[a];
  }
  double t;
  if (std::abs(qa) < 1e-12) {
    if (root != 0 || std::abs(qb) < 1e-12) return std::nullopt;
    t = -qc / qb;
  } else {
    const double disc = qb * qb - 4 * qa * qc;
    if (disc < 0) return std::nullopt;
    const double sq = std::sqrt(disc);
    const double r1 = (-qb - sq) / (2 * qa), r2 = (-qb + sq) / (2 * qa);
    t = root == 0 ? std::min(r1, r2) : std::max(r1, r2);
  }
  SpatialPoint L;
  for (std::size_t a = 0; a < d; ++a) L.push_back(snap(c[a] + e[a] * t + x0[a]));
  return L;
}

void write_scenario_fields(ByteWriter& w, const OptScenario& sc) {
  w.u16(static_cast<std::uint16_t>(sc.dimension()));
  w.u16(static_cast<std::uint16_t>(sc.k()));
  for (const auto& v : sc.verifiers) write_point(w, v);
  write_rational(w, sc.delta);
  w.u32(static_cast<std::uint32_t>(sc.ticks));
  w.u32(static_cast<std::uint32_t>(sc.n));
  w.u32(static_cast<std::uint32_t>(sc.kappa));
  w.u32(static_cast<std::uint32_t>(sc.lambda_com));
  write_rational(w, sc.t_init);
}

}  // namespace

void OptScenario::validate() const {
  const std::size_t d = dimension();
  if (d < 1 || d > 3 || k() != d + 1) throw PcError("need d + 1 verifiers with 1 <= d <= 3");
  for (const auto& v : verifiers) {
    if (v.size() != d) throw PcError("verifier dimension mismatch");
  }
  if (!sim::affinely_independent(verifiers)) throw PcError("degenerate verifier placement");
  if (delta <= 0) throw PcError("tick interval must be positive");
  if (ticks < 1 || ticks > (1 << 20)) throw PcError("ticks must be in [1, 2^20]");
  if (n < 1 || n > 4096) throw PcError("n must be in [1, 4096]");
  if (kappa < 1 || kappa > 64) throw PcError("kappa must be in [1, 64]");
  if (lambda_com < 1 || lambda_com > crypto::kMaxLambdaCom) throw PcError("lambda_com must be in [1, 96]");
}

Time OptScenario::D() const {
  Time best = Time::zero();
  for (std::size_t i = 0; i < k(); ++i) {
    for (std::size_t j = 0; j < i; ++j) best = std::max(best, sim::distance(verifiers[i], verifiers[j]).value);
  }
  return best;
}

Time OptScenario::tick_time(std::int64_t m) const { return t1() + Time::from_rational(Rational(m) * delta); }

Time OptScenario::slot_time(std::int64_t s) const { return t1() + Time::from_rational(Rational(s + 1) * delta); }

std::int64_t OptScenario::slots() const {
  // Every mesh point has t <= last tick + D, and is at most D from a verifier.
  const Time latest = tick_time(ticks - 1) + D() + D() + mesh_tolerance();
  std::int64_t s = ticks - 1;
  while (slot_time(s) <= latest) ++s;
  return s + 1;
}

Bytes OptScenario::serialize() const {
  ByteWriter w;
  write_scenario_fields(w, *this);
  return w.take();
}

OptScenario OptScenario::parse(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  OptScenario sc;
  const std::size_t d = r.u16(), k = r.u16();
  if (d < 1 || d > 3 || k != d + 1) throw FormatError("bad scenario dimensions");
  for (std::size_t i = 0; i < k; ++i) sc.verifiers.push_back(read_point(r, d));
  sc.delta = read_rational(r);
  sc.ticks = static_cast<int>(r.u32());
  sc.n = static_cast<int>(r.u32());
  sc.kappa = static_cast<int>(r.u32());
  sc.lambda_com = static_cast<int>(r.u32());
  sc.t_init = read_rational(r);
  if (!r.done()) throw FormatError("trailing bytes in scenario section");
  try {
    sc.validate();
  } catch (const PcError& e) {
    throw FormatError(std::string("invalid scenario: ") + e.what());
  }
  return sc;
}

Time mesh_tolerance() { return Time::from_raw(static_cast<__int128>(1) << (Time::kFracBits - 20)); }

std::optional<MeshPoint> mesh_point_for(const OptScenario& sc, std::span<const std::int64_t> ticks, int root) {
  if (ticks.size() != sc.k()) return std::nullopt;
  for (auto m : ticks) {
    if (m < 0 || m >= sc.ticks) return std::nullopt;
  }
  const auto L = sc.dimension() == 1 ? candidate_line(sc, ticks, root) : candidate_numeric(sc, ticks, root);
  if (!L || !sim::in_convex_hull(*L, sc.verifiers)) return std::nullopt;
  Time lo, hi;
  for (std::size_t i = 0; i < sc.k(); ++i) {
    const Time a = sim::arrival_time(sc.tick_time(ticks[i]), sc.verifiers[i], *L);
    lo = i == 0 ? a : std::min(lo, a);
    hi = i == 0 ? a : std::max(hi, a);
  }
  if (hi - lo > mesh_tolerance()) return std::nullopt;
  return MeshPoint{std::vector<std::int64_t>(ticks.begin(), ticks.end()), root, *L, hi};
}

std::vector<MeshPoint> mesh_points(const OptScenario& sc) {
  sc.validate();
  const std::size_t k = sc.k();
  std::vector<std::vector<Time>> gap(k, std::vector<Time>(k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) gap[i][j] = sim::distance(sc.verifiers[i], sc.verifiers[j]).value;
  }
  std::vector<Time> send(static_cast<std::size_t>(sc.ticks));
  for (int m = 0; m < sc.ticks; ++m) send[m] = sc.tick_time(m);
  const int roots = sc.dimension() == 1 ? 1 : 2;
  std::vector<MeshPoint> out;
  std::vector<std::int64_t> t(k, 0);
  // Wavefronts from i and j can only meet if |s_i - s_j| <= |X_i - X_j|.
  auto feasible = [&](std::size_t upto) {
    for (std::size_t j = 0; j < upto; ++j) {
      const Time a = send[t[upto]], b = send[t[j]];
      if ((a > b ? a - b : b - a) > gap[upto][j] + mesh_tolerance()) return false;
    }
    return true;
  };
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == k) {
      for (int r = 0; r < roots; ++r) {
        if (auto p = mesh_point_for(sc, t, r)) out.push_back(std::move(*p));
      }
      return;
    }
    for (std::int64_t m = 0; m < sc.ticks; ++m) {
      t[i] = m;
      if (feasible(i)) self(self, i + 1);
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end(), [](const MeshPoint& a, const MeshPoint& b) {
    return std::tie(a.t, a.L, a.ticks, a.root) < std::tie(b.t, b.L, b.ticks, b.root);
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const MeshPoint& a, const MeshPoint& b) { return a.t == b.t && a.L == b.L; }),
            out.end());
  return out;
}

std::int64_t response_slot(const OptScenario& sc, const MeshPoint& p, std::size_t verifier) {
  const Time d = sim::distance(p.L, sc.verifiers.at(verifier)).value;
  // Smallest s with slot_time(s) - d strictly after p.t.
  std::int64_t s = std::max<std::int64_t>(0, (p.t + d - sc.t1()).floor_div(sc.delta_time()) - 1);
  while (s > 0 && sc.slot_time(s - 1) - d > p.t) --s;
  while (sc.slot_time(s) - d <= p.t) ++s;
  return s;
}

Bits tick_challenge(const pv::SharedRandomness& s, std::size_t verifier, std::int64_t tick, int n) {
  return s.sub(verifier).round(static_cast<std::uint64_t>(tick), 1, n).x[0];
}

int placeholder_response(std::span<const Bits> xs) { return pv::f(xs); }

Bits encode_response(const OptScenario& sc, const MeshPoint& p, int y) {
  Bits out;
  out.reserve(sc.layout().payload_bits);
  for (auto m : p.ticks) {
    const Bits b = u64_to_bits(static_cast<std::uint64_t>(m), 32);
    out.insert(out.end(), b.begin(), b.end());
  }
  out.push_back(static_cast<std::uint8_t>(p.root & 1));
  out.push_back(static_cast<std::uint8_t>(y & 1));
  return out;
}

Bytes OptCommitmentState::serialize() const {
  ByteWriter w;
  w.u32(kRhoMagic);
  w.u16(kOptVersion);
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

OptCommitmentState OptCommitmentState::parse(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  if (r.u32() != kRhoMagic) throw FormatError("not a commitment-state file");
  if (r.u16() != kOptVersion) throw FormatError("not an optimized commitment state");
  OptCommitmentState rho;
  rho.scenario = OptScenario::parse(r.section());
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

OptVerifier::OptVerifier(const OptScenario& sc, pv::SharedRandomness s, std::size_t index,
                         std::optional<PublicParams> pp)
    : sc_(sc), s_(s), index_(index), pp_(std::move(pp)) {}

void OptVerifier::on_start(sim::Context& ctx) {
  if (index_ == 0 && pp_) ctx.send(sim::Signal::broadcast(ctx.now(), encode_pp(*pp_), "pp"));
  ctx.set_timer(sc_.tick_time(0), 0);
}

void OptVerifier::on_timer(sim::Context& ctx, std::uint64_t tick) {
  const auto m = static_cast<std::int64_t>(tick);
  const pv::ChallengeMsg msg{static_cast<std::uint32_t>(m), static_cast<std::uint16_t>(index_),
                             tick_challenge(s_, index_, m, sc_.n), std::nullopt};
  ctx.count(sim::OpKind::kChallenge);
  ctx.send(sim::Signal::broadcast(ctx.now(), msg.encode(), "x"));
  if (m + 1 < sc_.ticks) ctx.set_timer(sc_.tick_time(m + 1), tick + 1);
}

void OptVerifier::on_receive(sim::Context& ctx, sim::Delivery& d) {
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

OptCommitter::OptCommitter(const OptScenario& sc, std::optional<MeshPoint> target,
                           std::shared_ptr<std::optional<Opening>> opening_out)
    : sc_(sc),
      target_(std::move(target)),
      opening_out_(std::move(opening_out)),
      xs_(sc.k()),
      next_slot_(sc.k(), 0),
      real_slot_(sc.k(), -1) {}

void OptCommitter::start(sim::Context& ctx, const PublicParams& pp) {
  started_ = true;
  auto sk = crypto::gen_secret_key(sc_.kappa, ctx.rng());
  const Bits r = ctx.rng().bits(static_cast<std::size_t>(sc_.kappa) * sc_.lambda_com);
  const auto c = crypto::com(pp, sk.bits, r);
  if (opening_out_) *opening_out_ = Opening{sk.bits, r};
  enc_.emplace(std::move(sk), sc_.layout());
  const SpatialPoint& here = ctx.position();
  for (std::size_t j = 0; j < sc_.k(); ++j) {
    const Time d = sim::distance(here, sc_.verifiers[j]).value;
    const Time at = std::max(ctx.now(), sc_.t1() - d);
    ctx.send(sim::Signal::directional(at, sc_.verifiers[j], encode_commitment(c), "c"));
    if (target_) real_slot_[j] = response_slot(sc_, *target_, j);
    while (next_slot_[j] < sc_.slots() && sc_.slot_time(next_slot_[j]) - d < ctx.now()) ++next_slot_[j];
    schedule(ctx, j);
  }
}

void OptCommitter::schedule(sim::Context& ctx, std::size_t verifier) {
  if (next_slot_[verifier] >= sc_.slots()) return;
  const Time d = sim::distance(ctx.position(), sc_.verifiers[verifier]).value;
  ctx.set_timer(sc_.slot_time(next_slot_[verifier]) - d, verifier);
}

void OptCommitter::on_receive(sim::Context& ctx, sim::Delivery& d) {
  if (!started_) {
    if (auto pp = decode_pp(d.payload)) {
      start(ctx, *pp);
      return;
    }
  }
  if (!target_ || response_) return;
  const auto msg = pv::ChallengeMsg::decode(d.payload);
  if (!msg || msg->verifier >= sc_.k() || msg->round != target_->ticks[msg->verifier]) return;
  xs_[msg->verifier] = msg->x;
  if (std::all_of(xs_.begin(), xs_.end(), [](const auto& x) { return x.has_value(); })) {
    std::vector<Bits> xs;
    for (auto& x : xs_) xs.push_back(*x);
    response_ = encode_response(sc_, *target_, placeholder_response(xs));
  }
}

void OptCommitter::on_timer(sim::Context& ctx, std::uint64_t verifier) {
  const std::size_t j = verifier;
  const std::int64_t s = next_slot_[j]++;
  std::optional<Bits> payload;
  if (s == real_slot_[j] && response_) payload = response_;
  const auto ct = enc_->encrypt(sc_.enc_index(s, j), payload);
  ctx.count(sim::OpKind::kEncrypt);
  ctx.count(sim::OpKind::kPrgBlock);
  ctx.send(sim::Signal::directional(ctx.now(), sc_.verifiers[j], encode_entry(static_cast<std::uint32_t>(s), ct),
                                    "slot"));
  schedule(ctx, j);
}

OptRun run_optimized_commit(const OptScenario& sc, std::uint64_t seed, std::vector<PartySpec> provers,
                            bool record_log) {
  sc.validate();
  const auto s = pv::shared_randomness_for(seed);
  Rng pp_rng(derive_seed(seed, 3));
  const auto pp = crypto::com_setup(sc.lambda_com, static_cast<std::size_t>(sc.kappa), pp_rng);
  sim::EngineOptions eo;
  eo.seed = pv::engine_seed_for(seed);
  eo.start_time = Time::from_rational(sc.t_init);
  eo.record_log = record_log;
  sim::Engine engine(eo);
  std::vector<OptVerifier*> verifiers;
  for (std::size_t i = 0; i < sc.k(); ++i) {
    verifiers.push_back(&engine.add(
        sc.verifiers[i], std::make_unique<OptVerifier>(sc, s, i, i == 0 ? std::optional(pp) : std::nullopt)));
  }
  for (auto& p : provers) engine.add_party(std::move(p.position), std::move(p.party), p.intercepts);
  engine.run_until(sc.t_final());

  OptRun out;
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
  for (const auto& e : out.rho.M) {
    if (e.receiver == 0 && e.label == kCommitLabel && e.body.size() == (c_bits + 7) / 8) {
      out.rho.c = unpack_bits(e.body, c_bits);
    }
  }
  out.ops = engine.ops();
  if (record_log) {
    out.causality_violations = sim::audit_causality(engine.log(), engine).size();
    out.log = engine.log();
  }
  return out;
}

OptRun run_honest_optimized_commit(const OptScenario& sc, const MeshPoint& target, std::uint64_t seed,
                                   Opening& opening, bool record_log) {
  auto sink = std::make_shared<std::optional<Opening>>();
  std::vector<PartySpec> provers;
  provers.push_back({target.L, std::make_unique<OptCommitter>(sc, target, sink)});
  auto run = run_optimized_commit(sc, seed, std::move(provers), record_log);
  if (*sink) opening = **sink;
  return run;
}

OptRevealResult reveal_optimized(const OptCommitmentState& rho, const MeshPoint& claimed, const Opening& opening) {
  OptRevealResult out;
  try {
    const OptScenario& sc = rho.scenario;
    const std::size_t k = sc.k();
    if (opening.sk.size() != static_cast<std::size_t>(sc.kappa) ||
        !crypto::com_verify(rho.pp, rho.c, {opening.sk, opening.r})) {
      out.reason = "opening does not match the commitment";
      return out;
    }
    std::map<std::pair<std::uint16_t, std::uint32_t>, const TranscriptEntry*> index;
    for (const auto& e : rho.M) index.emplace(std::make_pair(e.receiver, e.label), &e);
    const Bytes c_packed = pack_bits(rho.c);
    for (std::size_t i = 0; i < k; ++i) {
      auto it = index.find({static_cast<std::uint16_t>(i), kCommitLabel});
      if (it == index.end() || it->second->body != c_packed || it->second->timestamp > sc.t1()) {
        out.reason = "commitment did not reach every verifier by t1";
        return out;
      }
    }
    const crypto::SecretKey sk{opening.sk};
    const auto layout = sc.layout();
    const std::int64_t slots = sc.slots();
    // Decrypts the entry verifier j holds for `slot`, if it arrived on time.
    auto open_slot = [&](std::size_t j, std::int64_t slot) -> std::optional<Bits> {
      if (slot < 0 || slot >= slots) return std::nullopt;
      auto it = index.find({static_cast<std::uint16_t>(j), static_cast<std::uint32_t>(slot)});
      if (it == index.end() || it->second->timestamp != sc.slot_time(slot)) return std::nullopt;
      try {
        const auto ct = crypto::Ciphertext::parse(it->second->body, layout);
        if (ct.index != sc.enc_index(slot, j)) return std::nullopt;
        return crypto::dec(sk, ct, layout);
      } catch (const FormatError&) {
        return std::nullopt;
      }
    };
    // Only mesh points named by some decrypted payload can pass.
    std::set<std::pair<std::vector<std::int64_t>, int>> candidates;
    for (const auto& e : rho.M) {
      if (e.label == kCommitLabel || e.receiver >= k) continue;
      const auto m = open_slot(e.receiver, e.label);
      if (!m || m->size() != layout.payload_bits) continue;
      std::vector<std::int64_t> ticks;
      for (std::size_t i = 0; i < k; ++i) {
        ticks.push_back(static_cast<std::int64_t>(bits_to_u64(std::span(*m).subspan(32 * i, 32))));
      }
      candidates.emplace(std::move(ticks), (*m)[32 * k]);
    }
    const pv::SharedRandomness s(rho.s);
    for (const auto& [ticks, root] : candidates) {
      const auto q = mesh_point_for(sc, ticks, root);
      if (!q) continue;
      std::vector<Bits> xs;
      for (std::size_t i = 0; i < k; ++i) xs.push_back(tick_challenge(s, i, q->ticks[i], sc.n));
      const Bits want = encode_response(sc, *q, placeholder_response(xs));
      bool ok = true;
      for (std::size_t j = 0; ok && j < k; ++j) ok = open_slot(j, response_slot(sc, *q, j)) == want;
      if (ok) out.accepting.push_back(*q);
    }
    out.accept = out.accepting.size() == 1 && out.accepting.front().ticks == claimed.ticks &&
                 out.accepting.front().root == claimed.root;
    if (!out.accept) out.reason = out.accepting.empty() ? "no mesh point accepted" : "accepting set differs from claim";
  } catch (const std::exception& e) {
    out.accept = false;
    out.reason = e.what();
  }
  return out;
}

std::vector<TickWork> per_tick_work_profile(std::span<const sim::OpRecord> ops, std::size_t verifier_count,
                                            Time origin, Time delta) {
  std::map<std::int64_t, TickWork> by_tick;
  for (const auto& op : ops) {
    const std::int64_t tick = (op.time - origin).floor_div(delta);
    auto& w = by_tick[tick];
    w.tick = tick;
    (op.party < verifier_count ? w.verifier_ops : w.prover_ops) += op.count;
  }
  std::vector<TickWork> out;
  if (by_tick.empty()) return out;
  for (std::int64_t t = by_tick.begin()->first; t <= by_tick.rbegin()->first; ++t) {
    auto it = by_tick.find(t);
    out.push_back(it == by_tick.end() ? TickWork{t, 0, 0} : it->second);
  }
  return out;
}

WorkPeak peak_work(std::span<const TickWork> profile) {
  WorkPeak p;
  for (const auto& w : profile) {
    p.prover = std::max(p.prover, w.prover_ops);
    p.verifier = std::max(p.verifier, w.verifier_ops);
  }
  return p;
}

}  // namespace zkpos::pc
