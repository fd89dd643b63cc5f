#include "zkpos/attacks/attacks.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <set>

#include "zkpos/crypto/commitment.hpp"
#include "zkpos/zkpv/zkpv.hpp"

namespace zkpos::attacks {

using sim::Time;

namespace {

constexpr std::uint8_t kNoteTag = 'N';

const SpatialPoint& nearest(const SpatialPoint& to, std::span<const SpatialPoint> among, std::size_t* index) {
  std::size_t best = 0;
  for (std::size_t m = 1; m < among.size(); ++m) {
    if (sim::squared_distance(to, among[m]) < sim::squared_distance(to, among[best])) best = m;
  }
  if (index) *index = best;
  return among[best];
}

// Everything a member knows about one round.
struct RoundKnowledge {
  std::vector<std::optional<Bits>> x;
  std::optional<int> b;                    // classical variant
  std::optional<int> m;                    // qubit measured in the computational basis
  std::optional<qsim::BellOutcome> bell;   // qubit teleported
  std::optional<std::pair<int, int>> far;  // (basis, outcome) on the far EPR half
  bool answered = false;

  Bytes encode(std::uint32_t round) const {
    ByteWriter w;
    w.u8(kNoteTag);
    w.u32(round);
    w.u16(static_cast<std::uint16_t>(x.size()));
    for (const auto& xi : x) {
      w.u8(xi ? 1 : 0);
      if (xi) {
        w.u32(static_cast<std::uint32_t>(xi->size()));
        w.raw(pack_bits(*xi));
      }
    }
    auto opt = [&](const std::optional<int>& v) {
      w.u8(v ? 1 : 0);
      w.u8(static_cast<std::uint8_t>(v.value_or(0)));
    };
    opt(b);
    opt(m);
    w.u8(bell ? 1 : 0);
    w.u8(static_cast<std::uint8_t>(bell ? bell->x : 0));
    w.u8(static_cast<std::uint8_t>(bell ? bell->z : 0));
    w.u8(far ? 1 : 0);
    w.u8(static_cast<std::uint8_t>(far ? far->first : 0));
    w.u8(static_cast<std::uint8_t>(far ? far->second : 0));
    return w.take();
  }

  // Merges a note; nullopt if it is not a note.
  static std::optional<std::pair<std::uint32_t, RoundKnowledge>> decode(std::span<const std::uint8_t> bytes) {
    try {
      ByteReader r(bytes);
      if (r.u8() != kNoteTag) return std::nullopt;
      std::pair<std::uint32_t, RoundKnowledge> out;
      out.first = r.u32();
      out.second.x.resize(r.u16());
      for (auto& xi : out.second.x) {
        if (r.u8()) {
          const std::uint32_t n = r.u32();
          xi = unpack_bits(r.raw((n + 7) / 8), n);
        }
      }
      auto opt = [&](std::optional<int>& v) {
        const bool has = r.u8();
        const int val = r.u8();
        if (has) v = val;
      };
      opt(out.second.b);
      opt(out.second.m);
      const bool has_bell = r.u8();
      const int bx = r.u8(), bz = r.u8();
      if (has_bell) out.second.bell = qsim::BellOutcome{bx, bz};
      const bool has_far = r.u8();
      const int fb = r.u8(), fo = r.u8();
      if (has_far) out.second.far = std::make_pair(fb, fo);
      if (!r.done()) return std::nullopt;
      return out;
    } catch (const FormatError&) {
      return std::nullopt;
    }
  }

  void merge(const RoundKnowledge& o) {
    if (x.size() < o.x.size()) x.resize(o.x.size());
    for (std::size_t i = 0; i < o.x.size(); ++i) {
      if (!x[i] && o.x[i]) x[i] = o.x[i];
    }
    if (!b) b = o.b;
    if (!m) m = o.m;
    if (!bell) bell = o.bell;
    if (!far) far = o.far;
  }
};

// Pre-shared resources of the coalition: EPR pairs, created on first use
// for a round (nothing observable happens to them before that).
struct CoalitionShared {
  int budget = 0;
  std::shared_ptr<CoalitionLedger> ledger;
  std::map<std::uint32_t, std::optional<std::pair<qsim::QubitHandle, qsim::QubitHandle>>> pairs;

  std::optional<std::pair<qsim::QubitHandle, qsim::QubitHandle>> pair(std::uint32_t round, qsim::QuantumArena& arena) {
    auto it = pairs.find(round);
    if (it != pairs.end()) return it->second;
    std::optional<std::pair<qsim::QubitHandle, qsim::QubitHandle>> p;
    if (ledger->epr_used < static_cast<std::uint64_t>(budget)) {
      p = arena.make_epr();
      ++ledger->epr_used;
    }
    pairs.emplace(round, p);
    return p;
  }
};

// One member's program, independent of what the responses look like.
class SpooferCore {
 public:
  using Respond = std::function<void(sim::Context&, std::uint32_t round, int y)>;

  SpooferCore(std::size_t k, Strategy strategy, const pv::ChallengeScheme& scheme,
              std::shared_ptr<CoalitionShared> shared, bool holds_first_half, bool holds_second_half,
              std::vector<SpatialPoint> partners, Respond respond)
      : k_(k),
        strategy_(strategy),
        scheme_(scheme),
        shared_(std::move(shared)),
        first_half_(holds_first_half),
        second_half_(holds_second_half),
        partners_(std::move(partners)),
        respond_(std::move(respond)) {}

  void on_challenge(sim::Context& ctx, const pv::ChallengeMsg& msg, std::vector<qsim::QubitHandle>& qubits) {
    RoundKnowledge& rk = round(msg.round);
    const bool fresh = !rk.x[msg.verifier];
    RoundKnowledge learned;
    learned.x.resize(k_);
    if (fresh) learned.x[msg.verifier] = msg.x;
    if (msg.b) learned.b = msg.b;
    if (!qubits.empty()) {
      const auto q = qubits.front();
      qubits.erase(qubits.begin());
      use_qubit(ctx, msg.round, q, learned);
    }
    rk.merge(learned);
    // The far member measures its half as soon as its own string arrives.
    if (fresh && strategy_ == Strategy::kTeleport && second_half_ && !rk.far && static_cast<std::size_t>(msg.verifier) + 1 == k_) {
      if (auto p = shared_->pair(msg.round, ctx.arena())) {
        std::vector<Bits> guess;
        for (const auto& xi : rk.x) guess.push_back(xi.value_or(Bits(msg.x.size(), 0)));
        const int basis = scheme_.basis(guess);
        const int out = ctx.arena().measure(p->second, basis, ctx.rng());
        rk.far = learned.far = std::make_pair(basis, out);
      }
    }
    for (auto q : qubits) ctx.arena().discard(q, ctx.rng());
    qubits.clear();
    share(ctx, msg.round, learned);
    maybe_answer(ctx, msg.round);
  }

  void on_note(sim::Context& ctx, std::uint32_t r, const RoundKnowledge& note) {
    round(r).merge(note);
    maybe_answer(ctx, r);
  }

 private:
  RoundKnowledge& round(std::uint32_t r) {
    RoundKnowledge& rk = rounds_[r];
    if (rk.x.size() < k_) rk.x.resize(k_);
    return rk;
  }

  void use_qubit(sim::Context& ctx, std::uint32_t r, qsim::QubitHandle q, RoundKnowledge& learned) {
    if (strategy_ == Strategy::kTeleport && first_half_) {
      if (auto p = shared_->pair(r, ctx.arena())) {
        learned.bell = ctx.arena().bell_measure(q, p->first, ctx.rng());
        return;
      }
    }
    learned.m = ctx.arena().measure(q, 0, ctx.rng());
  }

  void share(sim::Context& ctx, std::uint32_t r, const RoundKnowledge& learned) {
    const Bytes note = learned.encode(r);
    for (const auto& p : partners_) {
      ctx.send(sim::Signal::directional(ctx.now(), p, note, "note"));
      ++shared_->ledger->notes_sent;
    }
  }

  std::optional<int> decide(const RoundKnowledge& rk) const {
    for (const auto& xi : rk.x) {
      if (!xi) return std::nullopt;
    }
    if (!scheme_.quantum()) return rk.b;
    if (rk.bell && rk.far) {
      const int correction = rk.far->first == 0 ? rk.bell->x : rk.bell->z;
      return rk.far->second ^ correction;
    }
    if (rk.bell) return std::nullopt;  // waiting for the far outcome
    return rk.m;
  }

  void maybe_answer(sim::Context& ctx, std::uint32_t r) {
    RoundKnowledge& rk = round(r);
    if (rk.answered) return;
    const auto y = decide(rk);
    if (!y) return;
    rk.answered = true;
    ++shared_->ledger->responses_sent;
    respond_(ctx, r, *y);
  }

  std::size_t k_;
  Strategy strategy_;
  const pv::ChallengeScheme& scheme_;
  std::shared_ptr<CoalitionShared> shared_;
  bool first_half_;
  bool second_half_;
  std::vector<SpatialPoint> partners_;
  Respond respond_;
  std::map<std::uint32_t, RoundKnowledge> rounds_;
};

struct Roles {
  std::vector<std::vector<std::size_t>> answers;  // per member, verifiers it answers
  std::size_t first_half = 0, second_half = 0;
};

Roles assign_roles(std::span<const SpatialPoint> verifiers, std::span<const SpatialPoint> members) {
  Roles r;
  r.answers.resize(members.size());
  for (std::size_t i = 0; i < verifiers.size(); ++i) {
    std::size_t m = 0;
    nearest(verifiers[i], members, &m);
    r.answers[m].push_back(i);
  }
  nearest(verifiers.front(), members, &r.first_half);
  nearest(verifiers.back(), members, &r.second_half);
  return r;
}

std::vector<SpatialPoint> partners_of(std::span<const SpatialPoint> members, std::size_t self) {
  std::vector<SpatialPoint> out;
  for (std::size_t m = 0; m < members.size(); ++m) {
    if (m != self) out.push_back(members[m]);
  }
  return out;
}

Time send_to_arrive(const SpatialPoint& from, const SpatialPoint& to, Time arrive, Time now) {
  return std::max(now, arrive - sim::distance(from, to).value);
}

class PvSpoofer final : public sim::Party {
 public:
  PvSpoofer(const pv::PvInstance& inst, std::vector<std::size_t> answers, SpatialPoint here,
            std::function<SpooferCore(SpooferCore::Respond)> make_core)
      : inst_(inst),
        answers_(std::move(answers)),
        here_(std::move(here)),
        core_(make_core([this](sim::Context& ctx, std::uint32_t round, int y) { respond(ctx, round, y); })) {}

  void on_receive(sim::Context& ctx, sim::Delivery& d) override {
    if (auto msg = pv::ChallengeMsg::decode(d.payload); msg && msg->verifier < inst_.k()) {
      core_.on_challenge(ctx, *msg, d.qubits);
    } else if (auto note = RoundKnowledge::decode(d.payload)) {
      core_.on_note(ctx, note->first, note->second);
    }
    for (auto q : d.qubits) ctx.arena().discard(q, ctx.rng());
    d.qubits.clear();
  }

 private:
  void respond(sim::Context& ctx, std::uint32_t round, int y) {
    for (std::size_t i : answers_) {
      const Time at = send_to_arrive(here_, inst_.verifiers[i], inst_.response_time(i), ctx.now());
      ctx.send(sim::Signal::directional(at, inst_.verifiers[i], pv::ResponseMsg{round, y}.encode(), "spoof"));
    }
  }

  const pv::PvInstance& inst_;
  std::vector<std::size_t> answers_;
  SpatialPoint here_;
  SpooferCore core_;
};

void check_outside(std::span<const SpatialPoint> members, const SpatialPoint& forbidden) {
  if (members.empty()) throw AttackError("a coalition needs at least one member");
  for (const auto& m : members) {
    if (m == forbidden) throw AttackError("coalition member inside the allowed region");
  }
}

}  // namespace

const pv::ChallengeScheme& classical_scheme() {
  static const ClassicalScheme scheme;
  return scheme;
}

const pv::ChallengeScheme& plain_bb84_scheme() {
  static const PlainBb84Scheme scheme;
  return scheme;
}

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::kCopy: return "copy";
    case Strategy::kInterceptResend: return "intercept-resend";
    case Strategy::kTeleport: return "teleport";
  }
  return "?";
}

std::vector<pv::PartySpec> make_pv_coalition(const pv::PvInstance& inst, const SpooferCoalition& co,
                                             const pv::ChallengeScheme& scheme,
                                             std::shared_ptr<CoalitionLedger> ledger) {
  check_outside(co.members, inst.target.L);
  if (co.strategy == Strategy::kCopy && scheme.quantum()) {
    throw AttackError("the copy strategy needs classical challenges");
  }
  auto shared = std::make_shared<CoalitionShared>();
  shared->budget = co.epr_budget;
  shared->ledger = ledger ? std::move(ledger) : std::make_shared<CoalitionLedger>();
  const Roles roles = assign_roles(inst.verifiers, co.members);
  std::vector<pv::PartySpec> out;
  for (std::size_t m = 0; m < co.members.size(); ++m) {
    auto make_core = [&, m](SpooferCore::Respond respond) {
      return SpooferCore(inst.k(), co.strategy, scheme, shared, roles.first_half == m,
                         roles.second_half == m && roles.first_half != m, partners_of(co.members, m),
                         std::move(respond));
    };
    out.push_back({co.members[m], std::make_unique<PvSpoofer>(inst, roles.answers[m], co.members[m], make_core), true});
  }
  return out;
}

AttackReport AttackReport::from(std::string name, const kernels::TrialStats& stats) {
  AttackReport r;
  r.name = std::move(name);
  r.trials = stats.trials;
  r.successes = stats.successes;
  r.rate = stats.rate();
  r.ci95 = stats.ci95();
  return r;
}

pv::PvInstance LineSetup::instance() const {
  pv::PvInstance inst;
  inst.verifiers = {SpatialPoint{v0}, SpatialPoint{v1}};
  const Rational far = std::max(Rational(L - v0), Rational(v1 - L));
  inst.target = {SpatialPoint{L}, far};
  inst.n = n;
  inst.rounds = rounds;
  inst.start = 0;
  return inst;
}

SpooferCoalition LineSetup::coalition(Strategy s, int epr_budget) const {
  SpooferCoalition co;
  for (const auto& x : spoofers) co.members.push_back(SpatialPoint{x});
  co.strategy = s;
  co.epr_budget = epr_budget;
  return co;
}

AttackReport run_pv_attack(std::string name, const pv::PvInstance& inst, const SpooferCoalition& co,
                           const pv::ChallengeScheme& scheme, std::uint64_t trials, std::uint64_t seed) {
  inst.validate();
  check_outside(co.members, inst.target.L);
  std::vector<std::uint64_t> rounds_won(trials, 0), epr_used(trials, 0);
  pv::PvRunOptions options;
  options.record_log = false;
  options.scheme = &scheme;
  const auto stats = kernels::run_trials(trials, seed, [&](Rng&, std::uint64_t i) {
    auto ledger = std::make_shared<CoalitionLedger>();
    auto outcome = pv::run_singleton_pv(inst, derive_seed(seed, i), make_pv_coalition(inst, co, scheme, ledger), options);
    rounds_won[i] = static_cast<std::uint64_t>(std::count(outcome.round_ok.begin(), outcome.round_ok.end(), 1));
    epr_used[i] = ledger->epr_used;
    return outcome.accept;
  });
  auto report = AttackReport::from(std::move(name), stats);
  report.rounds = trials * static_cast<std::uint64_t>(inst.rounds);
  for (auto w : rounds_won) report.rounds_won += w;
  report.epr_budget = static_cast<std::uint64_t>(co.epr_budget);
  for (auto e : epr_used) report.epr_used_max = std::max(report.epr_used_max, e);
  return report;
}

namespace {

void check_straddle(const LineSetup& s) {
  if (!(s.v0 < s.L && s.L < s.v1)) throw AttackError("L must lie strictly between the verifiers");
  if (s.spoofers.size() == 2) {
    const auto lo = std::min(s.spoofers[0], s.spoofers[1]), hi = std::max(s.spoofers[0], s.spoofers[1]);
    if (!(lo < s.L && s.L < hi)) throw AttackError("the spoofers do not straddle L");
  }
  for (const auto& x : s.spoofers) {
    if (x < s.v0 || x > s.v1) throw AttackError("spoofer outside the verifiers' segment");
  }
}

}  // namespace

AttackReport classical_copy_attack(const LineSetup& setup, std::uint64_t trials, std::uint64_t seed) {
  check_straddle(setup);
  return run_pv_attack("classical-copy", setup.instance(), setup.coalition(Strategy::kCopy), classical_scheme(),
                       trials, seed);
}

AttackReport intercept_resend_attack(const LineSetup& setup, std::uint64_t trials, std::uint64_t seed,
                                     const pv::ChallengeScheme& scheme) {
  check_straddle(setup);
  return run_pv_attack("intercept-resend", setup.instance(), setup.coalition(Strategy::kInterceptResend), scheme,
                       trials, seed);
}

AttackReport epr_attack(const LineSetup& setup, const pv::ChallengeScheme& scheme, int epr_budget,
                        std::uint64_t trials, std::uint64_t seed) {
  check_straddle(setup);
  return run_pv_attack("epr-teleport", setup.instance(), setup.coalition(Strategy::kTeleport, epr_budget), scheme,
                       trials, seed);
}

DenialReport denial_privacy_attack(const pc::CommitScenario& sc, std::span<const std::size_t> region,
                                   std::span<const std::size_t> zone, int reps, std::uint64_t trials,
                                   std::uint64_t seed) {
  std::set<std::size_t> Z(zone.begin(), zone.end());
  zkpv::ZkpvOptions options;
  options.reps = reps;
  for (auto a : Z) {
    if (a >= sc.S.size()) throw AttackError("zone is not a subset of S");
    options.suppressed_targets.push_back(sc.S[a].L);
  }
  std::vector<std::uint8_t> in_zone(trials, 0), accepted(trials, 0);
  const auto stats = kernels::run_trials(trials, seed, [&](Rng& rng, std::uint64_t i) {
    const std::size_t alpha = rng.below(sc.S.size());
    in_zone[i] = Z.count(alpha) ? 1 : 0;
    const auto v = zkpv::zk_position_verify(sc, region, alpha, rng.u64(), options);
    accepted[i] = v.accept ? 1 : 0;
    const bool guess_in_zone = !v.accept;
    return guess_in_zone == static_cast<bool>(in_zone[i]);
  });
  DenialReport out;
  out.report = AttackReport::from("denial-privacy", stats);
  for (std::uint64_t i = 0; i < trials; ++i) {
    if (in_zone[i]) {
      ++out.in_zone;
      out.in_zone_rejected += accepted[i] ? 0 : 1;
    } else {
      ++out.out_of_zone;
      out.out_of_zone_accepted += accepted[i];
    }
  }
  return out;
}

BindingRow honest_binding_baseline(const pc::CommitScenario& sc, std::size_t alpha, std::uint64_t trials,
                                   std::uint64_t seed) {
  BindingRow row{"honest", alpha, trials, std::vector<std::uint64_t>(sc.S.size(), 0)};
  pc::CommitOptions options;
  options.record_log = false;
  std::vector<std::vector<std::uint8_t>> hits(trials);
  kernels::run_trials(trials, seed, [&](Rng&, std::uint64_t i) {
    pc::Opening op;
    const auto run = pc::run_honest_commit(sc, alpha, derive_seed(seed, i), op, options);
    for (std::size_t a = 0; a < sc.S.size(); ++a) hits[i].push_back(pc::reveal_phase(run.rho, {a, op}).accept);
    return hits[i][alpha] != 0;
  });
  for (const auto& h : hits) {
    for (std::size_t a = 0; a < h.size(); ++a) row.successes[a] += h[a];
  }
  return row;
}

namespace {

// Commits as if at S[claim]: pp -> c from the shared key, dummies for every
// other point, intercept-resend answers for the claimed one.
class CommitSpoofer final : public sim::Party {
 public:
  CommitSpoofer(const pc::CommitScenario& sc, std::size_t claim, std::vector<std::size_t> answers, SpatialPoint here,
                pc::Opening shared_opening, std::function<SpooferCore(SpooferCore::Respond)> make_core)
      : sc_(sc),
        claim_(claim),
        answers_(std::move(answers)),
        here_(std::move(here)),
        opening_(std::move(shared_opening)),
        core_(make_core([this](sim::Context& ctx, std::uint32_t round, int y) { respond(ctx, round, y); })) {}

  void on_receive(sim::Context& ctx, sim::Delivery& d) override {
    if (!enc_) {
      if (auto pp = pc::decode_pp(d.payload)) start(ctx, *pp);
    }
    if (auto msg = pv::ChallengeMsg::decode(d.payload); msg && msg->verifier < sc_.k()) {
      if (msg->round / static_cast<std::uint32_t>(sc_.rounds) == claim_) core_.on_challenge(ctx, *msg, d.qubits);
    } else if (auto note = RoundKnowledge::decode(d.payload)) {
      core_.on_note(ctx, note->first, note->second);
    }
    for (auto q : d.qubits) ctx.arena().discard(q, ctx.rng());
    d.qubits.clear();
  }

 private:
  void start(sim::Context& ctx, const crypto::PublicParams& pp) {
    enc_.emplace(crypto::SecretKey{opening_.sk}, sc_.layout());
    const auto c = crypto::com(pp, opening_.sk, opening_.r);
    for (std::size_t i : answers_) {
      ctx.send(sim::Signal::directional(send_to_arrive(here_, sc_.verifiers[i], sc_.t1(), ctx.now()), sc_.verifiers[i],
                                        pc::encode_commitment(c), "c"));
    }
    for (std::size_t a = 0; a < sc_.S.size(); ++a) {
      if (a == claim_) continue;
      for (int j = 0; j < sc_.rounds; ++j) {
        for (std::size_t i : answers_) {
          const auto ct = enc_->encrypt(sc_.enc_index(a, i, j), std::nullopt);
          const Time at = send_to_arrive(here_, sc_.verifiers[i], sc_.expected_time(a, i), ctx.now());
          ctx.send(sim::Signal::directional(at, sc_.verifiers[i], pc::encode_entry(sc_.label(a, j), ct), "dummy"));
        }
      }
    }
  }

  void respond(sim::Context& ctx, std::uint32_t round, int y) {
    if (!enc_) return;
    const int j = static_cast<int>(round % static_cast<std::uint32_t>(sc_.rounds));
    for (std::size_t i : answers_) {
      const auto ct = enc_->encrypt(sc_.enc_index(claim_, i, j), Bits{static_cast<std::uint8_t>(y)});
      const Time at = send_to_arrive(here_, sc_.verifiers[i], sc_.expected_time(claim_, i), ctx.now());
      ctx.send(sim::Signal::directional(at, sc_.verifiers[i], pc::encode_entry(round, ct), "spoof"));
    }
  }

  const pc::CommitScenario& sc_;
  std::size_t claim_;
  std::vector<std::size_t> answers_;
  SpatialPoint here_;
  pc::Opening opening_;
  std::optional<crypto::SessionEncryptor> enc_;
  SpooferCore core_;
};

}  // namespace

BindingRow intercept_resend_binding(const pc::CommitScenario& sc, std::size_t claim,
                                    std::vector<SpatialPoint> members, std::uint64_t trials, std::uint64_t seed) {
  sc.validate();
  if (claim >= sc.S.size()) throw AttackError("claimed point is not in S");
  check_outside(members, sc.S[claim].L);
  BindingRow row{"intercept-resend", claim, trials, std::vector<std::uint64_t>(sc.S.size(), 0)};
  const Roles roles = assign_roles(sc.verifiers, members);
  pc::CommitOptions options;
  options.record_log = false;
  std::vector<std::vector<std::uint8_t>> hits(trials);
  kernels::run_trials(trials, seed, [&](Rng& rng, std::uint64_t i) {
    // The shared classical notes: one key and one commitment randomness.
    pc::Opening opening{crypto::gen_secret_key(sc.kappa, rng).bits,
                        rng.bits(static_cast<std::size_t>(sc.kappa) * sc.lambda_com)};
    auto shared = std::make_shared<CoalitionShared>();
    shared->ledger = std::make_shared<CoalitionLedger>();
    std::vector<pv::PartySpec> parties;
    for (std::size_t m = 0; m < members.size(); ++m) {
      auto make_core = [&, m](SpooferCore::Respond respond) {
        return SpooferCore(sc.k(), Strategy::kInterceptResend, pv::fbb84_scheme(), shared, false, false,
                           partners_of(members, m), std::move(respond));
      };
      parties.push_back({members[m],
                         std::make_unique<CommitSpoofer>(sc, claim, roles.answers[m], members[m], opening, make_core),
                         true});
    }
    const auto run = pc::run_commit(sc, derive_seed(seed, i), std::move(parties), options);
    for (std::size_t a = 0; a < sc.S.size(); ++a) hits[i].push_back(pc::reveal_phase(run.rho, {a, opening}).accept);
    return hits[i][claim] != 0;
  });
  for (const auto& h : hits) {
    for (std::size_t a = 0; a < h.size(); ++a) row.successes[a] += h[a];
  }
  return row;
}

EquivocationResult equivocation_attack(const pc::CommitScenario& sc, std::size_t alpha, std::uint64_t tries,
                                       std::uint64_t seed) {
  sc.validate();
  if (sc.lambda_com > 16) throw AttackError("equivocation search is limited to lambda_com <= 16");
  pc::Opening honest;
  pc::CommitOptions options;
  options.record_log = false;
  const auto run = pc::run_honest_commit(sc, alpha, seed, honest, options);
  const auto& pp = run.rho.pp;
  const auto& c = run.rho.c;
  const auto kappa = static_cast<std::size_t>(sc.kappa), lambda = static_cast<std::size_t>(sc.lambda_com);
  const std::size_t blk = 3 * lambda;

  // seeds[i][v]: every seed r_i with G(r_i) ^ v * pp_i == c_i.
  std::vector<std::array<std::vector<std::uint64_t>, 2>> seeds(kappa);
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << lambda); ++v) {
    const Bits g = crypto::naor_stretch(u64_to_bits(v, static_cast<int>(lambda)), static_cast<int>(lambda));
    for (std::size_t i = 0; i < kappa; ++i) {
      for (int bit = 0; bit < 2; ++bit) {
        bool match = true;
        for (std::size_t q = 0; match && q < blk; ++q) match = (g[q] ^ (bit & pp.bits[i * blk + q])) == c[i * blk + q];
        if (match) seeds[i][bit].push_back(v);
      }
    }
  }

  EquivocationResult out;
  Rng rng(derive_seed(seed, 0xE9));
  for (std::uint64_t t = 0; t < tries; ++t) {
    ++out.tries;
    Bits sk = rng.bits(kappa);
    if (sk == honest.sk) sk[rng.below(kappa)] ^= 1;
    Bits r;
    bool complete = true;
    for (std::size_t i = 0; complete && i < kappa; ++i) {
      const auto& options_i = seeds[i][sk[i]];
      if (options_i.empty()) {
        complete = false;
        break;
      }
      const Bits ri = u64_to_bits(options_i[rng.below(options_i.size())], static_cast<int>(lambda));
      r.insert(r.end(), ri.begin(), ri.end());
    }
    if (!complete) continue;
    ++out.openings;
    const pc::Opening alt{sk, r};
    for (std::size_t a = 0; a < sc.S.size(); ++a) {
      if (a != alpha && pc::reveal_phase(run.rho, {a, alt}).accept) ++out.successes;
    }
  }
  return out;
}

}  // namespace zkpos::attacks
