#include "zkpos/zkpv/zkpv.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "zkpos/crypto/compile.hpp"
#include "zkpos/crypto/encryption.hpp"

namespace zkpos::zkpv {

using crypto::Wire;
using pc::kCommitLabel;

namespace {

constexpr std::size_t kIndexBytes = 8;  // serialized ciphertext: u64 index, then body

using EntryIndex = std::map<std::pair<std::uint16_t, std::uint32_t>, const pc::TranscriptEntry*>;

EntryIndex index_entries(const pc::CommitmentState& rho) {
  EntryIndex index;
  for (const auto& e : rho.M) index.emplace(std::make_pair(e.receiver, e.label), &e);
  return index;
}

bool commitment_delivered(const pc::CommitmentState& rho, const EntryIndex& index) {
  const Bytes packed = pack_bits(rho.c);
  for (std::size_t i = 0; i < rho.scenario.k(); ++i) {
    auto it = index.find({static_cast<std::uint16_t>(i), kCommitLabel});
    if (it == index.end() || it->second->body != packed || it->second->timestamp > rho.scenario.t1()) return false;
  }
  return true;
}

}  // namespace

RevealStatement compile_reveal_circuit(const pc::CommitmentState& rho, std::span<const std::size_t> region) {
  const auto& sc = rho.scenario;
  try {
    sc.validate();
  } catch (const pc::PcError& e) {
    throw ZkpvError(std::string("malformed commitment state: ") + e.what());
  }
  if (region.empty()) throw ZkpvError("region R is empty");
  std::set<std::size_t> in_region;
  for (auto a : region) {
    if (a >= sc.S.size()) throw ZkpvError("region R is not a subset of S");
    if (!in_region.insert(a).second) throw ZkpvError("region R lists a point twice");
  }
  const auto kappa = static_cast<std::size_t>(sc.kappa), lambda = static_cast<std::size_t>(sc.lambda_com);
  if (rho.pp.lambda != sc.lambda_com || rho.pp.bits.size() != 3 * lambda * kappa) {
    throw ZkpvError("malformed commitment state: pp has the wrong length");
  }
  // No usable commitment (e.g. nobody committed): the statement is false, but
  // it keeps the same shape as a real one.
  const bool c_well_formed = rho.c.size() == 3 * lambda * kappa;
  const crypto::Commitment c = c_well_formed ? rho.c : crypto::Commitment(3 * lambda * kappa, 0);

  RevealStatement st;
  st.region.assign(in_region.begin(), in_region.end());
  st.witness_bits = kappa + kappa * lambda;
  crypto::CircuitBuilder cb(static_cast<std::uint32_t>(st.witness_bits));
  cb.reserve(std::size_t{1} << 19);
  std::vector<Wire> sk, r;
  for (std::size_t i = 0; i < kappa; ++i) sk.push_back(cb.input(static_cast<std::uint32_t>(i)));
  for (std::size_t i = 0; i < kappa * lambda; ++i) r.push_back(cb.input(static_cast<std::uint32_t>(kappa + i)));

  const Wire com_ok = crypto::com_check_circuit(cb, rho.pp, c, sk, r);
  const auto index = index_entries(rho);
  st.commitment_delivered = c_well_formed && commitment_delivered(rho, index);

  const auto layout = sc.layout();
  const pv::SharedRandomness s(rho.s);
  std::vector<Wire> w(sc.S.size());
  for (std::size_t a = 0; a < sc.S.size(); ++a) {
    const auto inst = sc.instance(a);
    const auto s_a = s.sub(a);
    bool timing = true;
    std::vector<Wire> conds;
    for (int j = 0; timing && j < sc.rounds; ++j) {
      const int b = s_a.round(static_cast<std::uint64_t>(j), sc.k(), sc.n).b;
      std::vector<std::optional<pv::ReceivedResponse>> got(sc.k());
      for (std::size_t i = 0; timing && i < sc.k(); ++i) {
        auto it = index.find({static_cast<std::uint16_t>(i), sc.label(a, j)});
        if (it == index.end()) {
          timing = false;
          break;
        }
        std::optional<crypto::Ciphertext> ct;
        try {
          ct = crypto::Ciphertext::parse(it->second->body, layout);
        } catch (const FormatError&) {
          timing = false;
          break;
        }
        got[i] = pv::ReceivedResponse{b, it->second->timestamp};
        const auto frame = crypto::decrypt_frame_circuit(cb, sk, *ct, layout);
        conds.push_back(frame[0]);
        conds.push_back(b ? frame[1] : cb.not_(frame[1]));
      }
      // With y = b at every verifier, W reduces to its timing clause.
      timing = timing && pv::predicate_W(s_a, inst, j, got);
    }
    st.timing_ok.push_back(timing ? 1 : 0);
    w[a] = timing ? cb.and_all(conds) : cb.constant(false);
  }

  Wire seen = cb.constant(false), dup = cb.constant(false);
  for (const auto& wa : w) {
    dup = cb.or_(dup, cb.and_(seen, wa));
    seen = cb.or_(seen, wa);
  }
  const Wire exactly_one = cb.and_(seen, cb.not_(dup));
  Wire in_r = cb.constant(false);
  for (auto a : st.region) in_r = cb.or_(in_r, w[a]);
  const std::vector<Wire> all = {com_ok, cb.constant(st.commitment_delivered), exactly_one, in_r};
  st.circuit = cb.finish(cb.and_all(all));
  st.hash = st.circuit.hash();
  return st;
}

Bits reveal_witness(const pc::Opening& opening) {
  Bits w = opening.sk;
  w.insert(w.end(), opening.r.begin(), opening.r.end());
  return w;
}

WitnessSearch exhaustive_witness_search(const pc::CommitmentState& rho, const RevealStatement& st) {
  const auto& sc = rho.scenario;
  const auto kappa = static_cast<std::size_t>(sc.kappa), lambda = static_cast<std::size_t>(sc.lambda_com);
  if (kappa > 16 || lambda > 8) throw ZkpvError("exhaustive search is limited to kappa <= 16 and lambda_com <= 8");
  if (st.witness_bits != kappa + kappa * lambda) throw ZkpvError("statement does not match the commitment state");
  // G(r') for every lambda-bit seed r'.
  std::vector<Bits> stretch(std::size_t{1} << lambda);
  for (std::size_t v = 0; v < stretch.size(); ++v) {
    stretch[v] = crypto::naor_stretch(u64_to_bits(v, static_cast<int>(lambda)), static_cast<int>(lambda));
  }
  const std::size_t blk = 3 * lambda;
  WitnessSearch out;
  for (std::uint64_t key = 0; key < (std::uint64_t{1} << kappa); ++key) {
    ++out.keys_tried;
    const Bits sk = u64_to_bits(key, static_cast<int>(kappa));
    // Per key bit, the seeds r_i with G(r_i) ^ sk_i * pp_i == c_i.
    std::vector<std::vector<std::size_t>> options(kappa);
    bool possible = true;
    for (std::size_t i = 0; possible && i < kappa; ++i) {
      for (std::size_t v = 0; v < stretch.size(); ++v) {
        bool match = true;
        for (std::size_t q = 0; match && q < blk; ++q) {
          match = (stretch[v][q] ^ (sk[i] & rho.pp.bits[i * blk + q])) == rho.c[i * blk + q];
        }
        if (match) options[i].push_back(v);
      }
      possible = !options[i].empty();
    }
    if (!possible) continue;
    // Every combination of matching seeds is a distinct witness.
    std::vector<std::size_t> pick(kappa, 0);
    while (true) {
      Bits witness = sk;
      for (std::size_t i = 0; i < kappa; ++i) {
        const Bits ri = u64_to_bits(options[i][pick[i]], static_cast<int>(lambda));
        witness.insert(witness.end(), ri.begin(), ri.end());
      }
      ++out.com_consistent;
      if (crypto::circuit_eval(st.circuit, witness)) ++out.satisfying;
      std::size_t i = 0;
      while (i < kappa && ++pick[i] == options[i].size()) pick[i++] = 0;
      if (i == kappa) break;
    }
  }
  return out;
}

ZkpvVerdict zk_position_verify(const pc::CommitScenario& sc, std::span<const std::size_t> region,
                               std::optional<std::size_t> alpha, std::uint64_t seed, const ZkpvOptions& options) {
  ZkpvVerdict v;
  pc::CommitOptions co;
  co.record_log = options.record_log;
  co.suppressed_targets = options.suppressed_targets;
  pc::Opening opening;
  pc::CommitRun run;
  if (alpha) {
    run = pc::run_honest_commit(sc, *alpha, seed, opening, co);
  } else {
    run = pc::run_commit(sc, seed, {}, co);
  }
  v.commit_ran = true;
  v.rho = std::move(run.rho);
  v.log = std::move(run.log);

  // The verifiers hand rho to the prover; each side compiles its own copy.
  const auto prover_rho = pc::CommitmentState::parse(v.rho.serialize());
  const auto verifier_st = compile_reveal_circuit(v.rho, region);
  const auto prover_st = compile_reveal_circuit(prover_rho, region);
  v.circuit_hash = verifier_st.hash;
  v.and_gates = verifier_st.circuit.and_count();
  v.hash_match = prover_st.hash == verifier_st.hash;
  if (!v.hash_match) return v;

  Rng verifier_rng(derive_seed(seed, 10));
  v.zk_pp = crypto::zk_setup(sc.lambda_com, verifier_rng);
  Bits witness;
  if (alpha && !opening.sk.empty()) {
    witness = reveal_witness(opening);
  } else {
    Rng guess(derive_seed(seed, 12));
    witness = guess.bits(prover_st.witness_bits);
  }
  v.prover_had_witness = crypto::circuit_eval(prover_st.circuit, witness);
  const auto cheat = v.prover_had_witness ? crypto::ZkCheat::kNone : options.cheat;
  if (!v.prover_had_witness && cheat == crypto::ZkCheat::kNone) return v;
  crypto::ZkProver prover(prover_st.circuit, witness, v.zk_pp, options.reps, derive_seed(seed, 13), cheat,
                          options.kernel);
  prover.commit();
  v.challenges = crypto::zk_challenges(options.reps, verifier_rng);
  v.proof = prover.respond(v.challenges);
  v.accept = crypto::zk_verify(verifier_st.circuit, v.zk_pp, v.proof, v.challenges, options.kernel);
  return v;
}

ZkpvView real_view(const ZkpvVerdict& v, Time tau) {
  ZkpvView out;
  out.commit = pc::verifier_view(v.rho, tau);
  if (tau > v.rho.scenario.t_final() && v.hash_match) {
    out.circuit_hash = v.circuit_hash;
    out.challenges = v.challenges;
    out.proof = v.proof;
  }
  return out;
}

ZkpvView zkpv_simulator(const crypto::PublicParams& pp, const pc::CommitScenario& sc,
                        std::span<const std::size_t> region, int reps, Time tau, std::uint64_t seed) {
  const auto rho = pc::simulated_commitment_state(pp, sc, derive_seed(seed, 1));
  ZkpvView out;
  out.commit = pc::verifier_view(rho, tau);
  if (tau <= sc.t_final()) return out;
  const auto st = compile_reveal_circuit(rho, region);
  Rng rng(derive_seed(seed, 2));
  const auto zk_pp = crypto::zk_setup(sc.lambda_com, rng);
  out.circuit_hash = st.hash;
  out.challenges = crypto::zk_challenges(reps, rng);
  out.proof = crypto::zk_simulate(st.circuit, zk_pp, out.challenges, derive_seed(seed, 3));
  return out;
}

// ---------------------------------------------------------------------------
// Distinguisher battery.

namespace {

struct Extracted {
  std::vector<std::size_t> shape;  // flattened structural description
  Bits commit_bits;
  Bits proof_bits;
};

Extracted extract(const ZkpvView& v) {
  Extracted x;
  for (const auto& [receiver, time, label, length] : pc::view_shape(v.commit)) {
    x.shape.push_back(receiver);
    x.shape.push_back(static_cast<std::size_t>(time.raw() >> 64));
    x.shape.push_back(static_cast<std::size_t>(static_cast<std::uint64_t>(time.raw())));
    x.shape.push_back(label);
    x.shape.push_back(length);
  }
  bool have_c = false;
  for (const auto& e : v.commit.entries) {
    if (e.label == kCommitLabel) {
      // Every verifier holds the same c; count it once.
      if (have_c) continue;
      have_c = true;
      const Bits b = unpack_bits(e.body, e.body.size() * 8);
      x.commit_bits.insert(x.commit_bits.end(), b.begin(), b.end());
    } else if (e.body.size() > kIndexBytes) {
      const Bits b = unpack_bits(std::span(e.body).subspan(kIndexBytes), (e.body.size() - kIndexBytes) * 8);
      x.commit_bits.insert(x.commit_bits.end(), b.begin(), b.end());
    }
  }
  x.shape.push_back(v.circuit_hash.has_value());
  x.shape.push_back(v.challenges.size());
  if (v.proof) {
    x.shape.push_back(v.proof->reps.size());
    for (const auto& rep : v.proof->reps) {
      for (const auto& cm : rep.commit.view_commitments) {
        x.shape.push_back(cm.size());
        x.proof_bits.insert(x.proof_bits.end(), cm.begin(), cm.end());
      }
      for (const auto& ov : rep.opened) {
        x.shape.push_back(ov.view.input_share.size());
        x.shape.push_back(ov.view.and_outputs.size());
        x.shape.push_back(ov.com_randomness.size());
      }
    }
  }
  return x;
}

double normal_sf(double z) { return boost::math::cdf(boost::math::complement(boost::math::normal(), z)); }

double chi2_sf(double stat, double dof) {
  if (dof <= 0) return 1.0;
  stat = std::max(0.0, stat);
  if (dof > 1000) {
    // Wilson-Hilferty; the exact tail overflows for extreme statistics.
    const double v = 2.0 / (9.0 * dof);
    return normal_sf((std::cbrt(stat / dof) - (1 - v)) / std::sqrt(v));
  }
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), stat));
}

double normal_two_sided(double z) {
  return 2 * normal_sf(std::abs(z));
}

struct BitColumn {
  std::uint64_t n = 0;     // samples
  std::uint64_t ones = 0;  // total ones
  std::vector<std::uint64_t> ones_at;
  std::uint64_t runs = 0;
  std::uint64_t total = 0;
};

BitColumn tally(const std::vector<const Bits*>& samples) {
  BitColumn c;
  c.n = samples.size();
  c.ones_at.assign(samples.front()->size(), 0);
  int prev = -1;
  for (const Bits* s : samples) {
    for (std::size_t p = 0; p < s->size(); ++p) {
      const int bit = (*s)[p];
      c.ones += bit;
      c.ones_at[p] += bit;
      if (bit != prev) ++c.runs;
      prev = bit;
    }
    c.total += s->size();
  }
  return c;
}

void one_set_tests(const std::string& name, const BitColumn& c, std::vector<StatTest>& out) {
  const double N = static_cast<double>(c.total), ones = static_cast<double>(c.ones);
  {
    const double stat = (2 * ones - N) * (2 * ones - N) / N;
    out.push_back({name + ".monobit", stat, chi2_sf(stat, 1)});
  }
  {
    double stat = 0;
    const double n = static_cast<double>(c.n);
    for (auto k : c.ones_at) stat += (2 * static_cast<double>(k) - n) * (2 * static_cast<double>(k) - n) / n;
    out.push_back({name + ".per_position", stat, chi2_sf(stat, static_cast<double>(c.ones_at.size()))});
  }
  {
    const double pi = ones / N;
    const double denom = 2 * std::sqrt(N) * pi * (1 - pi);
    const double z = denom > 0 ? (static_cast<double>(c.runs) - 2 * N * pi * (1 - pi)) / denom : 1e9;
    out.push_back({name + ".runs", z, normal_two_sided(z)});
  }
}

double two_by_two(double a1, double a0, double b1, double b0) {
  const double n = a1 + a0 + b1 + b0, r1 = a1 + b1, r0 = a0 + b0, na = a1 + a0, nb = b1 + b0;
  if (r1 == 0 || r0 == 0 || na == 0 || nb == 0) return -1;
  const double d = a1 * b0 - a0 * b1;
  return n * d * d / (r1 * r0 * na * nb);
}

void two_sample_tests(const std::string& name, const BitColumn& a, const BitColumn& b, std::vector<StatTest>& out) {
  {
    const double stat = two_by_two(static_cast<double>(a.ones), static_cast<double>(a.total - a.ones),
                                   static_cast<double>(b.ones), static_cast<double>(b.total - b.ones));
    out.push_back({name + ".two_sample_monobit", stat, stat < 0 ? 1.0 : chi2_sf(stat, 1)});
  }
  {
    double stat = 0, dof = 0;
    for (std::size_t p = 0; p < a.ones_at.size(); ++p) {
      const double s = two_by_two(static_cast<double>(a.ones_at[p]), static_cast<double>(a.n - a.ones_at[p]),
                                  static_cast<double>(b.ones_at[p]), static_cast<double>(b.n - b.ones_at[p]));
      if (s < 0) continue;
      stat += s;
      dof += 1;
    }
    out.push_back({name + ".two_sample_per_position", stat, chi2_sf(stat, dof)});
  }
}

DistinguisherReport run_suite(const std::vector<Extracted>& a, const std::vector<Extracted>& b, double alpha) {
  if (a.size() < 100 || b.size() < 100) throw ZkpvError("distinguisher suite needs at least 100 views per side");
  DistinguisherReport rep;
  rep.structural_equal = true;
  for (const auto* side : {&a, &b}) {
    for (const auto& x : *side) {
      rep.structural_equal = rep.structural_equal && x.shape == a.front().shape &&
                             x.commit_bits.size() == a.front().commit_bits.size() &&
                             x.proof_bits.size() == a.front().proof_bits.size();
    }
  }
  rep.tests.push_back({"structural_equality", 0, rep.structural_equal ? 1.0 : 0.0, rep.structural_equal});
  if (rep.structural_equal) {
    auto channel = [&](const std::string& name, Bits Extracted::*field) {
      if ((a.front().*field).empty()) return;
      std::vector<const Bits*> pa, pb;
      for (const auto& x : a) pa.push_back(&(x.*field));
      for (const auto& x : b) pb.push_back(&(x.*field));
      const auto ca = tally(pa), cb = tally(pb);
      one_set_tests(name + ".A", ca, rep.tests);
      one_set_tests(name + ".B", cb, rep.tests);
      two_sample_tests(name, ca, cb, rep.tests);
    };
    channel("commit", &Extracted::commit_bits);
    channel("proof", &Extracted::proof_bits);
  }
  const std::size_t m = rep.tests.size() > 1 ? rep.tests.size() - 1 : 1;
  rep.threshold = alpha / static_cast<double>(m);
  rep.pass = rep.structural_equal;
  for (std::size_t i = 1; i < rep.tests.size(); ++i) {
    rep.tests[i].pass = rep.tests[i].p_value >= rep.threshold;
    rep.pass = rep.pass && rep.tests[i].pass;
  }
  return rep;
}

}  // namespace

DistinguisherReport distinguisher_suite(std::span<const ZkpvView> a, std::span<const ZkpvView> b, double alpha) {
  std::vector<Extracted> xa, xb;
  for (const auto& v : a) xa.push_back(extract(v));
  for (const auto& v : b) xb.push_back(extract(v));
  return run_suite(xa, xb, alpha);
}

DistinguisherReport distinguisher_suite(std::span<const pc::VerifierView> a, std::span<const pc::VerifierView> b,
                                        double alpha) {
  std::vector<Extracted> xa, xb;
  for (const auto& v : a) xa.push_back(extract(ZkpvView{v, std::nullopt, {}, std::nullopt}));
  for (const auto& v : b) xb.push_back(extract(ZkpvView{v, std::nullopt, {}, std::nullopt}));
  return run_suite(xa, xb, alpha);
}

}  // namespace zkpos::zkpv
