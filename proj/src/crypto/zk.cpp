#include "zkpos/crypto/zk.hpp"

#include "zkpos/crypto/encryption.hpp"

namespace zkpos::crypto {

using kernels::PackedBits;
using kernels::PartyView;
using kernels::Seed;

namespace {

constexpr std::uint32_t kProofMagic = 0x5A4B5046;  // "ZKPF"
constexpr std::uint16_t kProofVersion = 1;

Seed random_seed(Rng& rng) {
  Seed s{};
  const std::uint64_t hi = rng.u64(), lo = rng.u64();
  for (int i = 0; i < 8; ++i) {
    s[i] = static_cast<std::uint8_t>(hi >> (56 - 8 * i));
    s[8 + i] = static_cast<std::uint8_t>(lo >> (56 - 8 * i));
  }
  return s;
}

PackedBits random_packed(Rng& rng, std::size_t n_bits) {
  PackedBits p(kernels::words_for(n_bits));
  for (auto& w : p) w = rng.u64();
  if (n_bits % 64) p.back() &= (std::uint64_t{1} << (n_bits % 64)) - 1;
  return p;
}

Bits digest_bits(const Digest& d) { return unpack_bits(d, kViewDigestBits); }

std::size_t randomness_bits(const PublicParams& pp) { return kViewDigestBits * static_cast<std::size_t>(pp.lambda); }

void write_packed(ByteWriter& w, const PackedBits& p) {
  w.u32(static_cast<std::uint32_t>(p.size()));
  for (auto v : p) w.u64(v);
}

PackedBits read_packed(ByteReader& r) {
  const std::uint32_t n = r.u32();
  if (static_cast<std::size_t>(n) * 8 > r.remaining()) throw FormatError("packed bit field overruns record");
  PackedBits p(n);
  for (auto& v : p) v = r.u64();
  return p;
}

void write_bits(ByteWriter& w, const Bits& b) {
  w.u32(static_cast<std::uint32_t>(b.size()));
  w.raw(pack_bits(b));
}

Bits read_bits(ByteReader& r) {
  const std::uint32_t n = r.u32();
  if ((static_cast<std::size_t>(n) + 7) / 8 > r.remaining()) throw FormatError("bit field overruns record");
  return unpack_bits(r.raw((n + 7) / 8), n);
}

bool tail_clear(const PackedBits& p, std::size_t n_bits) {
  return n_bits % 64 == 0 || p.empty() || (p.back() >> (n_bits % 64)) == 0;
}

}  // namespace

PublicParams zk_setup(int lambda_com, Rng& rng) { return com_setup(lambda_com, kViewDigestBits, rng); }

Digest view_digest(const PartyView& v, std::size_t n_inputs, std::size_t n_and) {
  ByteWriter w;
  w.raw(v.seed);
  w.u64(n_inputs);
  w.raw(kernels::packed_to_bytes(v.input_share, n_inputs));
  w.u64(n_and);
  w.raw(kernels::packed_to_bytes(v.and_outputs, n_and));
  return toy_hash_striped(w.take());
}

ZkProver::ZkProver(const Circuit& c, Bits witness, PublicParams pp, int reps, std::uint64_t seed, ZkCheat cheat,
                   kernels::Kernel kernel)
    : c_(c), witness_(std::move(witness)), pp_(std::move(pp)), reps_(reps), seed_(seed), cheat_(cheat), kernel_(kernel) {
  if (reps < 1) throw CryptoError("at least one repetition is required");
  if (witness_.size() != c.num_inputs) throw CryptoError("witness length does not match circuit inputs");
  if (pp_.message_bits() != kViewDigestBits) throw CryptoError("view commitment parameters must cover 128 bits");
  if (cheat_ == ZkCheat::kNone && !circuit_eval(c, witness_)) throw CryptoError("witness does not satisfy the circuit");
}

const std::vector<ZkRepCommit>& ZkProver::commit() {
  if (!commits_.empty()) return commits_;
  const std::size_t n_in = c_.num_inputs;
  const std::size_t n_and = c_.and_count();
  std::vector<kernels::RepInput> inputs(reps_);
  com_randomness_.resize(reps_);
  const PackedBits w = kernels::pack_words(witness_);
  for (int r = 0; r < reps_; ++r) {
    Rng rng(derive_seed(seed_, static_cast<std::uint64_t>(r)));
    auto& in = inputs[r];
    for (auto& s : in.seeds) s = random_seed(rng);
    in.input_shares[0] = random_packed(rng, n_in);
    in.input_shares[1] = random_packed(rng, n_in);
    in.input_shares[2] = w;
    for (std::size_t j = 0; j < w.size(); ++j) in.input_shares[2][j] ^= in.input_shares[0][j] ^ in.input_shares[1][j];
    if (cheat_ == ZkCheat::kFlipOutputShare) in.fault_party = static_cast<int>(rng.below(3));
    for (auto& cr : com_randomness_[r]) cr = rng.bits(randomness_bits(pp_));
  }
  transcripts_ = kernels::mpc_run(c_, inputs, kernel_);
  commits_.resize(reps_);
#pragma omp parallel for schedule(dynamic)
  for (int idx = 0; idx < 3 * reps_; ++idx) {
    const int r = idx / 3, i = idx % 3;
    const Bits d = digest_bits(view_digest(transcripts_[r].views[i], n_in, n_and));
    commits_[r].view_commitments[i] = com(pp_, d, com_randomness_[r][i]);
  }
  for (int r = 0; r < reps_; ++r) commits_[r].output_shares = transcripts_[r].output_shares;
  return commits_;
}

ZkProof ZkProver::respond(std::span<const std::uint8_t> challenges) {
  if (challenges.size() != static_cast<std::size_t>(reps_)) throw CryptoError("one challenge per repetition is required");
  commit();
  ZkProof proof;
  proof.reps.resize(reps_);
  for (int r = 0; r < reps_; ++r) {
    const int e = challenges[r];
    if (e < 0 || e > 2) throw CryptoError("challenge must be 0, 1 or 2");
    ZkRepetition& rep = proof.reps[r];
    rep.commit = commits_[r];
    rep.challenge = static_cast<std::uint8_t>(e);
    for (int k = 0; k < 2; ++k) {
      const int party = (e + k) % 3;
      rep.opened[k] = {transcripts_[r].views[party], com_randomness_[r][party]};
    }
  }
  return proof;
}

std::vector<std::uint8_t> zk_challenges(int reps, Rng& rng) {
  std::vector<std::uint8_t> ch(reps);
  for (auto& e : ch) e = static_cast<std::uint8_t>(rng.below(3));
  return ch;
}

ZkProof zk_prove(const Circuit& c, const Bits& witness, const PublicParams& pp, std::span<const std::uint8_t> challenges,
                 std::uint64_t seed, ZkCheat cheat, kernels::Kernel kernel) {
  ZkProver prover(c, witness, pp, static_cast<int>(challenges.size()), seed, cheat, kernel);
  prover.commit();
  return prover.respond(challenges);
}

bool zk_verify(const Circuit& c, const PublicParams& pp, const ZkProof& proof, std::span<const std::uint8_t> challenges,
               kernels::Kernel kernel) {
  try {
    if (proof.reps.empty() || proof.reps.size() != challenges.size()) return false;
    if (pp.message_bits() != kViewDigestBits || pp.bits.size() != 3 * kViewDigestBits * pp.lambda) return false;
    const std::size_t n_in = c.num_inputs;
    const std::size_t n_and = c.and_count();
    const std::size_t com_len = 3 * kViewDigestBits * static_cast<std::size_t>(pp.lambda);
    std::vector<kernels::OpenedPair> pairs(proof.reps.size());
    for (std::size_t r = 0; r < proof.reps.size(); ++r) {
      const ZkRepetition& rep = proof.reps[r];
      if (rep.challenge != challenges[r] || rep.challenge > 2) return false;
      const auto& ys = rep.commit.output_shares;
      if (ys[0] > 1 || ys[1] > 1 || ys[2] > 1 || (ys[0] ^ ys[1] ^ ys[2]) != 1) return false;
      for (const auto& cm : rep.commit.view_commitments) {
        if (cm.size() != com_len) return false;
      }
      for (const auto& ov : rep.opened) {
        const auto& v = ov.view;
        if (v.input_share.size() != kernels::words_for(n_in) || v.and_outputs.size() != kernels::words_for(n_and)) return false;
        if (!tail_clear(v.input_share, n_in) || !tail_clear(v.and_outputs, n_and)) return false;
        if (ov.com_randomness.size() != randomness_bits(pp)) return false;
      }
      pairs[r] = {rep.challenge, &rep.opened[0].view, &rep.opened[1].view};
    }
    std::vector<std::uint8_t> opened_ok(proof.reps.size() * 2, 0);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t idx = 0; idx < opened_ok.size(); ++idx) {
      const ZkRepetition& rep = proof.reps[idx / 2];
      const std::size_t k = idx % 2;
      const int party = (rep.challenge + static_cast<int>(k)) % 3;
      const Bits d = digest_bits(view_digest(rep.opened[k].view, n_in, n_and));
      opened_ok[idx] = com(pp, d, rep.opened[k].com_randomness) == rep.commit.view_commitments[party];
    }
    for (auto ok : opened_ok) {
      if (!ok) return false;
    }
    const auto checks = kernels::mpc_check(c, pairs, kernel);
    for (std::size_t r = 0; r < checks.size(); ++r) {
      const ZkRepetition& rep = proof.reps[r];
      const int e = rep.challenge;
      if (!checks[r].consistent) return false;
      if (checks[r].y_first != rep.commit.output_shares[e]) return false;
      if (checks[r].y_second != rep.commit.output_shares[(e + 1) % 3]) return false;
    }
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

ZkProof zk_simulate(const Circuit& c, const PublicParams& pp, std::span<const std::uint8_t> challenges,
                    std::uint64_t seed) {
  if (pp.message_bits() != kViewDigestBits) throw CryptoError("view commitment parameters must cover 128 bits");
  const std::size_t n_in = c.num_inputs;
  const std::size_t n_and = c.and_count();
  ZkProof proof;
  proof.reps.resize(challenges.size());
  for (std::size_t r = 0; r < challenges.size(); ++r) {
    const int e = challenges[r];
    if (e < 0 || e > 2) throw CryptoError("challenge must be 0, 1 or 2");
    Rng rng(derive_seed(seed, r));
    ZkRepetition& rep = proof.reps[r];
    rep.challenge = static_cast<std::uint8_t>(e);
    PartyView& first = rep.opened[0].view;
    PartyView& second = rep.opened[1].view;
    first.seed = random_seed(rng);
    first.input_share = random_packed(rng, n_in);
    second.seed = random_seed(rng);
    second.input_share = random_packed(rng, n_in);
    second.and_outputs = random_packed(rng, n_and);
    const auto [y_first, y_second] = kernels::mpc_complete_first(c, e, first, second);
    auto& ys = rep.commit.output_shares;
    ys[e] = y_first;
    ys[(e + 1) % 3] = y_second;
    ys[(e + 2) % 3] = static_cast<std::uint8_t>(1 ^ y_first ^ y_second);
    for (int k = 0; k < 2; ++k) {
      rep.opened[k].com_randomness = rng.bits(randomness_bits(pp));
      const Bits d = digest_bits(view_digest(rep.opened[k].view, n_in, n_and));
      rep.commit.view_commitments[(e + k) % 3] = com(pp, d, rep.opened[k].com_randomness);
    }
    const Bits dummy = rng.bits(kViewDigestBits);
    rep.commit.view_commitments[(e + 2) % 3] = com(pp, dummy, rng.bits(randomness_bits(pp)));
  }
  return proof;
}

Bytes ZkProof::serialize() const {
  ByteWriter w;
  w.u32(kProofMagic);
  w.u16(kProofVersion);
  w.u32(static_cast<std::uint32_t>(reps.size()));
  for (const auto& rep : reps) {
    ByteWriter rec;
    rec.u8(rep.challenge);
    for (auto y : rep.commit.output_shares) rec.u8(y);
    for (const auto& cm : rep.commit.view_commitments) write_bits(rec, cm);
    for (const auto& ov : rep.opened) {
      rec.raw(ov.view.seed);
      write_packed(rec, ov.view.input_share);
      write_packed(rec, ov.view.and_outputs);
      write_bits(rec, ov.com_randomness);
    }
    w.section(rec.bytes());
  }
  return w.take();
}

ZkProof ZkProof::parse(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  if (r.u32() != kProofMagic) throw FormatError("not a proof file");
  if (r.u16() != kProofVersion) throw FormatError("unsupported proof version");
  const std::uint32_t n = r.u32();
  ZkProof p;
  for (std::uint32_t i = 0; i < n; ++i) {
    const Bytes record = r.section();
    ByteReader rec(record);
    ZkRepetition rep;
    rep.challenge = rec.u8();
    for (auto& y : rep.commit.output_shares) y = rec.u8();
    for (auto& cm : rep.commit.view_commitments) cm = read_bits(rec);
    for (auto& ov : rep.opened) {
      const Bytes s = rec.raw(16);
      std::copy(s.begin(), s.end(), ov.view.seed.begin());
      ov.view.input_share = read_packed(rec);
      ov.view.and_outputs = read_packed(rec);
      ov.com_randomness = read_bits(rec);
    }
    if (!rec.done()) throw FormatError("trailing bytes in proof record");
    p.reps.push_back(std::move(rep));
  }
  if (!r.done()) throw FormatError("trailing bytes after proof");
  return p;
}

}  // namespace zkpos::crypto
