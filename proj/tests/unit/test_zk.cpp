#include <gtest/gtest.h>

#include "zkpos/crypto/compile.hpp"
#include "zkpos/crypto/zk.hpp"
#include "zkpos/kernels/trials.hpp"

using namespace zkpos;
using namespace zkpos::crypto;

namespace {

// "I know a 16-bit key whose keystream prefix is this public string."
struct PrgStatement {
  Circuit circuit;
  Bits witness;
};

PrgStatement prg_statement(Rng& rng) {
  const Bits key = rng.bits(16);
  CircuitBuilder cb(16);
  std::vector<Wire> kw;
  for (int i = 0; i < 16; ++i) kw.push_back(cb.input(i));
  const auto ks = toy_prg_circuit(cb, key_words_from_bits(cb, kw), 64);
  return {cb.finish(cb.equals_const(ks, toy_prg(ToyKey::from_bits(key), 64))), key};
}

Circuit unsatisfiable() {
  CircuitBuilder cb(1);
  return cb.finish(cb.and_(cb.input(0), cb.not_(cb.input(0))));
}

}  // namespace

TEST(Zk, CompletenessAtFortyReps) {
  Rng rng(1);
  const auto st = prg_statement(rng);
  const auto pp = zk_setup(24, rng);
  for (int t = 0; t < 5; ++t) {
    const auto ch = zk_challenges(40, rng);
    const auto proof = zk_prove(st.circuit, st.witness, pp, ch, rng.u64());
    EXPECT_TRUE(zk_verify(st.circuit, pp, proof, ch));
    EXPECT_TRUE(zk_verify(st.circuit, pp, proof, ch, kernels::Kernel::kReference));
  }
}

TEST(Zk, PackedAndReferenceKernelsGiveIdenticalProofs) {
  Rng rng(2);
  const auto st = prg_statement(rng);
  const auto pp = zk_setup(24, rng);
  const auto ch = zk_challenges(70, rng);
  const auto a = zk_prove(st.circuit, st.witness, pp, ch, 99, ZkCheat::kNone, kernels::Kernel::kPacked);
  const auto b = zk_prove(st.circuit, st.witness, pp, ch, 99, ZkCheat::kNone, kernels::Kernel::kReference);
  EXPECT_EQ(a.serialize(), b.serialize());
}

TEST(Zk, ProverRefusesBadWitness) {
  Rng rng(3);
  const auto st = prg_statement(rng);
  const auto pp = zk_setup(24, rng);
  Bits bad = st.witness;
  bad[0] ^= 1;
  EXPECT_THROW(ZkProver(st.circuit, bad, pp, 4, 1), CryptoError);
}

TEST(Zk, MalformedProofsRejectWithoutThrowing) {
  Rng rng(4);
  const auto st = prg_statement(rng);
  const auto pp = zk_setup(24, rng);
  const auto ch = zk_challenges(6, rng);
  const auto good = zk_prove(st.circuit, st.witness, pp, ch, 5);
  ASSERT_TRUE(zk_verify(st.circuit, pp, good, ch));

  auto p = good;
  p.reps[2].opened[0].view.and_outputs[0] ^= 1;
  EXPECT_FALSE(zk_verify(st.circuit, pp, p, ch));
  p = good;
  p.reps[1].opened[1].view.input_share.clear();
  EXPECT_FALSE(zk_verify(st.circuit, pp, p, ch));
  p = good;
  p.reps[0].commit.output_shares[0] ^= 1;
  EXPECT_FALSE(zk_verify(st.circuit, pp, p, ch));
  p = good;
  p.reps[3].opened[1].com_randomness[0] ^= 1;
  EXPECT_FALSE(zk_verify(st.circuit, pp, p, ch));
  p = good;
  p.reps.pop_back();
  EXPECT_FALSE(zk_verify(st.circuit, pp, p, ch));
  auto other = ch;
  other[0] = static_cast<std::uint8_t>((other[0] + 1) % 3);
  EXPECT_FALSE(zk_verify(st.circuit, pp, good, other));
  EXPECT_FALSE(zk_verify(st.circuit, pp, ZkProof{}, {}));
}

TEST(Zk, SerializationRoundTrip) {
  Rng rng(5);
  const auto st = prg_statement(rng);
  const auto pp = zk_setup(24, rng);
  const auto ch = zk_challenges(3, rng);
  const auto proof = zk_prove(st.circuit, st.witness, pp, ch, 6);
  const auto bytes = proof.serialize();
  const auto back = ZkProof::parse(bytes);
  EXPECT_EQ(back.serialize(), bytes);
  EXPECT_TRUE(zk_verify(st.circuit, pp, back, ch));
  Bytes cut(bytes.begin(), bytes.end() - 3);
  EXPECT_THROW(ZkProof::parse(cut), FormatError);
}

TEST(Zk, CanonicalCheatPassesTwoThirdsPerRepetition) {
  Rng rng(6);
  const Circuit c = unsatisfiable();
  const auto pp = zk_setup(24, rng);
  const auto stats = kernels::run_trials(6000, 7, [&](Rng& r, std::uint64_t) {
    const auto ch = zk_challenges(1, r);
    const auto proof = zk_prove(c, Bits{1}, pp, ch, r.u64(), ZkCheat::kFlipOutputShare);
    return zk_verify(c, pp, proof, ch);
  });
  EXPECT_NEAR(stats.rate(), 2.0 / 3.0, 0.02);
  // Without the cheat, shares of an unsatisfied circuit XOR to 0.
  const auto ch = zk_challenges(1, rng);
  ZkProver honest_attempt(c, Bits{1}, pp, 1, 3, ZkCheat::kFlipOutputShare);
  EXPECT_EQ(honest_attempt.commit()[0].output_shares[0] ^ honest_attempt.commit()[0].output_shares[1] ^
                honest_attempt.commit()[0].output_shares[2],
            1);
}

TEST(Zk, SimulatedTranscriptsVerify) {
  Rng rng(7);
  const auto st = prg_statement(rng);
  const auto pp = zk_setup(24, rng);
  const auto ch = zk_challenges(12, rng);
  const auto sim = zk_simulate(st.circuit, pp, ch, 8);
  EXPECT_TRUE(zk_verify(st.circuit, pp, sim, ch));
  // The simulator needs no witness, so it also "proves" unsatisfiable
  // statements: only the challenge-first ordering makes that possible.
  const Circuit u = unsatisfiable();
  EXPECT_TRUE(zk_verify(u, pp, zk_simulate(u, pp, ch, 9), ch));
}
