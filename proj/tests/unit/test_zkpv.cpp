#include <gtest/gtest.h>

#include <cmath>

#include "zkpos/kernels/trials.hpp"
#include "zkpos/zkpv/zkpv.hpp"

using namespace zkpos;
using namespace zkpos::zkpv;
using sim::Rational;

namespace {

SpatialPoint pt(int x) { return SpatialPoint{Rational(x)}; }

// d = 1, verifiers at 0 and 12, |S| points at x = 2, 3, ... all at t = 40.
pc::CommitScenario line(std::size_t points) {
  pc::CommitScenario sc;
  sc.verifiers = {pt(0), pt(12)};
  for (std::size_t i = 0; i < points; ++i) sc.S.push_back({pt(2 + static_cast<int>(i)), Rational(40)});
  return sc;
}

pc::CommitScenario toy(std::size_t points) {
  auto sc = line(points);
  sc.kappa = 8;
  sc.lambda_com = 4;
  sc.n = 2;
  return sc;
}

const std::vector<std::size_t> kRegion = {0, 1};

ZkpvOptions with_reps(int reps) {
  ZkpvOptions o;
  o.reps = reps;
  return o;
}

// The broken committer of the negative control: same schedule, but every
// entry carries its frame in the clear.
ZkpvView leak_plaintext(ZkpvView v, const pc::Opening& opening, const crypto::FrameLayout& layout) {
  const crypto::SecretKey sk{opening.sk};
  for (auto& e : v.commit.entries) {
    if (e.label == pc::kCommitLabel) continue;
    const auto ct = crypto::Ciphertext::parse(e.body, layout);
    const auto y = crypto::dec(sk, ct, layout);
    Bits frame(layout.frame_bits(), 0);
    if (y) {
      frame[0] = 1;
      std::copy(y->begin(), y->end(), frame.begin() + 1);
    }
    e.body = crypto::Ciphertext{ct.index, frame}.serialize();
  }
  return v;
}

}  // namespace

TEST(RevealCircuit, HonestWitnessSatisfies) {
  const auto sc = line(4);
  pc::Opening op;
  const auto run = pc::run_honest_commit(sc, 1, 3, op);
  const auto st = compile_reveal_circuit(run.rho, kRegion);
  EXPECT_TRUE(st.commitment_delivered);
  EXPECT_EQ(st.witness_bits, 64u + 64u * 24u);
  EXPECT_TRUE(crypto::circuit_eval(st.circuit, reveal_witness(op)));
  for (std::size_t a = 0; a < sc.S.size(); ++a) EXPECT_EQ(st.timing_ok[a], 1) << a;

  Bits wrong = reveal_witness(op);
  wrong[5] ^= 1;
  EXPECT_FALSE(crypto::circuit_eval(st.circuit, wrong));
}

TEST(RevealCircuit, PointOutsideRegionHasNoWitness) {
  const auto sc = toy(3);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    pc::Opening op;
    const auto run = pc::run_honest_commit(sc, 2, seed, op);
    const std::vector<std::size_t> region = {0, 1};
    const auto st = compile_reveal_circuit(run.rho, region);
    EXPECT_FALSE(crypto::circuit_eval(st.circuit, reveal_witness(op)));
    const auto search = exhaustive_witness_search(run.rho, st);
    EXPECT_EQ(search.keys_tried, 256u);
    EXPECT_GE(search.com_consistent, 1u);
    EXPECT_EQ(search.satisfying, 0u) << seed;

    // Same rho with R containing the true point: exactly the real opening.
    const std::vector<std::size_t> with_alpha = {2};
    const auto ok = compile_reveal_circuit(run.rho, with_alpha);
    EXPECT_EQ(exhaustive_witness_search(run.rho, ok).satisfying, search.com_consistent);
  }
}

TEST(RevealCircuit, GateCountAtDefaults) {
  const auto sc = line(9);
  pc::Opening op;
  const auto run = pc::run_honest_commit(sc, 3, 11, op);
  const std::vector<std::size_t> region = {2, 3, 4};
  const auto st = compile_reveal_circuit(run.rho, region);
  const auto ands = st.circuit.and_count();
  EXPECT_GE(ands, 100000u);
  EXPECT_LE(ands, 2000000u);
  EXPECT_EQ(ands, 134992u);  // regression value
  EXPECT_TRUE(crypto::circuit_eval(st.circuit, reveal_witness(op)));

  // Without a delivered commitment the statement folds to a constant.
  const auto absent = compile_reveal_circuit(pc::run_commit(sc, 11, {}).rho, region);
  EXPECT_FALSE(absent.commitment_delivered);
  EXPECT_FALSE(crypto::circuit_eval(absent.circuit, reveal_witness(op)));
}

TEST(RevealCircuit, RejectsBadRegions) {
  const auto sc = line(3);
  const auto run = pc::run_commit(sc, 1, {});
  EXPECT_THROW(compile_reveal_circuit(run.rho, std::vector<std::size_t>{}), ZkpvError);
  EXPECT_THROW(compile_reveal_circuit(run.rho, std::vector<std::size_t>{3}), ZkpvError);
  EXPECT_THROW(compile_reveal_circuit(run.rho, std::vector<std::size_t>{1, 1}), ZkpvError);
  auto bad = run.rho;
  bad.pp.bits.pop_back();
  EXPECT_THROW(compile_reveal_circuit(bad, std::vector<std::size_t>{0}), ZkpvError);
}

TEST(ZkPositionVerify, HonestProverInRegionAccepts) {
  const auto sc = line(4);
  for (std::size_t a : kRegion) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto v = zk_position_verify(sc, kRegion, a, seed, with_reps(8));
      EXPECT_TRUE(v.hash_match);
      EXPECT_TRUE(v.prover_had_witness);
      EXPECT_TRUE(v.accept) << a << " " << seed;
      EXPECT_EQ(v.accept, crypto::zk_verify(compile_reveal_circuit(v.rho, kRegion).circuit, v.zk_pp, v.proof,
                                            v.challenges));
    }
  }
}

TEST(ZkPositionVerify, ProverOutsideRegionIsCaughtAtTheCheatRate) {
  const auto sc = toy(3);
  const std::vector<std::size_t> region = {0};
  const auto stats = kernels::run_trials(300, 17, [&](Rng& rng, std::uint64_t) {
    const auto v = zk_position_verify(sc, region, 2, rng.u64(), with_reps(8));
    EXPECT_FALSE(v.prover_had_witness);
    return v.accept;
  });
  const double p = std::pow(2.0 / 3.0, 8);
  EXPECT_LE(stats.rate(), p + 3 * std::sqrt(p * (1 - p) / 300));
}

TEST(ZkPositionVerify, AbsentProverRejects) {
  const auto sc = line(3);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto v = zk_position_verify(sc, kRegion, std::nullopt, seed, with_reps(40));
    EXPECT_FALSE(v.prover_had_witness);
    EXPECT_FALSE(v.accept);
  }
}

TEST(Simulator, ComposesWithTheCommitSimulator) {
  const auto sc = line(3);
  Rng rng(5);
  const auto pp = crypto::com_setup(sc.lambda_com, static_cast<std::size_t>(sc.kappa), rng);
  const auto early = zkpv_simulator(pp, sc, kRegion, 8, Time::from_rational(sc.t_init), 9);
  EXPECT_EQ(early.commit.pp, pp);
  EXPECT_TRUE(early.commit.entries.empty());
  EXPECT_FALSE(early.proof.has_value());

  const auto at_final = zkpv_simulator(pp, sc, kRegion, 8, sc.t_final(), 9);
  const auto hiding = pc::hiding_simulator(pp, sc, sc.t_final(), derive_seed(9, 1));
  EXPECT_EQ(pc::view_shape(at_final.commit), pc::view_shape(hiding));
  const auto real = zk_position_verify(sc, kRegion, 0, 4, with_reps(8));
  EXPECT_EQ(pc::view_shape(at_final.commit), pc::view_shape(real_view(real, sc.t_final()).commit));

  const auto late = zkpv_simulator(pp, sc, kRegion, 8, sc.t_final() + Time::from_int(1), 9);
  ASSERT_TRUE(late.proof.has_value());
  EXPECT_EQ(late.proof->reps.size(), 8u);
}

TEST(Distinguisher, RealVersusRealAndSimulated) {
  const auto sc = line(3);
  const Time tau = sc.t_final() + Time::from_int(1);
  std::vector<ZkpvView> at0, at0b, at1, sim, leaky;
  Rng pp_rng(1);
  const auto pp = crypto::com_setup(sc.lambda_com, static_cast<std::size_t>(sc.kappa), pp_rng);
  pc::CommitOptions quiet;
  quiet.record_log = false;
  for (std::uint64_t i = 0; i < 100; ++i) {
    pc::Opening op;
    pc::run_honest_commit(sc, 0, 1000 + i, op, quiet);  // the opening behind v0
    ZkpvVerdict v0 = zk_position_verify(sc, kRegion, 0, 1000 + i, with_reps(4));
    at0.push_back(real_view(v0, tau));
    leaky.push_back(leak_plaintext(real_view(v0, tau), op, sc.layout()));
    at0b.push_back(real_view(zk_position_verify(sc, kRegion, 0, 5000 + i, with_reps(4)), tau));
    at1.push_back(real_view(zk_position_verify(sc, kRegion, 1, 9000 + i, with_reps(4)), tau));
    sim.push_back(zkpv_simulator(pp, sc, kRegion, 4, tau, 20000 + i));
  }
  const auto same = distinguisher_suite(at0, at0b);
  EXPECT_TRUE(same.pass);
  const auto cross = distinguisher_suite(at0, at1);
  EXPECT_TRUE(cross.structural_equal);
  EXPECT_TRUE(cross.pass);
  const auto vs_sim = distinguisher_suite(at0, sim);
  EXPECT_TRUE(vs_sim.pass);
  for (const auto& t : vs_sim.tests) EXPECT_TRUE(t.pass) << t.name << " p=" << t.p_value;

  const auto broken = distinguisher_suite(at0, leaky);
  EXPECT_TRUE(broken.structural_equal);
  EXPECT_FALSE(broken.pass);

  std::vector<ZkpvView> few(at0.begin(), at0.begin() + 50);
  EXPECT_THROW(distinguisher_suite(few, at1), ZkpvError);
}
