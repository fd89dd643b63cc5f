#include <gtest/gtest.h>

#include <set>

#include "zkpos/pc/commit.hpp"

using namespace zkpos;
using namespace zkpos::pc;

namespace {

SpatialPoint pt(std::initializer_list<int> xs) {
  SpatialPoint p;
  for (int x : xs) p.emplace_back(x);
  return p;
}

// d = 1, verifiers at 0 and 12, five committable points; T = 10.
CommitScenario line_scenario(int rounds = 1) {
  CommitScenario sc;
  sc.verifiers = {pt({0}), pt({12})};
  sc.S = {{pt({2}), Rational(30)}, {pt({4}), Rational(31)}, {pt({6}), Rational(32)},
          {pt({8}), Rational(33)}, {pt({10}), Rational(34)}};
  sc.rounds = rounds;
  return sc;
}

CommitScenario toy_scenario() {
  auto sc = line_scenario();
  sc.kappa = 8;
  sc.lambda_com = 4;
  sc.n = 2;
  return sc;
}

CommitScenario triangle_scenario() {
  CommitScenario sc;
  sc.verifiers = {pt({0, 0}), pt({12, 0}), pt({0, 12})};
  sc.S = {{pt({2, 3}), Rational(60)}, {pt({5, 1}), Rational(61)}, {pt({3, 5}), Rational(60)}};
  return sc;
}

}  // namespace

TEST(Scenario, TimingAndValidation) {
  const auto sc = line_scenario();
  EXPECT_EQ(sc.T(), Time::from_int(10));
  EXPECT_EQ(sc.t1(), Time::from_int(20));
  EXPECT_EQ(sc.expected_time(0, 1), Time::from_int(40));
  EXPECT_EQ(sc.t_final(), Time::from_int(44));
  EXPECT_EQ(sc.latest_t_init(), Rational(0));
  EXPECT_NO_THROW(sc.validate());

  auto late = sc;
  late.t_init = Rational(1, 2);
  EXPECT_THROW(late.validate(), PcError);
  auto outside = sc;
  outside.S.push_back({pt({13}), Rational(60)});
  EXPECT_THROW(outside.validate(), PcError);
  auto dup = sc;
  dup.S.push_back(dup.S.front());
  EXPECT_THROW(dup.validate(), PcError);
}

TEST(Commit, TranscriptCountsAndTimestamps) {
  const auto sc = line_scenario();
  Opening op;
  const auto run = run_honest_commit(sc, 2, 7, op);
  EXPECT_EQ(run.causality_violations, 0u);
  std::size_t labeled = 0, commits = 0;
  for (const auto& e : run.rho.M) {
    if (e.label == kCommitLabel) {
      ++commits;
      EXPECT_EQ(e.timestamp, sc.t1());
    } else {
      ++labeled;
      EXPECT_EQ(e.timestamp, sc.expected_time(e.label, e.receiver));
    }
  }
  EXPECT_EQ(labeled, 10u);
  EXPECT_EQ(commits, 2u);
  EXPECT_EQ(run.rho.c.size(), 3u * sc.lambda_com * sc.kappa);
  // Phase syntax: t_init <= t_min(S) <= t_max(S) <= t_final.
  EXPECT_LE(Time::from_rational(sc.t_init), Time::from_int(30));
  EXPECT_LE(Time::from_int(34), sc.t_final());
}

TEST(Reveal, HonestAcceptsOnlyTheTruePoint) {
  for (int rounds : {1, 3}) {
    const auto sc = line_scenario(rounds);
    for (std::size_t a = 0; a < sc.S.size(); ++a) {
      for (std::uint64_t seed = 0; seed < 4; ++seed) {
        Opening op;
        const auto run = run_honest_commit(sc, a, seed, op, {false, {}});
        for (std::size_t b = 0; b < sc.S.size(); ++b) {
          const auto res = reveal_phase(run.rho, {b, op});
          EXPECT_EQ(res.accept, a == b) << "alpha " << a << " reveal " << b << ": " << res.reason;
          EXPECT_EQ(res.accepting, std::vector<std::size_t>{a});
        }
      }
    }
  }
}

TEST(Reveal, HonestAcceptsInThePlane) {
  const auto sc = triangle_scenario();
  for (std::size_t a = 0; a < sc.S.size(); ++a) {
    Opening op;
    const auto run = run_honest_commit(sc, a, 11 + a, op);
    EXPECT_EQ(run.causality_violations, 0u);
    EXPECT_TRUE(reveal_phase(run.rho, {a, op}).accept);
    EXPECT_FALSE(reveal_phase(run.rho, {(a + 1) % sc.S.size(), op}).accept);
  }
}

TEST(Reveal, BadOpeningsAndAbsentProvers) {
  const auto sc = line_scenario();
  Opening op;
  const auto run = run_honest_commit(sc, 1, 3, op);
  auto bad = op;
  bad.sk[0] ^= 1;
  EXPECT_FALSE(reveal_phase(run.rho, {1, bad}).accept);
  bad = op;
  bad.r.back() ^= 1;
  EXPECT_FALSE(reveal_phase(run.rho, {1, bad}).accept);
  bad = op;
  bad.sk.pop_back();
  EXPECT_FALSE(reveal_phase(run.rho, {1, bad}).accept);
  EXPECT_FALSE(reveal_phase(run.rho, {99, op}).accept);

  // A prover sitting between committable points only produces dummies.
  auto sink = std::make_shared<std::optional<Opening>>();
  std::vector<PartySpec> provers;
  provers.push_back({pt({5}), std::make_unique<HonestCommitter>(sc, std::nullopt, sink)});
  const auto off = run_commit(sc, 3, std::move(provers));
  ASSERT_TRUE(sink->has_value());
  for (std::size_t a = 0; a < sc.S.size(); ++a) {
    const auto res = reveal_phase(off.rho, {a, **sink});
    EXPECT_FALSE(res.accept);
    EXPECT_TRUE(res.accepting.empty());
  }

  // No prover at all: no commitment reaches the verifiers.
  const auto empty = run_commit(sc, 3, {});
  EXPECT_TRUE(empty.rho.M.empty());
  EXPECT_FALSE(reveal_phase(empty.rho, {0, op}).accept);
}

TEST(Reveal, SuppressedChallengesDenyTheTruePoint) {
  const auto sc = line_scenario();
  Opening op;
  const auto run = run_honest_commit(sc, 3, 5, op, {false, {sc.S[3].L}});
  const auto res = reveal_phase(run.rho, {3, op});
  EXPECT_FALSE(res.accept);
  EXPECT_TRUE(res.accepting.empty());
}

TEST(Reveal, SingleBitTamperNeverMovesThePoint) {
  const auto sc = toy_scenario();
  for (std::size_t a : {0u, 3u}) {
    Opening op;
    const auto run = run_honest_commit(sc, a, 21 + a, op, {false, {}});
    ASSERT_TRUE(reveal_phase(run.rho, {a, op}).accept);
    std::size_t flips = 0, still_accepting = 0;
    for (std::size_t e = 0; e < run.rho.M.size(); ++e) {
      for (std::size_t bit = 0; bit < run.rho.M[e].body.size() * 8; ++bit) {
        auto rho = run.rho;
        rho.M[e].body[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
        ++flips;
        for (std::size_t b = 0; b < sc.S.size(); ++b) {
          const auto res = reveal_phase(rho, {b, op});
          if (res.accept) {
            EXPECT_EQ(b, a);
            EXPECT_EQ(res.accepting.size(), 1u);
            ++still_accepting;
          }
          for (auto x : res.accepting) EXPECT_EQ(x, a);
        }
      }
    }
    EXPECT_GT(flips, 0u);
    EXPECT_LT(still_accepting, flips);
  }
}

TEST(Reveal, DeterministicVerdicts) {
  const auto sc = line_scenario();
  Opening op;
  const auto run = run_honest_commit(sc, 4, 9, op);
  const auto first = reveal_phase(run.rho, {4, op});
  for (int i = 0; i < 5; ++i) {
    const auto again = reveal_phase(run.rho, {4, op});
    EXPECT_EQ(again.accept, first.accept);
    EXPECT_EQ(again.accepting, first.accepting);
  }
}

TEST(Commit, RunsAreDeterministic) {
  const auto sc = line_scenario();
  Opening op1, op2;
  const auto a = run_honest_commit(sc, 2, 42, op1);
  const auto b = run_honest_commit(sc, 2, 42, op2);
  EXPECT_EQ(a.rho, b.rho);
  EXPECT_EQ(op1.sk, op2.sk);
  EXPECT_EQ(sim::to_ndjson(a.log), sim::to_ndjson(b.log));
}

TEST(Serialization, RhoAndOpeningRoundTrip) {
  for (const auto& sc : {line_scenario(2), triangle_scenario()}) {
    Opening op;
    const auto run = run_honest_commit(sc, 1, 13, op);
    const Bytes bytes = run.rho.serialize();
    EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "PCMT");
    const auto back = CommitmentState::parse(bytes);
    EXPECT_EQ(back, run.rho);
    const auto op_back = Opening::parse(op.serialize());
    EXPECT_EQ(op_back.sk, op.sk);
    EXPECT_EQ(op_back.r, op.r);
    EXPECT_TRUE(reveal_phase(back, {1, op_back}).accept);

    Bytes cut(bytes.begin(), bytes.end() - 1);
    EXPECT_THROW(CommitmentState::parse(cut), FormatError);
    Bytes wrong = bytes;
    wrong[0] ^= 1;
    EXPECT_THROW(CommitmentState::parse(wrong), FormatError);
  }
  EXPECT_THROW(Opening::parse(Bytes{1, 2, 3}), FormatError);
}

TEST(Hiding, SimulatedViewHasTheRealShape) {
  const auto sc = line_scenario(2);
  Opening op;
  const auto base = run_honest_commit(sc, 0, 100, op, {false, {}});
  std::vector<Time> taus = {Time::from_rational(sc.t_init), sc.t1(), Time::from_int(35), Time::from_int(41),
                            sc.t_final()};
  std::size_t differing = 0, compared = 0;
  for (std::size_t a = 0; a < sc.S.size(); ++a) {
    const auto run = run_honest_commit(sc, a, 100 + a, op, {false, {}});
    // Transcript shape is independent of the prover's point.
    EXPECT_EQ(view_shape(verifier_view(run.rho, sc.t_final())), view_shape(verifier_view(base.rho, sc.t_final())));
    for (const auto& tau : taus) {
      const auto real = verifier_view(run.rho, tau);
      const auto sim = hiding_simulator(run.rho.pp, sc, tau, 500 + a);
      EXPECT_EQ(view_shape(sim), view_shape(real));
      for (std::size_t i = 0; i < real.entries.size(); ++i) {
        ++compared;
        differing += real.entries[i].body != sim.entries[i].body;
      }
    }
  }
  EXPECT_GT(compared, 0u);
  EXPECT_EQ(differing, compared);
}
