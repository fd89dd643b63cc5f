#include <gtest/gtest.h>

#include <cmath>

#include "zkpos/attacks/attacks.hpp"

using namespace zkpos;
using namespace zkpos::attacks;

namespace {

double three_sigma(double p, double n) { return 3 * std::sqrt(p * (1 - p) / n); }

// Exact success of a computational-basis measurement, averaged over the four
// BB84 states, read off the state vectors.
double intercept_resend_oracle() {
  qsim::QuantumArena arena;
  double total = 0;
  for (int theta = 0; theta < 2; ++theta) {
    for (int b = 0; b < 2; ++b) {
      const auto q = arena.prepare_bb84(b, theta);
      const auto snap = arena.snapshot(q);
      total += std::norm(snap.amplitudes[static_cast<std::size_t>(b)]);
      Rng rng(1);
      arena.discard(q, rng);
    }
  }
  return total / 4;
}

pc::CommitScenario commit_line(int rounds) {
  pc::CommitScenario sc;
  sc.verifiers = {SpatialPoint{Rational(0)}, SpatialPoint{Rational(12)}};
  for (int i = 0; i < 5; ++i) sc.S.push_back({SpatialPoint{Rational(2 + 2 * i)}, Rational(30 + i)});
  sc.rounds = rounds;
  return sc;
}

}  // namespace

TEST(ClassicalCopy, StraddlingPairsAlwaysWin) {
  LineSetup setup;
  const auto r = classical_copy_attack(setup, 300, 1);
  EXPECT_EQ(r.successes, 300u);
  setup.spoofers = {Rational(1, 2), Rational(11, 2)};
  EXPECT_EQ(classical_copy_attack(setup, 300, 2).successes, 300u);
}

TEST(ClassicalCopy, TimingOracle) {
  // Each member must hear its partner's copy and still reach its own
  // verifier on time: recv + |s0 - s1| + |s - v| <= response time.
  const LineSetup setup;
  const auto inst = setup.instance();
  const Rational t = inst.target.t;
  for (const auto& [a, b] : {std::pair{Rational(1), Rational(5)}, std::pair{Rational(1, 2), Rational(11, 2)}}) {
    const Rational recv0 = t - setup.L + a, recv1 = t - (setup.v1 - setup.L) + (setup.v1 - b);
    const Rational know = std::max(recv0, recv1) + (b - a);
    EXPECT_LE(know + a, t + setup.L);
    EXPECT_LE(know + (setup.v1 - b), t + (setup.v1 - setup.L));
  }
}

TEST(ClassicalCopy, SingleSpooferAndBadGeometry) {
  LineSetup setup;
  setup.spoofers = {Rational(1)};
  EXPECT_EQ(classical_copy_attack(setup, 200, 3).successes, 0u);
  setup.spoofers = {Rational(1), Rational(2)};
  EXPECT_THROW(classical_copy_attack(setup, 1, 3), AttackError);
  setup.spoofers = {Rational(1), Rational(5)};
  setup.L = 7;
  EXPECT_THROW(classical_copy_attack(setup, 1, 3), AttackError);
  LineSetup inside;
  inside.spoofers = {Rational(3), Rational(5)};
  EXPECT_THROW(classical_copy_attack(inside, 1, 3), AttackError);
}

TEST(InterceptResend, PerRoundRateMatchesTheEnumeration) {
  const double oracle = intercept_resend_oracle();
  EXPECT_NEAR(oracle, 0.75, 1e-12);
  LineSetup setup;
  setup.rounds = 20;
  const auto r = intercept_resend_attack(setup, 2000, 4);
  EXPECT_EQ(r.rounds, 40000u);
  EXPECT_NEAR(r.round_rate(), oracle, three_sigma(oracle, 40000));
  const double all = std::pow(oracle, 20);
  EXPECT_LE(r.rate, std::min(0.01, all + three_sigma(all, 2000)));
  // Same coalition, classical variant: nothing to guess.
  EXPECT_EQ(intercept_resend_attack(setup, 50, 5, classical_scheme()).successes, 50u);
}

TEST(EprAttack, TeleportationBreaksPlainBb84) {
  LineSetup setup;
  setup.n = 1;
  const auto r = epr_attack(setup, plain_bb84_scheme(), 1, 2000, 6);
  EXPECT_EQ(r.successes, 2000u);
  EXPECT_EQ(r.epr_used_max, 1u);
  EXPECT_LE(r.epr_used_max, r.epr_budget);
}

TEST(EprAttack, WithoutEntanglementItIsInterceptResend) {
  LineSetup setup;
  setup.n = 1;
  const auto r = epr_attack(setup, plain_bb84_scheme(), 0, 4000, 7);
  EXPECT_EQ(r.epr_used_max, 0u);
  EXPECT_NEAR(r.rate, 0.75, three_sigma(0.75, 4000));
}

TEST(EprAttack, InnerProductBasisResists) {
  LineSetup setup;
  setup.n = 32;
  const auto r = epr_attack(setup, pv::fbb84_scheme(), 1, 4000, 8);
  EXPECT_LE(r.rate, 0.85);
  EXPECT_NEAR(r.rate, 0.75, three_sigma(0.75, 4000));
}

TEST(EprAttack, BudgetIsRespectedAcrossRounds) {
  LineSetup setup;
  setup.n = 1;
  setup.rounds = 4;
  const auto r = epr_attack(setup, plain_bb84_scheme(), 2, 200, 9);
  EXPECT_EQ(r.epr_used_max, 2u);
  // Two teleported rounds always pass; the other two pass w.p. 3/4 each.
  EXPECT_NEAR(r.rate, 0.5625, three_sigma(0.5625, 200));
}

TEST(DenialPrivacy, VerdictRevealsTheZone) {
  pc::CommitScenario sc;
  sc.verifiers = {SpatialPoint{Rational(0)}, SpatialPoint{Rational(12)}};
  for (int i = 0; i < 4; ++i) sc.S.push_back({SpatialPoint{Rational(3 + 2 * i)}, Rational(40)});
  const std::vector<std::size_t> region = {0, 1, 2, 3}, zone = {1, 2};
  const auto d = denial_privacy_attack(sc, region, zone, 40, 24, 10);
  EXPECT_EQ(d.report.successes, 24u);
  EXPECT_EQ(d.in_zone, d.in_zone_rejected);
  EXPECT_EQ(d.out_of_zone, d.out_of_zone_accepted);
  EXPECT_GT(d.in_zone, 0u);
  EXPECT_GT(d.out_of_zone, 0u);
}

TEST(Binding, HonestBaseline) {
  const auto sc = commit_line(1);
  const auto row = honest_binding_baseline(sc, 2, 40, 11);
  for (std::size_t a = 0; a < sc.S.size(); ++a) EXPECT_EQ(row.successes[a], a == 2 ? 40u : 0u) << a;
}

TEST(Binding, InterceptResendCoalition) {
  const auto sc = commit_line(4);
  const std::vector<SpatialPoint> members = {SpatialPoint{Rational(5)}, SpatialPoint{Rational(7)}};
  const auto row = intercept_resend_binding(sc, 2, members, 400, 12);
  const double p = std::pow(0.75, 4);
  const double rate = static_cast<double>(row.successes[2]) / 400.0;
  EXPECT_LE(rate, p + three_sigma(p, 400));
  EXPECT_GE(rate, p - three_sigma(p, 400));  // the strategy is not broken either
  for (std::size_t a = 0; a < sc.S.size(); ++a) {
    if (a != 2) {
      EXPECT_EQ(row.successes[a], 0u) << a;
    }
  }
  EXPECT_THROW(intercept_resend_binding(sc, 2, {SpatialPoint{Rational(6)}}, 1, 1), AttackError);
}

TEST(Binding, EquivocationFindsNothing) {
  auto sc = commit_line(1);
  sc.lambda_com = 8;
  const auto r = equivocation_attack(sc, 1, 1u << 16, 13);
  EXPECT_EQ(r.tries, 1u << 16);
  EXPECT_EQ(r.successes, 0u);
}
