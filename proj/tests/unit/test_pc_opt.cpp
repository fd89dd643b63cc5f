#include <gtest/gtest.h>

#include <set>

#include "zkpos/pc/optimized.hpp"

using namespace zkpos;
using namespace zkpos::pc;

namespace {

SpatialPoint pt(std::initializer_list<int> xs) {
  SpatialPoint p;
  for (int x : xs) p.emplace_back(x);
  return p;
}

OptScenario line(int ticks, Rational delta = 1) {
  OptScenario sc;
  sc.verifiers = {pt({0}), pt({6})};
  sc.ticks = ticks;
  sc.delta = delta;
  return sc;
}

OptScenario plane(int ticks) {
  OptScenario sc;
  sc.verifiers = {pt({0, 0}), pt({8, 0}), pt({0, 8})};
  sc.ticks = ticks;
  return sc;
}

}  // namespace

TEST(Mesh, LineMatchesExhaustiveCrossings) {
  const auto sc = line(10);
  const auto mesh = mesh_points(sc);
  // Oracle: scan the half-unit grid for (L, t) with L = t - s1 and 6 - L = t - s2,
  // s1, s2 tick offsets from t1.
  std::set<std::pair<Rational, Rational>> oracle;
  for (int h = 0; h <= 12; ++h) {
    const Rational L(h, 2);
    for (int m1 = 0; m1 < 10; ++m1) {
      const Rational dt = L + m1;
      const Rational m2 = dt - (6 - L);
      if (m2 >= 0 && m2 < 10 && m2 == Rational(static_cast<int>(m2))) oracle.emplace(L, dt);
    }
  }
  std::set<std::pair<Rational, Rational>> got;
  for (const auto& p : mesh) got.emplace(p.L[0], (p.t - sc.t1()).to_rational());
  EXPECT_EQ(got, oracle);
  std::set<Rational> spots;
  for (const auto& p : mesh) spots.insert(p.L[0]);
  for (int x : {2, 3, 4}) EXPECT_TRUE(spots.count(Rational(x)));
  EXPECT_TRUE(spots.count(Rational(7, 2)));
}

TEST(Mesh, DensityAndHull) {
  for (const auto& sc : {line(12), plane(8)}) {
    const auto coarse = mesh_points(sc);
    auto fine = sc;
    fine.delta = sc.delta / 2;
    fine.ticks = sc.ticks * 2;  // same window
    const auto dense = mesh_points(fine);
    EXPECT_GE(dense.size(), 2 * coarse.size());
    for (const auto& p : dense) {
      EXPECT_TRUE(sim::in_convex_hull(p.L, fine.verifiers));
      for (std::size_t i = 0; i < fine.k(); ++i) {
        const Time a = sim::arrival_time(fine.tick_time(p.ticks[i]), fine.verifiers[i], p.L);
        EXPECT_LE(p.t - a, mesh_tolerance());
        EXPECT_LE(a, p.t);
      }
    }
  }
  auto flat = plane(4);
  flat.verifiers[2] = pt({4, 0});
  EXPECT_THROW(mesh_points(flat), PcError);
}

TEST(Mesh, LineCoverageWithinHalfTick) {
  const auto sc = line(40);
  const auto mesh = mesh_points(sc);
  std::set<Rational> spots;
  for (const auto& p : mesh) spots.insert(p.L[0]);
  for (int q = 0; q <= 60; ++q) {
    const Rational x(q, 10);
    Rational best = 100;
    for (const auto& s : spots) best = std::min(best, Rational(abs(s - x)));
    EXPECT_LE(best, sc.delta / 2);
  }
}

TEST(OptCommit, HonestRevealAndBinding) {
  for (const auto& sc : {line(8), plane(6)}) {
    const auto mesh = mesh_points(sc);
    ASSERT_GE(mesh.size(), 4u);
    for (std::size_t pick : {std::size_t{0}, mesh.size() / 2, mesh.size() - 1}) {
      const auto& target = mesh[pick];
      Opening op;
      const auto run = run_honest_optimized_commit(sc, target, 50 + pick, op);
      EXPECT_EQ(run.causality_violations, 0u);
      const auto res = reveal_optimized(run.rho, target, op);
      EXPECT_TRUE(res.accept) << res.reason;
      ASSERT_EQ(res.accepting.size(), 1u);
      EXPECT_EQ(res.accepting.front(), target);
      const auto& other = mesh[(pick + 1) % mesh.size()];
      EXPECT_FALSE(reveal_optimized(run.rho, other, op).accept);
      auto bad = op;
      bad.sk[3] ^= 1;
      EXPECT_FALSE(reveal_optimized(run.rho, target, bad).accept);
    }
  }
}

TEST(OptCommit, LockstepShapeIsPositionIndependent) {
  const auto sc = plane(6);
  const auto mesh = mesh_points(sc);
  std::optional<std::vector<std::tuple<std::uint16_t, Time, std::uint32_t, std::size_t>>> first;
  for (std::size_t pick : {std::size_t{1}, mesh.size() - 2}) {
    Opening op;
    const auto run = run_honest_optimized_commit(sc, mesh[pick], 9, op, false);
    std::vector<std::tuple<std::uint16_t, Time, std::uint32_t, std::size_t>> shape;
    std::vector<std::size_t> per_verifier(sc.k(), 0);
    for (const auto& e : run.rho.M) {
      shape.emplace_back(e.receiver, e.timestamp, e.label, e.body.size());
      if (e.label == kCommitLabel) continue;
      ++per_verifier[e.receiver];
      EXPECT_EQ(e.timestamp, sc.slot_time(e.label));
    }
    for (auto c : per_verifier) EXPECT_EQ(c, static_cast<std::size_t>(sc.slots()));
    if (first) {
      EXPECT_EQ(shape, *first);
    }
    first = shape;
  }
}

TEST(OptCommit, SerializationRoundTrip) {
  const auto sc = line(6);
  const auto mesh = mesh_points(sc);
  Opening op;
  const auto run = run_honest_optimized_commit(sc, mesh[3], 4, op, false);
  const auto back = OptCommitmentState::parse(run.rho.serialize());
  EXPECT_EQ(back, run.rho);
  EXPECT_TRUE(reveal_optimized(back, mesh[3], op).accept);
  EXPECT_THROW(CommitmentState::parse(run.rho.serialize()), FormatError);
}

TEST(WorkProfile, OptimizedIsFlatAsTheWindowGrows) {
  std::optional<WorkPeak> base;
  for (int ticks : {8, 16, 80}) {
    const auto sc = line(ticks);
    const auto mesh = mesh_points(sc);
    Opening op;
    const auto run = run_honest_optimized_commit(sc, mesh[mesh.size() / 2], 1, op, false);
    const auto prof = per_tick_work_profile(run.ops, sc.k(), sc.t1(), sc.delta_time());
    const auto peak = peak_work(prof);
    if (base) {
      EXPECT_EQ(peak.prover, base->prover);
      EXPECT_EQ(peak.verifier, base->verifier);
    }
    base = peak;
    // Steady state: k sends per tick from the prover.
    std::uint64_t sends_mid = 0;
    const Time mid = sc.slot_time(sc.slots() / 2);
    for (const auto& op_rec : run.ops) {
      if (op_rec.party >= sc.k() && op_rec.kind == sim::OpKind::kSend &&
          (op_rec.time - mid).floor_div(sc.delta_time()) == 0) {
        sends_mid += op_rec.count;
      }
    }
    EXPECT_EQ(sends_mid, sc.k());
  }
}

TEST(WorkProfile, AlgorithmOneGrowsWithS) {
  auto profile_for = [](int size) {
    CommitScenario sc;
    sc.verifiers = {pt({0}), pt({6})};
    for (int i = 0; i < size; ++i) sc.S.push_back({SpatialPoint{Rational(1 + i % 5)}, Rational(20 + i / 5)});
    Opening op;
    const auto run = run_honest_commit(sc, 0, 3, op, {false, {}});
    return peak_work(per_tick_work_profile(run.ops, sc.k(), Time::from_rational(sc.t_init), Time::from_int(1)));
  };
  const auto small = profile_for(5), large = profile_for(50);
  EXPECT_GT(large.prover, 5 * small.prover);
  EXPECT_GT(large.verifier, 5 * small.verifier);
}
