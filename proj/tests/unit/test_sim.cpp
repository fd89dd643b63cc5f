#include <gtest/gtest.h>

#include "zkpos/sim/engine.hpp"
#include "zkpos/sim/geometry.hpp"
#include "zkpos/sim/time.hpp"

using namespace zkpos;
using namespace zkpos::sim;

namespace {

SpatialPoint pt(std::initializer_list<int> xs) {
  SpatialPoint p;
  for (int x : xs) p.emplace_back(x);
  return p;
}

Time T(const char* s) { return Time::from_rational(parse_rational(s)); }

}  // namespace

TEST(Time, ParseAndRoundTrip) {
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_EQ(parse_rational("-3/2"), Rational(-3, 2));
  EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
  EXPECT_EQ(T("5/2").to_rational(), Rational(5, 2));
  EXPECT_EQ(T("-1.5").to_decimal(), "-1.5");
  EXPECT_EQ(T("3").to_decimal(), "3");
  EXPECT_THROW(parse_rational("1/0"), std::exception);
  EXPECT_THROW(parse_rational("abc"), std::exception);
}

TEST(Time, RoundHalfEven) {
  // 1/3 is not dyadic; rounding must land within half an ulp.
  const Time third = T("1/3");
  const Rational err = third.to_rational() - Rational(1, 3);
  EXPECT_LE(abs(err) * (BigInt(1) << Time::kFracBits), Rational(1, 2));
  // Exact tie: half an ulp above zero rounds to zero (even).
  const Rational half_ulp = Rational(1) / Rational(BigInt(1) << (Time::kFracBits + 1));
  EXPECT_EQ(Time::from_rational(half_ulp).raw(), 0);
  EXPECT_EQ(Time::from_rational(3 * half_ulp).raw(), 2);
}

TEST(Time, FloorDiv) {
  EXPECT_EQ(T("7/2").floor_div(T("1")), 3);
  EXPECT_EQ(T("-1/2").floor_div(T("1")), -1);
}

TEST(Geometry, Distance) {
  EXPECT_EQ(distance(pt({0}), pt({6})).value, Time::from_int(6));
  EXPECT_EQ(distance(pt({2, 2}), pt({2, 2})).value, Time::zero());
  const auto d = distance(pt({0, 0}), pt({3, 4}));
  EXPECT_EQ(d.value, Time::from_int(5));
  EXPECT_TRUE(d.exact);
  EXPECT_THROW(distance(pt({0}), pt({0, 1})), GeometryError);
}

TEST(Geometry, IrrationalDistanceIsCorrectlyRounded) {
  const auto d = distance(pt({0, 0}), pt({1, 1}));
  EXPECT_FALSE(d.exact);
  // |d - sqrt(2)| <= ulp/2  <=>  (d - ulp/2)^2 <= 2 <= (d + ulp/2)^2
  const Rational v = d.value.to_rational();
  const Rational h = Time::ulp().to_rational() / 2;
  EXPECT_LE((v - h) * (v - h), Rational(2));
  EXPECT_GE((v + h) * (v + h), Rational(2));
  // Symmetric and memoryless.
  EXPECT_EQ(distance(pt({1, 1}), pt({0, 0})).value, d.value);
}

TEST(Geometry, ArrivalTime) {
  EXPECT_EQ(arrival_time(Time::zero(), pt({0}), pt({6})), Time::from_int(6));
  EXPECT_EQ(arrival_time(Time::from_int(3), pt({0, 0}), pt({3, 4})), Time::from_int(8));
  EXPECT_EQ(arrival_time(T("7/3"), pt({1}), pt({1})), T("7/3"));
}

TEST(Geometry, ConvexHull) {
  const std::vector<SpatialPoint> seg{pt({0}), pt({6})};
  EXPECT_TRUE(in_convex_hull(pt({3}), seg));
  EXPECT_FALSE(in_convex_hull(pt({7}), seg));
  EXPECT_TRUE(in_convex_hull(pt({0}), seg));
  const std::vector<SpatialPoint> tri{pt({0, 0}), pt({3, 0}), pt({0, 3})};
  EXPECT_TRUE(in_convex_hull(pt({1, 1}), tri));
  EXPECT_TRUE(in_convex_hull(pt({3, 0}), tri));
  EXPECT_FALSE(in_convex_hull(pt({2, 2}), tri));
  // Degenerate vertex set (collinear) still decides exactly.
  const std::vector<SpatialPoint> line{pt({0, 0}), pt({2, 2}), pt({4, 4})};
  EXPECT_TRUE(in_convex_hull(pt({3, 3}), line));
  EXPECT_FALSE(in_convex_hull(pt({3, 2}), line));
}

// Independent oracle: Cramer's rule barycentric coordinates for a triangle.
TEST(Geometry, ConvexHullMatchesCramerOracle) {
  const std::vector<SpatialPoint> tri{pt({-2, -1}), pt({5, 0}), pt({1, 4})};
  auto det = [](const Rational& a, const Rational& b, const Rational& c, const Rational& d) { return a * d - b * c; };
  const Rational D = det(tri[1][0] - tri[0][0], tri[2][0] - tri[0][0], tri[1][1] - tri[0][1], tri[2][1] - tri[0][1]);
  for (int x2 = -8; x2 <= 12; ++x2) {
    for (int y2 = -6; y2 <= 10; ++y2) {
      const SpatialPoint p{Rational(x2, 2), Rational(y2, 2)};
      const Rational px = p[0] - tri[0][0], py = p[1] - tri[0][1];
      const Rational l1 = det(px, tri[2][0] - tri[0][0], py, tri[2][1] - tri[0][1]) / D;
      const Rational l2 = det(tri[1][0] - tri[0][0], px, tri[1][1] - tri[0][1], py) / D;
      const bool inside = l1 >= 0 && l2 >= 0 && l1 + l2 <= 1;
      EXPECT_EQ(in_convex_hull(p, tri), inside) << x2 << "/2, " << y2 << "/2";
    }
  }
}

TEST(Geometry, EnclosingSimplex1D) {
  std::vector<SpacetimePoint> S{{pt({2}), 0}, {pt({4}), 0}};
  EXPECT_EQ(enclosing_simplex(S, 1), (std::vector<SpatialPoint>{pt({1}), pt({5})}));
  std::vector<SpacetimePoint> one{{pt({3}), 0}};
  EXPECT_EQ(enclosing_simplex(one, 1), (std::vector<SpatialPoint>{pt({2}), pt({4})}));
}

TEST(Geometry, EnclosingSimplex2DCoversExpandedBox) {
  std::vector<SpacetimePoint> S{{pt({0, 0}), 0}, {pt({1, 1}), 0}, {pt({1, 0}), 0}};
  const auto X = enclosing_simplex(S, 1);
  ASSERT_EQ(X.size(), 3u);
  EXPECT_TRUE(affinely_independent(X));
  for (const auto& c : {pt({-1, -1}), pt({-1, 2}), pt({2, -1}), pt({2, 2})}) EXPECT_TRUE(in_convex_hull(c, X));
}

TEST(Geometry, AffineIndependence) {
  EXPECT_TRUE(affinely_independent(std::vector<SpatialPoint>{pt({0}), pt({6})}));
  EXPECT_FALSE(affinely_independent(std::vector<SpatialPoint>{pt({2}), pt({2})}));
  EXPECT_FALSE(affinely_independent(std::vector<SpatialPoint>{pt({0, 0}), pt({1, 1}), pt({2, 2})}));
}

namespace {

class Recorder : public Party {
 public:
  std::vector<std::pair<Time, PartyId>> got;
  void on_receive(Context& ctx, Delivery& d) override {
    got.emplace_back(ctx.now(), d.from);
    for (auto q : d.qubits) ctx.arena().discard(q, ctx.rng());
  }
};

class OneShot : public Party {
 public:
  explicit OneShot(Signal s) : s_(std::move(s)) {}
  void on_start(Context& ctx) override { ctx.send(s_); }

 private:
  Signal s_;
};

}  // namespace

TEST(Engine, BroadcastReachesEveryone) {
  Engine e;
  e.add_party(pt({0}), std::make_unique<OneShot>(Signal::broadcast(Time::zero(), {1, 2})));
  auto& far = e.add(pt({6}), std::make_unique<Recorder>());
  e.run_until(Time::from_int(10));
  ASSERT_EQ(far.got.size(), 1u);
  EXPECT_EQ(far.got[0].first, Time::from_int(6));
  // The sender hears its own broadcast at t = 0.
  int deliveries = 0;
  for (const auto& ev : e.log()) deliveries += ev.kind == EventKind::kDeliver;
  EXPECT_EQ(deliveries, 2);
}

TEST(Engine, DirectionalTargetsExactPoint) {
  Engine e;
  e.add_party(pt({0}), std::make_unique<OneShot>(Signal::directional(Time::from_int(1), pt({3}), {7})));
  auto& off = e.add(pt({4}), std::make_unique<Recorder>());
  auto& on = e.add(pt({3}), std::make_unique<Recorder>());
  e.run_until(Time::from_int(20));
  EXPECT_TRUE(off.got.empty());
  ASSERT_EQ(on.got.size(), 1u);
  EXPECT_EQ(on.got[0].first, Time::from_int(4));
}

TEST(Engine, RejectsSendIntoThePast) {
  EngineOptions opt;
  opt.start_time = Time::from_int(5);
  Engine e(opt);
  e.add_party(pt({0}), std::make_unique<Recorder>());
  EXPECT_THROW(e.schedule_send(0, Signal::broadcast(Time::from_int(4), {})), SimError);
}

TEST(Engine, EmptyScenarioHasEmptyLog) {
  Engine e;
  EXPECT_TRUE(e.run_until(Time::from_int(100)).empty());
  EXPECT_EQ(to_ndjson(e.log()), "");
}

TEST(Engine, DeterministicOrderingAndNdjson) {
  auto run = [] {
    EngineOptions opt;
    opt.seed = 42;
    Engine e(opt);
    e.add_party(pt({0}), std::make_unique<OneShot>(Signal::broadcast(Time::zero(), {0xAB}, "x")));
    e.add(pt({2}), std::make_unique<Recorder>());
    e.add(pt({-2}), std::make_unique<Recorder>());
    e.run_until(Time::from_int(5));
    EXPECT_TRUE(audit_causality(e.log(), e).empty());
    return to_ndjson(e.log());
  };
  const std::string a = run();
  EXPECT_EQ(a, run());
  // send, self-delivery, then the two equidistant receivers in id order.
  EXPECT_NE(a.find("\"kind\":\"send\""), std::string::npos);
  const auto p1 = a.find("\"party\":1");
  const auto p2 = a.find("\"party\":2");
  ASSERT_NE(p1, std::string::npos);
  EXPECT_LT(p1, p2);
  EXPECT_NE(a.find("\"payload_hex\":\"ab\""), std::string::npos);
}

TEST(Engine, QubitGoesToFirstCoLocatedReceiverOnly) {
  struct QSender : Party {
    void on_start(Context& ctx) override {
      auto s = Signal::directional(Time::zero(), SpatialPoint{Rational(3)}, {});
      s.qubits.push_back(ctx.arena().prepare_bb84(1, 0));
      ctx.send(std::move(s));
    }
  };
  struct Keeper : Party {
    std::size_t qubits = 0;
    void on_receive(Context& ctx, Delivery& d) override {
      qubits += d.qubits.size();
      for (auto q : d.qubits) EXPECT_EQ(ctx.arena().measure(q, 0, ctx.rng()), 1);
    }
  };
  Engine e;
  e.add_party(pt({0}), std::make_unique<QSender>());
  auto& a = e.add(pt({3}), std::make_unique<Keeper>());
  auto& b = e.add(pt({3}), std::make_unique<Keeper>());
  e.run_until(Time::from_int(5));
  EXPECT_EQ(a.qubits + b.qubits, 1u);
  EXPECT_EQ(a.qubits, 1u);
  EXPECT_EQ(e.arena().live_count(), 0u);
}

TEST(Engine, CausalityAuditFlagsTamperedLog) {
  Engine e;
  e.add_party(pt({0}), std::make_unique<OneShot>(Signal::broadcast(Time::zero(), {})));
  e.add(pt({6}), std::make_unique<Recorder>());
  auto log = e.run_until(Time::from_int(10));
  ASSERT_TRUE(audit_causality(log, e).empty());
  for (auto& ev : log) {
    if (ev.kind == EventKind::kDeliver && ev.party == 1) ev.time = ev.time - Time::ulp();
  }
  EXPECT_EQ(audit_causality(log, e).size(), 1u);
}

TEST(Geometry, OnRay) {
  EXPECT_TRUE(on_ray(pt({1}), pt({0}), pt({3})));
  EXPECT_TRUE(on_ray(pt({5}), pt({0}), pt({3})));
  EXPECT_FALSE(on_ray(pt({-1}), pt({0}), pt({3})));
  EXPECT_TRUE(on_ray(pt({2, 2}), pt({0, 0}), pt({1, 1})));
  EXPECT_FALSE(on_ray(pt({2, 3}), pt({0, 0}), pt({1, 1})));
  EXPECT_TRUE(on_ray(pt({0, 4}), pt({0, 0}), pt({0, 1})));
  EXPECT_FALSE(on_ray(pt({1, 4}), pt({0, 0}), pt({0, 1})));
}

TEST(Engine, InterceptorsOnTheRayGetCopiesAndTheNearestGetsTheQubit) {
  struct QSender : Party {
    void on_start(Context& ctx) override {
      auto s = Signal::directional(Time::zero(), SpatialPoint{Rational(3)}, {9});
      s.qubits.push_back(ctx.arena().prepare_bb84(1, 0));
      ctx.send(std::move(s));
    }
  };
  struct Keeper : Party {
    std::size_t qubits = 0;
    std::vector<Time> at;
    void on_receive(Context& ctx, Delivery& d) override {
      at.push_back(d.time);
      qubits += d.qubits.size();
      for (auto q : d.qubits) EXPECT_EQ(ctx.arena().measure(q, 0, ctx.rng()), 1);
    }
  };
  Engine e;
  e.add_party(pt({0}), std::make_unique<QSender>());
  auto& target = e.add(pt({3}), std::make_unique<Keeper>());
  auto& beyond = e.add(pt({5}), std::make_unique<Keeper>(), true);
  auto& near = e.add(pt({1}), std::make_unique<Keeper>(), true);
  auto& behind = e.add(pt({-1}), std::make_unique<Keeper>(), true);
  auto& passive = e.add(pt({2}), std::make_unique<Keeper>());
  e.run_until(Time::from_int(10));
  EXPECT_EQ(target.at, std::vector<Time>{Time::from_int(3)});
  EXPECT_EQ(near.at, std::vector<Time>{Time::from_int(1)});
  EXPECT_EQ(beyond.at, std::vector<Time>{Time::from_int(5)});
  EXPECT_TRUE(behind.at.empty());
  EXPECT_TRUE(passive.at.empty());
  EXPECT_EQ(near.qubits, 1u);
  EXPECT_EQ(target.qubits + beyond.qubits, 0u);
  EXPECT_TRUE(audit_causality(e.log(), e).empty());
}
