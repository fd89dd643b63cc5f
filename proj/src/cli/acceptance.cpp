#include "zkpos/cli/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>

#include "zkpos/attacks/attacks.hpp"
#include "zkpos/cli/commands.hpp"
#include "zkpos/crypto/zk.hpp"
#include "zkpos/pc/optimized.hpp"
#include "zkpos/zkpv/zkpv.hpp"

namespace zkpos::cli {

namespace {

using sim::Rational;
using sim::SpatialPoint;
using sim::Time;

struct Outcome {
  bool ok = false;
  std::string detail;
};

SpatialPoint pt(std::initializer_list<int> xs) {
  SpatialPoint p;
  for (int x : xs) p.emplace_back(x);
  return p;
}

double sigma(double p, double n) { return std::sqrt(p * (1 - p) / n); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Computational-basis measurement success over the four BB84 states, read
// off the prepared state vectors.
double intercept_resend_oracle() {
  qsim::QuantumArena arena;
  Rng rng(1);
  double total = 0;
  for (int theta = 0; theta < 2; ++theta) {
    for (int b = 0; b < 2; ++b) {
      const auto q = arena.prepare_bb84(b, theta);
      total += std::norm(arena.snapshot(q).amplitudes[static_cast<std::size_t>(b)]);
      arena.discard(q, rng);
    }
  }
  return total / 4;
}

pc::CommitScenario line_points(int count, int x0, Rational t) {
  pc::CommitScenario sc;
  sc.verifiers = {pt({0}), pt({12})};
  for (int i = 0; i < count; ++i) sc.S.push_back({pt({x0 + i}), t});
  return sc;
}

Outcome c1_completeness() {
  const pv::PvInstance line{{pt({0}), pt({6})}, {pt({3}), Rational(10)}, 8, 20, 0};
  const pv::PvInstance plane{{pt({0, 0}), pt({9, 0}), pt({0, 9})}, {pt({2, 3}), Rational(20)}, 8, 20, 0};
  std::string detail;
  bool ok = true;
  for (const auto* inst : {&line, &plane}) {
    std::uint64_t accepted = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      std::vector<pv::PartySpec> p;
      p.push_back({inst->target.L, std::make_unique<pv::HonestProver>(inst->k(), pv::fbb84_scheme())});
      accepted += pv::run_singleton_pv(*inst, seed, std::move(p), {false, nullptr}).accept;
    }
    ok = ok && accepted == 1000;
    detail += "d=" + std::to_string(inst->dimension()) + ": " + std::to_string(accepted) + "/1000  ";
  }
  return {ok, detail + "(r=20)"};
}

Outcome c2_intercept_resend() {
  const double oracle = intercept_resend_oracle();
  attacks::LineSetup setup;
  setup.rounds = 20;
  const auto r = attacks::intercept_resend_attack(setup, 10000, 2);
  const double per_round = r.round_rate();
  const bool ok = std::abs(oracle - 0.75) < 1e-12 && std::abs(per_round - 0.75) <= 0.02 && r.rate <= 0.01;
  return {ok, "oracle " + fmt("%.4f", oracle) + ", per-round " + fmt("%.4f", per_round) + " over " +
                  std::to_string(r.rounds) + " rounds, r=20 acceptance " + std::to_string(r.successes) + "/" +
                  std::to_string(r.trials)};
}

Outcome c3_epr() {
  attacks::LineSetup plain;
  plain.n = 1;
  const auto a = attacks::epr_attack(plain, attacks::plain_bb84_scheme(), 1, 10000, 3);
  attacks::LineSetup inner;
  inner.n = 32;
  const auto b = attacks::epr_attack(inner, pv::fbb84_scheme(), 1, 10000, 4);
  const bool ok = a.successes == 10000 && a.epr_used_max <= 1 && b.round_rate() <= 0.85 && b.epr_used_max <= 1;
  return {ok, "plain BB84 " + std::to_string(a.successes) + "/10000 (EPR used " + std::to_string(a.epr_used_max) +
                  " <= E=1), f-BB84 n=32 per-round " + fmt("%.4f", b.round_rate())};
}

Outcome c4_classical_copy() {
  const attacks::LineSetup setup;
  // Timing: each member hears its partner and still reaches its verifier.
  const Rational t = setup.instance().target.t;
  const Rational a = setup.spoofers[0], b = setup.spoofers[1];
  const Rational left = t - setup.L + a, right = t - (setup.v1 - setup.L) + (setup.v1 - b);
  const Rational know = (left > right ? left : right) + (b - a);
  const bool feasible = know + a <= t + setup.L && know + (setup.v1 - b) <= t + (setup.v1 - setup.L);
  const auto r = attacks::classical_copy_attack(setup, 1000, 5);
  attacks::LineSetup single;
  single.spoofers = {Rational(1)};
  const auto control = attacks::classical_copy_attack(single, 200, 6);
  return {feasible && r.successes == 1000 && control.successes == 0,
          "straddling pair " + std::to_string(r.successes) + "/1000, timing oracle " + (feasible ? "feasible" : "infeasible") +
              ", single spoofer " + std::to_string(control.successes) + "/200"};
}

Outcome c5_commit_completeness() {
  const auto sc = line_points(9, 2, Rational(40));
  pc::CommitOptions quiet;
  quiet.record_log = false;
  std::uint64_t accepted = 0, runs = 0;
  for (std::size_t alpha = 0; alpha < sc.S.size(); ++alpha) {
    for (std::uint64_t i = 0; i < 100; ++i, ++runs) {
      pc::Opening op;
      const auto run = pc::run_honest_commit(sc, alpha, derive_seed(alpha, i), op, quiet);
      accepted += pc::reveal_phase(run.rho, {alpha, op}).accept;
    }
  }
  return {accepted == runs, std::to_string(accepted) + "/" + std::to_string(runs) + " over |S|=9"};
}

Outcome c6_binding() {
  const auto sc = line_points(9, 2, Rational(40));
  pc::CommitOptions quiet;
  quiet.record_log = false;
  std::uint64_t attempts = 0, rejected = 0;
  for (std::uint64_t i = 0; attempts < 1000; ++i) {
    const std::size_t alpha = i % sc.S.size();
    pc::Opening op;
    const auto run = pc::run_honest_commit(sc, alpha, 7000 + i, op, quiet);
    for (std::size_t other = 0; other < sc.S.size() && attempts < 1000; ++other) {
      if (other == alpha) continue;
      ++attempts;
      rejected += !pc::reveal_phase(run.rho, {other, op}).accept;
    }
  }
  auto toy = line_points(5, 2, Rational(40));
  toy.lambda_com = 8;
  const auto eq = attacks::equivocation_attack(toy, 1, std::uint64_t{1} << 20, 8);
  return {rejected == attempts && eq.successes == 0,
          "other-point reveals rejected " + std::to_string(rejected) + "/" + std::to_string(attempts) +
              "; equivocation 2^20 tries: " + std::to_string(eq.openings) + " c-consistent openings, " +
              std::to_string(eq.successes) + " accepted"};
}

Outcome c7_hiding() {
  pc::CommitScenario sc;
  sc.verifiers = {pt({0}), pt({12})};
  for (int i = 0; i < 5; ++i) sc.S.push_back({pt({2 + 2 * i}), Rational(30 + i)});
  const Time tau = sc.t_final();
  pc::CommitOptions quiet;
  quiet.record_log = false;
  std::vector<pc::VerifierView> real, sim, first, second;
  Rng pp_rng(9);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const std::size_t alpha = i % sc.S.size();
    pc::Opening op;
    const auto run = pc::run_honest_commit(sc, alpha, 10000 + i, op, quiet);
    real.push_back(pc::verifier_view(run.rho, tau));
    if (alpha == 0) first.push_back(real.back());
    if (alpha == 1) second.push_back(real.back());
    const auto pp = crypto::com_setup(sc.lambda_com, static_cast<std::size_t>(sc.kappa), pp_rng);
    sim.push_back(pc::hiding_simulator(pp, sc, tau, 20000 + i));
  }
  const auto shape = pc::view_shape(real.front());
  bool shapes = true;
  for (const auto* set : {&real, &sim}) {
    for (const auto& v : *set) shapes = shapes && pc::view_shape(v) == shape;
  }
  const auto vs_sim = zkpv::distinguisher_suite(real, sim);
  const auto across = zkpv::distinguisher_suite(first, second);
  double min_p = 1;
  for (const auto* rep : {&vs_sim, &across}) {
    for (const auto& t : rep->tests) min_p = std::min(min_p, t.p_value);
  }
  return {shapes && vs_sim.pass && across.pass,
          std::string("shapes ") + (shapes ? "identical" : "DIFFER") + " over 1000 real + 1000 simulated views; battery " +
              (vs_sim.pass ? "pass" : "fail") + " (real vs sim), " + (across.pass ? "pass" : "fail") +
              " (alpha 0 vs 1), min p " + fmt("%.3g", min_p) + ", per-test level " + fmt("%.2g", vs_sim.threshold)};
}

// Canonical cheat on the constant-0 circuit: acceptances out of n.
std::uint64_t cheat_acceptances(int reps, std::uint64_t n, std::uint64_t seed) {
  crypto::CircuitBuilder cb(1);
  const crypto::Circuit c = cb.finish(cb.constant(false));
  Rng setup(seed);
  const auto pp = crypto::zk_setup(crypto::kDefaultLambdaCom, setup);
  return kernels::run_trials(n, seed,
                             [&](Rng& rng, std::uint64_t) {
                               const auto ch = crypto::zk_challenges(reps, rng);
                               const auto proof = crypto::zk_prove(c, Bits{0}, pp, ch, rng.u64(),
                                                                   crypto::ZkCheat::kFlipOutputShare);
                               return crypto::zk_verify(c, pp, proof, ch);
                             })
      .successes;
}

double cheat_bound(int reps, double n) {
  const double p = std::pow(2.0 / 3.0, reps);
  return p + 3 * sigma(p, n);
}

Outcome c8_zk_soundness() {
  const std::uint64_t n = 100000;
  const auto at8 = cheat_acceptances(8, n, 11);
  const auto at40 = cheat_acceptances(40, n, 12);
  const double rate8 = static_cast<double>(at8) / static_cast<double>(n);
  return {rate8 <= cheat_bound(8, static_cast<double>(n)) && at40 == 0,
          "reps=8: " + fmt("%.4f", rate8) + " (bound " + fmt("%.4f", cheat_bound(8, static_cast<double>(n))) +
              "), reps=40: " + std::to_string(at40) + "/100000"};
}

Outcome c9_zkpv() {
  const auto sc = line_points(3, 2, Rational(40));
  const std::vector<std::size_t> region = {0, 1};
  zkpv::ZkpvOptions honest_opt;  // reps = 40
  std::uint64_t honest = 0, honest_runs = 0;
  bool equivalent = true;
  for (std::size_t alpha : region) {
    for (std::uint64_t s = 0; s < 10; ++s, ++honest_runs) {
      const auto v = zkpv::zk_position_verify(sc, region, alpha, 100 + s, honest_opt);
      honest += v.accept;
      const auto st = zkpv::compile_reveal_circuit(v.rho, region);
      equivalent = equivalent && v.accept == crypto::zk_verify(st.circuit, v.zk_pp, v.proof, v.challenges);
    }
  }
  zkpv::ZkpvOptions cheat_opt;
  cheat_opt.reps = 8;
  const auto outside = kernels::run_trials(1000, 13, [&](Rng& rng, std::uint64_t) {
    return zkpv::zk_position_verify(sc, region, 2, rng.u64(), cheat_opt).accept;
  });
  const double bound = cheat_bound(8, 1000);

  const Time tau = sc.t_final() + Time::from_int(1);
  Rng pp_rng(14);
  std::vector<zkpv::ZkpvView> real, sim;
  for (std::uint64_t i = 0; i < 100; ++i) {
    real.push_back(zkpv::real_view(zkpv::zk_position_verify(sc, region, i % 2, 3000 + i, cheat_opt), tau));
    const auto pp = crypto::com_setup(sc.lambda_com, static_cast<std::size_t>(sc.kappa), pp_rng);
    sim.push_back(zkpv::zkpv_simulator(pp, sc, region, cheat_opt.reps, tau, 4000 + i));
  }
  const auto suite = zkpv::distinguisher_suite(real, sim);
  return {honest == honest_runs && equivalent && outside.rate() <= bound && suite.structural_equal && suite.pass,
          "in R " + std::to_string(honest) + "/" + std::to_string(honest_runs) + " (reps=40), S\\R " +
              fmt("%.4f", outside.rate()) + " over 1000 (bound " + fmt("%.4f", bound) + ", reps=8), simulator battery " +
              (suite.pass ? "pass" : "fail")};
}

Outcome c10_per_tick_work() {
  auto opt_line = [](int ticks) {
    pc::OptScenario sc;
    sc.verifiers = {pt({0}), pt({6})};
    sc.ticks = ticks;
    return sc;
  };
  auto peak_opt = [&](int ticks, std::size_t& mesh_size) {
    const auto sc = opt_line(ticks);
    const auto mesh = pc::mesh_points(sc);
    mesh_size = mesh.size();
    pc::Opening op;
    const auto run = pc::run_honest_optimized_commit(sc, mesh[mesh.size() / 2], 1, op, false);
    return pc::peak_work(pc::per_tick_work_profile(run.ops, sc.k(), sc.t1(), sc.delta_time()));
  };
  std::size_t small_mesh = 0, large_mesh = 0;
  const auto small = peak_opt(8, small_mesh), large = peak_opt(80, large_mesh);
  const bool flat = small.prover == large.prover && small.verifier == large.verifier;

  auto peak_alg1 = [](int size) {
    pc::CommitScenario sc;
    sc.verifiers = {pt({0}), pt({6})};
    for (int i = 0; i < size; ++i) sc.S.push_back({SpatialPoint{Rational(1 + i % 5)}, Rational(20 + i / 5)});
    pc::Opening op;
    pc::CommitOptions quiet;
    quiet.record_log = false;
    const auto run = pc::run_honest_commit(sc, 0, 3, op, quiet);
    return pc::peak_work(pc::per_tick_work_profile(run.ops, sc.k(), Time::from_rational(sc.t_init), Time::from_int(1)));
  };
  const double growth_ratio = static_cast<double>(large_mesh) / static_cast<double>(small_mesh);
  const int base = static_cast<int>(small_mesh), grown = static_cast<int>(large_mesh);
  const auto a_small = peak_alg1(base), a_large = peak_alg1(grown);
  const bool grows = a_large.prover >= 5 * a_small.prover && a_large.verifier >= 5 * a_small.verifier;
  return {flat && grows && growth_ratio >= 10,
          "mesh " + std::to_string(small_mesh) + " -> " + std::to_string(large_mesh) + " points; optimized peak prover " +
              std::to_string(small.prover) + " -> " + std::to_string(large.prover) + ", verifier " +
              std::to_string(small.verifier) + " -> " + std::to_string(large.verifier) + "; basic scheme with |S| " +
              std::to_string(base) + " -> " + std::to_string(grown) + ": prover " + std::to_string(a_small.prover) +
              " -> " + std::to_string(a_large.prover) + ", verifier " + std::to_string(a_small.verifier) + " -> " +
              std::to_string(a_large.verifier)};
}

Outcome c11_denial() {
  pc::CommitScenario sc;
  sc.verifiers = {pt({0}), pt({12})};
  for (int i = 0; i < 4; ++i) sc.S.push_back({pt({3 + 2 * i}), Rational(40)});
  const std::vector<std::size_t> region = {0, 1, 2, 3}, zone = {1, 2};
  const auto d = attacks::denial_privacy_attack(sc, region, zone, 40, 1000, 15);
  return {d.report.successes == 1000,
          "accuracy " + std::to_string(d.report.successes) + "/1000 (in zone rejected " + std::to_string(d.in_zone_rejected) +
              "/" + std::to_string(d.in_zone) + ", outside accepted " + std::to_string(d.out_of_zone_accepted) + "/" +
              std::to_string(d.out_of_zone) + ")"};
}

// Second route for causality: recompute every arrival from the positions.
std::size_t replay_causality(const RunArtifacts& a) {
  std::map<std::uint64_t, const sim::Event*> sends;
  for (const auto& e : a.log) {
    if (e.kind == sim::EventKind::kSend) sends[e.seq] = &e;
  }
  std::size_t bad = 0;
  for (const auto& e : a.log) {
    if (e.kind != sim::EventKind::kDeliver) continue;
    const auto it = sends.find(e.signal);
    if (it == sends.end() || e.from >= a.parties.size() || e.party >= a.parties.size()) {
      ++bad;
      continue;
    }
    const Time expect = sim::arrival_time(it->second->time, a.parties[e.from].position, a.parties[e.party].position);
    bad += e.time != expect;
  }
  return bad;
}

Outcome c12_determinism(const std::string& dir) {
  namespace fs = std::filesystem;
  if (dir.empty() || !fs::is_directory(dir)) return {false, "scenario directory '" + dir + "' not found"};
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) return {false, "no scenarios in " + dir};
  std::size_t identical = 0, deliveries = 0, violations = 0;
  std::string failures;
  for (const auto& f : files) {
    const auto cfg = load_config(f.string());
    const auto a = run_scenario(cfg), b = run_scenario(cfg);
    const bool same = sim::to_ndjson(a.log) == sim::to_ndjson(b.log) && a.verdict == b.verdict &&
                      spacetime_svg(a.log, a.parties) == spacetime_svg(b.log, b.parties);
    identical += same;
    if (!same) failures += " " + f.filename().string();
    const std::size_t v = a.causality_violations + replay_causality(a);
    violations += v;
    if (v) failures += " " + f.filename().string() + "(causality)";
    deliveries += static_cast<std::size_t>(
        std::count_if(a.log.begin(), a.log.end(), [](const sim::Event& e) { return e.kind == sim::EventKind::kDeliver; }));
  }
  return {identical == files.size() && violations == 0 && deliveries > 0,
          std::to_string(identical) + "/" + std::to_string(files.size()) + " scenarios byte-identical, " +
              std::to_string(deliveries) + " deliveries audited, " + std::to_string(violations) + " violations" +
              (failures.empty() ? "" : "; failing:" + failures)};
}

struct Criterion {
  int id;
  const char* name;
  double budget;
  std::function<Outcome(const AcceptanceOptions&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {1, "f-BB84 completeness", 10, [](const auto&) { return c1_completeness(); }},
      {2, "intercept-resend bound", 30, [](const auto&) { return c2_intercept_resend(); }},
      {3, "EPR attack on plain BB84", 60, [](const auto&) { return c3_epr(); }},
      {4, "classical copy attack", 10, [](const auto&) { return c4_classical_copy(); }},
      {5, "commitment completeness", 60, [](const auto&) { return c5_commit_completeness(); }},
      {6, "position binding", 300, [](const auto&) { return c6_binding(); }},
      {7, "hiding surrogate", 120, [](const auto&) { return c7_hiding(); }},
      {8, "ZK soundness at measurable reps", 600, [](const auto&) { return c8_zk_soundness(); }},
      {9, "ZKPV end-to-end", 600, [](const auto&) { return c9_zkpv(); }},
      {10, "optimized per-tick work", 120, [](const auto&) { return c10_per_tick_work(); }},
      {11, "denial privacy attack", 120, [](const auto&) { return c11_denial(); }},
      {12, "determinism and causality audit", 60, [](const AcceptanceOptions& o) { return c12_determinism(o.scenario_dir); }},
  };
  return list;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (const auto& c : criteria()) {
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), c.id) == options.only.end()) continue;
    CriterionResult r;
    r.id = c.id;
    r.name = c.name;
    r.budget_seconds = c.budget;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run(options);
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.within_budget = r.seconds < r.budget_seconds;
    r.pass = o.ok && r.within_budget;
    r.detail = o.detail + (r.within_budget ? "" : "; over the time budget");
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  char head[160];
  std::snprintf(head, sizeof head, "%s  %2d  %-32s (%.1f s / %.0f s)  ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.seconds, r.budget_seconds);
  return head + r.detail;
}

}  // namespace zkpos::cli
