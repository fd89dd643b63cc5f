#include "zkpos/cli/commands.hpp"

#include <fstream>
#include <sstream>

#include "zkpos/zkpv/zkpv.hpp"

namespace zkpos::cli {

using nlohmann::ordered_json;
using sim::Time;

namespace {

std::vector<SvgParty> party_list(const std::vector<SpatialPoint>& verifiers, const std::optional<SpatialPoint>& prover) {
  std::vector<SvgParty> out;
  for (std::size_t i = 0; i < verifiers.size(); ++i) out.push_back({"V" + std::to_string(i + 1), verifiers[i]});
  if (prover) out.push_back({"P", *prover});
  return out;
}

std::string profile_csv(std::span<const pc::TickWork> profile) {
  std::string out = "tick,prover_ops,verifier_ops\n";
  for (const auto& w : profile) {
    out += std::to_string(w.tick) + "," + std::to_string(w.prover_ops) + "," + std::to_string(w.verifier_ops) + "\n";
  }
  return out;
}

ordered_json point_json(const SpatialPoint& p) {
  ordered_json a = ordered_json::array();
  for (const auto& x : p) a.push_back(sim::rational_to_string(x));
  return a;
}

}  // namespace

RunArtifacts run_pv(const ScenarioConfig& cfg) {
  const auto inst = cfg.pv_instance();
  inst.validate();
  std::vector<pv::PartySpec> provers;
  if (cfg.prover) provers.push_back({inst.target.L, std::make_unique<pv::HonestProver>(inst.k(), pv::fbb84_scheme())});
  const auto out = pv::run_singleton_pv(inst, cfg.seed, std::move(provers));
  RunArtifacts a;
  a.accept = out.accept;
  a.log = out.log;
  a.causality_violations = out.causality_violations;
  a.parties = party_list(inst.verifiers, cfg.prover ? std::optional(inst.target.L) : std::nullopt);
  a.verdict = {{"protocol", "pv"},
               {"accept", out.accept},
               {"rounds", inst.rounds},
               {"rounds_passed", std::count(out.round_ok.begin(), out.round_ok.end(), 1)},
               {"causality_violations", out.causality_violations},
               {"seed", cfg.seed}};
  return a;
}

CommitArtifacts run_pc_commit(const ScenarioConfig& cfg) {
  const auto sc = cfg.commit_scenario();
  sc.validate();
  CommitArtifacts c;
  pc::CommitRun run;
  if (cfg.prover) {
    pc::Opening op;
    run = pc::run_honest_commit(sc, *cfg.prover, cfg.seed, op);
    c.opening = op;
  } else {
    run = pc::run_commit(sc, cfg.seed, {});
  }
  c.rho = run.rho;
  const auto commit_entry = std::find_if(run.rho.M.begin(), run.rho.M.end(),
                                         [](const pc::TranscriptEntry& e) { return e.label == pc::kCommitLabel; });
  auto& a = c.run;
  a.accept = commit_entry != run.rho.M.end();
  a.log = std::move(run.log);
  a.causality_violations = run.causality_violations;
  a.parties = party_list(sc.verifiers, cfg.prover ? std::optional(sc.S[*cfg.prover].L) : std::nullopt);
  a.profile_csv = profile_csv(
      pc::per_tick_work_profile(run.ops, sc.k(), Time::from_rational(sc.t_init), Time::from_int(1)));
  a.verdict = {{"protocol", "pc"},
               {"phase", "commit"},
               {"commitment_delivered", a.accept},
               {"entries", run.rho.M.size()},
               {"t1", sc.t1().to_decimal()},
               {"t_final", sc.t_final().to_decimal()},
               {"causality_violations", a.causality_violations},
               {"seed", cfg.seed}};
  return c;
}

RunArtifacts run_pc_reveal(const pc::CommitmentState& rho, std::size_t alpha, const pc::Opening& opening) {
  const auto res = pc::reveal_phase(rho, {alpha, opening});
  RunArtifacts a;
  a.accept = res.accept;
  a.verdict = {{"protocol", "pc"}, {"phase", "reveal"}, {"alpha", alpha}, {"accept", res.accept},
               {"accepting", res.accepting}, {"reason", res.reason}};
  return a;
}

RunArtifacts run_pcopt(const ScenarioConfig& cfg) {
  const auto sc = cfg.opt_scenario();
  sc.validate();
  const auto mesh = pc::mesh_points(sc);
  if (mesh.empty()) throw ConfigError("/params", "the optimized scheme has no mesh points in this window");
  const std::size_t target = cfg.params.mesh_target.value_or(mesh.size() / 2);
  if (target >= mesh.size()) {
    throw ConfigError("/params/mesh_target", "only " + std::to_string(mesh.size()) + " mesh points");
  }
  pc::Opening op;
  auto run = pc::run_honest_optimized_commit(sc, mesh[target], cfg.seed, op);
  const auto res = pc::reveal_optimized(run.rho, mesh[target], op);
  const auto prof = pc::per_tick_work_profile(run.ops, sc.k(), sc.t1(), sc.delta_time());
  const auto peak = pc::peak_work(prof);
  RunArtifacts a;
  a.accept = res.accept;
  a.log = std::move(run.log);
  a.causality_violations = run.causality_violations;
  a.parties = party_list(sc.verifiers, mesh[target].L);
  a.profile_csv = profile_csv(prof);
  a.verdict = {{"protocol", "pc-opt"},
               {"accept", res.accept},
               {"mesh_points", mesh.size()},
               {"target", target},
               {"target_point", {{"x", point_json(mesh[target].L)}, {"t", mesh[target].t.to_decimal()}}},
               {"reason", res.reason},
               {"peak_prover_ops", peak.prover},
               {"peak_verifier_ops", peak.verifier},
               {"causality_violations", a.causality_violations},
               {"seed", cfg.seed}};
  return a;
}

RunArtifacts run_zkpv(const ScenarioConfig& cfg) {
  const auto sc = cfg.commit_scenario();
  sc.validate();
  if (cfg.R.empty()) throw ConfigError("/R", "zkpv needs a non-empty region R");
  const auto region = cfg.region_indices();
  zkpv::ZkpvOptions opt;
  opt.reps = cfg.params.reps;
  opt.record_log = true;
  const auto v = zkpv::zk_position_verify(sc, region, cfg.prover, cfg.seed, opt);
  RunArtifacts a;
  a.accept = v.accept;
  a.log = v.log;
  a.parties = party_list(sc.verifiers, cfg.prover ? std::optional(sc.S[*cfg.prover].L) : std::nullopt);
  a.verdict = {{"protocol", "zkpv"},
               {"accept", v.accept},
               {"prover_had_witness", v.prover_had_witness},
               {"hash_match", v.hash_match},
               {"and_gates", v.and_gates},
               {"reps", opt.reps},
               {"circuit_hash", to_hex(v.circuit_hash)},
               {"seed", cfg.seed}};
  return a;
}

RunArtifacts run_scenario(const ScenarioConfig& cfg) {
  if (cfg.protocol == "pv") return run_pv(cfg);
  if (cfg.protocol == "pc-opt") return run_pcopt(cfg);
  if (cfg.protocol == "zkpv") return run_zkpv(cfg);
  auto c = run_pc_commit(cfg);
  if (!cfg.prover || !c.opening) {
    c.run.accept = false;
    return std::move(c.run);
  }
  const auto reveal = run_pc_reveal(c.rho, *cfg.prover, *c.opening);
  c.run.accept = reveal.accept;
  c.run.verdict["phase"] = "commit+reveal";
  c.run.verdict["accept"] = reveal.accept;
  c.run.verdict["accepting"] = reveal.verdict["accepting"];
  return std::move(c.run);
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << data;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_artifacts(const RunArtifacts& a, const OutputPaths& out, std::size_t axis) {
  if (!out.log.empty()) write_file(out.log, sim::to_ndjson(a.log));
  if (!out.svg.empty()) write_file(out.svg, spacetime_svg(a.log, a.parties, axis));
  if (!out.verdict.empty()) write_file(out.verdict, a.verdict.dump(2) + "\n");
  if (!out.profile.empty() && !a.profile_csv.empty()) write_file(out.profile, a.profile_csv);
}

std::vector<std::string> attack_names() {
  return {"classical-copy",  "intercept-resend", "epr-plain-bb84", "epr-fbb84",
          "denial-privacy", "binding-intercept-resend", "equivocation"};
}

namespace {

attacks::LineSetup line_setup(const ScenarioConfig* cfg) {
  attacks::LineSetup s;
  if (!cfg) return s;
  if (cfg->dimension != 1) throw attacks::AttackError("PV attacks run on a line (dimension 1)");
  const auto X = cfg->verifier_positions();
  s.v0 = X[0][0];
  s.v1 = X[1][0];
  s.L = cfg->S.at(cfg->prover.value_or(0)).L[0];
  if (!cfg->attack.spoofers.empty()) {
    s.spoofers.clear();
    for (const auto& p : cfg->attack.spoofers) s.spoofers.push_back(p[0]);
  }
  s.n = cfg->params.n;
  s.rounds = cfg->params.rounds;
  return s;
}

pc::CommitScenario default_denial_scenario() {
  pc::CommitScenario sc;
  sc.verifiers = {SpatialPoint{Rational(0)}, SpatialPoint{Rational(12)}};
  for (int i = 0; i < 4; ++i) sc.S.push_back({SpatialPoint{Rational(3 + 2 * i)}, Rational(40)});
  return sc;
}

pc::CommitScenario default_binding_scenario() {
  pc::CommitScenario sc;
  sc.verifiers = {SpatialPoint{Rational(0)}, SpatialPoint{Rational(12)}};
  for (int i = 0; i < 5; ++i) sc.S.push_back({SpatialPoint{Rational(2 + 2 * i)}, Rational(30 + i)});
  sc.rounds = 4;
  return sc;
}

attacks::AttackReport from_counts(std::string name, std::uint64_t trials, std::uint64_t successes) {
  return attacks::AttackReport::from(std::move(name), kernels::TrialStats{trials, successes});
}

}  // namespace

attacks::AttackReport run_named_attack(const std::string& name, std::uint64_t trials, std::uint64_t seed,
                                       const ScenarioConfig* cfg) {
  if (name == "classical-copy") return attacks::classical_copy_attack(line_setup(cfg), trials, seed);
  if (name == "intercept-resend") return attacks::intercept_resend_attack(line_setup(cfg), trials, seed);
  if (name == "epr-plain-bb84" || name == "epr-fbb84") {
    auto setup = line_setup(cfg);
    const bool plain = name == "epr-plain-bb84";
    if (!cfg) setup.n = plain ? 1 : 32;
    const int budget = cfg && cfg->attack.epr_budget ? *cfg->attack.epr_budget : setup.rounds;
    auto r = attacks::epr_attack(setup, plain ? attacks::plain_bb84_scheme() : pv::fbb84_scheme(), budget, trials, seed);
    r.name = name;
    return r;
  }
  if (name == "denial-privacy") {
    pc::CommitScenario sc = cfg ? cfg->commit_scenario() : default_denial_scenario();
    std::vector<std::size_t> region, zone = {1, 2};
    if (cfg && !cfg->R.empty()) {
      region = cfg->region_indices();
    } else {
      for (std::size_t i = 0; i < sc.S.size(); ++i) region.push_back(i);
    }
    if (cfg && !cfg->attack.zone.empty()) zone = cfg->zone_indices();
    const int reps = cfg ? cfg->params.reps : 40;
    return attacks::denial_privacy_attack(sc, region, zone, reps, trials, seed).report;
  }
  if (name == "binding-intercept-resend") {
    const pc::CommitScenario sc = cfg ? cfg->commit_scenario() : default_binding_scenario();
    const std::size_t claim = cfg && cfg->prover ? *cfg->prover : sc.S.size() / 2;
    std::vector<SpatialPoint> members;
    if (cfg && !cfg->attack.spoofers.empty()) {
      members = cfg->attack.spoofers;
    } else {
      const Rational x = sc.S[claim].L[0];
      members = {SpatialPoint{x - 1}, SpatialPoint{x + 1}};
    }
    const auto row = attacks::intercept_resend_binding(sc, claim, members, trials, seed);
    return from_counts(name, trials, row.successes[claim]);
  }
  if (name == "equivocation") {
    pc::CommitScenario sc = cfg ? cfg->commit_scenario() : default_binding_scenario();
    if (!cfg) {
      sc.rounds = 1;
      sc.lambda_com = 8;
    }
    const auto r = attacks::equivocation_attack(sc, cfg && cfg->prover ? *cfg->prover : 1, trials, seed);
    return from_counts(name, r.tries, r.successes);
  }
  throw attacks::AttackError("unknown attack '" + name + "'");
}

ordered_json report_json(const attacks::AttackReport& r) {
  return {{"name", r.name},
          {"trials", r.trials},
          {"successes", r.successes},
          {"rate", r.rate},
          {"ci95", {r.ci95.first, r.ci95.second}}};
}

}  // namespace zkpos::cli
