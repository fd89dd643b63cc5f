#include "zkpos/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>

namespace zkpos::cli {

using nlohmann::json;

namespace {

std::string child(const std::string& ptr, const std::string& key) {
  std::string escaped;
  for (char ch : key) {
    if (ch == '~') {
      escaped += "~0";
    } else if (ch == '/') {
      escaped += "~1";
    } else {
      escaped += ch;
    }
  }
  return ptr + "/" + escaped;
}
std::string child(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

void expect_object(const json& j, const std::string& ptr, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(ptr, "expected an object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw ConfigError(child(ptr, key), "unknown property");
  }
}

const json& array_at(const json& j, const std::string& ptr) {
  if (!j.is_array()) throw ConfigError(ptr, "expected an array");
  return j;
}

Rational read_rational(const json& j, const std::string& ptr) {
  if (j.is_number_integer()) return j.is_number_unsigned() ? Rational(j.get<std::uint64_t>()) : Rational(j.get<std::int64_t>());
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(ptr, "expected a finite number");
    return Rational(v);
  }
  if (j.is_string()) {
    try {
      return sim::parse_rational(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(ptr, e.what());
    }
  }
  throw ConfigError(ptr, "expected a number or a \"p/q\" string");
}

json write_rational(const Rational& q) {
  if (boost::multiprecision::denominator(q) == 1) {
    const auto num = boost::multiprecision::numerator(q);
    if (num >= std::numeric_limits<std::int64_t>::min() && num <= std::numeric_limits<std::int64_t>::max()) {
      return num.convert_to<std::int64_t>();
    }
  }
  return sim::rational_to_string(q);
}

std::int64_t read_int(const json& j, const std::string& ptr, std::int64_t lo, std::int64_t hi) {
  if (!j.is_number_integer()) throw ConfigError(ptr, "expected an integer");
  if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(hi)) {
    throw ConfigError(ptr, "must be at most " + std::to_string(hi));
  }
  const auto v = j.get<std::int64_t>();
  if (v < lo || v > hi) throw ConfigError(ptr, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return v;
}

SpatialPoint read_point(const json& j, const std::string& ptr, std::size_t d) {
  array_at(j, ptr);
  if (j.size() != d) throw ConfigError(ptr, "expected " + std::to_string(d) + " coordinates");
  SpatialPoint p;
  for (std::size_t i = 0; i < j.size(); ++i) p.push_back(read_rational(j[i], child(ptr, i)));
  return p;
}

json write_point(const SpatialPoint& p) {
  json a = json::array();
  for (const auto& x : p) a.push_back(write_rational(x));
  return a;
}

SpacetimePoint read_event(const json& j, const std::string& ptr, std::size_t d) {
  expect_object(j, ptr, {"x", "t"});
  if (!j.contains("x")) throw ConfigError(child(ptr, "x"), "required");
  if (!j.contains("t")) throw ConfigError(child(ptr, "t"), "required");
  return {read_point(j["x"], child(ptr, "x"), d), read_rational(j["t"], child(ptr, "t"))};
}

json write_event(const SpacetimePoint& p) { return {{"x", write_point(p.L)}, {"t", write_rational(p.t)}}; }

std::vector<SpacetimePoint> read_events(const json& j, const std::string& ptr, std::size_t d) {
  array_at(j, ptr);
  std::vector<SpacetimePoint> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_event(j[i], child(ptr, i), d));
  return out;
}

std::vector<std::size_t> indices_in_S(const std::vector<SpacetimePoint>& pts, const std::vector<SpacetimePoint>& S,
                                      const std::string& ptr) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::size_t j = 0;
    while (j < S.size() && !(S[j] == pts[i])) ++j;
    if (j == S.size()) throw ConfigError(child(ptr, i), "point is not in S");
    out.push_back(j);
  }
  return out;
}

std::string read_string(const json& j, const std::string& ptr) {
  if (!j.is_string()) throw ConfigError(ptr, "expected a string");
  return j.get<std::string>();
}

}  // namespace

std::vector<SpatialPoint> ScenarioConfig::verifier_positions() const {
  if (!verifiers.empty()) return verifiers;
  return pv::place_verifiers(S, margin.value_or(Rational(1)));
}

std::vector<std::size_t> ScenarioConfig::region_indices() const { return indices_in_S(R, S, "/R"); }
std::vector<std::size_t> ScenarioConfig::zone_indices() const { return indices_in_S(attack.zone, S, "/attack/zone"); }

pv::PvInstance ScenarioConfig::pv_instance() const {
  pv::PvInstance inst;
  inst.verifiers = verifier_positions();
  inst.target = S.at(prover.value_or(0));
  inst.n = params.n;
  inst.rounds = params.rounds;
  inst.start = params.t_init;
  return inst;
}

pc::CommitScenario ScenarioConfig::commit_scenario() const {
  pc::CommitScenario sc;
  sc.verifiers = verifier_positions();
  sc.S = S;
  sc.n = params.n;
  sc.rounds = params.rounds;
  sc.kappa = params.kappa;
  sc.lambda_com = params.lambda_com;
  sc.t_init = params.t_init;
  return sc;
}

pc::OptScenario ScenarioConfig::opt_scenario() const {
  pc::OptScenario sc;
  sc.verifiers = verifier_positions();
  sc.delta = params.delta;
  sc.ticks = params.ticks;
  sc.n = params.n;
  sc.kappa = params.kappa;
  sc.lambda_com = params.lambda_com;
  sc.t_init = params.t_init;
  return sc;
}

ScenarioConfig parse_config(const json& j) {
  expect_object(j, "", {"name", "protocol", "dimension", "verifiers", "S", "R", "prover", "params", "seed", "outputs", "attack"});
  ScenarioConfig c;
  if (j.contains("name")) c.name = read_string(j["name"], "/name");
  if (j.contains("protocol")) {
    c.protocol = read_string(j["protocol"], "/protocol");
    if (c.protocol != "pv" && c.protocol != "pc" && c.protocol != "pc-opt" && c.protocol != "zkpv") {
      throw ConfigError("/protocol", "expected one of pv, pc, pc-opt, zkpv");
    }
  }
  if (!j.contains("dimension")) throw ConfigError("/dimension", "required");
  c.dimension = static_cast<std::size_t>(read_int(j["dimension"], "/dimension", 1, 3));
  const std::size_t d = c.dimension;

  if (!j.contains("seed")) throw ConfigError("/seed", "required: runs never draw ambient randomness");
  if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<std::int64_t>() >= 0)) {
    throw ConfigError("/seed", "expected a non-negative integer");
  }
  c.seed = j["seed"].get<std::uint64_t>();

  if (!j.contains("S")) throw ConfigError("/S", "required");
  c.S = read_events(j["S"], "/S", d);
  if (c.S.empty()) throw ConfigError("/S", "must not be empty");
  for (std::size_t i = 0; i < c.S.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      if (c.S[k] == c.S[i]) throw ConfigError(child("/S", i), "duplicate point");
    }
  }
  if (j.contains("R")) {
    c.R = read_events(j["R"], "/R", d);
    c.region_indices();
  }

  if (!j.contains("verifiers")) throw ConfigError("/verifiers", "required");
  const json& v = j["verifiers"];
  expect_object(v, "/verifiers", {"points", "enclosing_simplex"});
  if (v.contains("points") == v.contains("enclosing_simplex")) {
    throw ConfigError("/verifiers", "give exactly one of \"points\" and \"enclosing_simplex\"");
  }
  if (v.contains("points")) {
    const json& pts = array_at(v["points"], "/verifiers/points");
    if (pts.size() != d + 1) throw ConfigError("/verifiers/points", "expected d + 1 = " + std::to_string(d + 1) + " points");
    for (std::size_t i = 0; i < pts.size(); ++i) c.verifiers.push_back(read_point(pts[i], child("/verifiers/points", i), d));
    if (!sim::affinely_independent(c.verifiers)) throw ConfigError("/verifiers/points", "points are affinely dependent");
  } else {
    const json& es = v["enclosing_simplex"];
    expect_object(es, "/verifiers/enclosing_simplex", {"margin"});
    if (!es.contains("margin")) throw ConfigError("/verifiers/enclosing_simplex/margin", "required");
    c.margin = read_rational(es["margin"], "/verifiers/enclosing_simplex/margin");
    if (*c.margin <= 0) throw ConfigError("/verifiers/enclosing_simplex/margin", "must be positive");
  }
  const auto X = c.verifier_positions();
  for (std::size_t i = 0; i < c.S.size(); ++i) {
    if (!sim::in_convex_hull(c.S[i].L, X)) throw ConfigError(child("/S", i), "point lies outside the verifiers' hull");
  }

  if (j.contains("prover") && !j["prover"].is_null()) {
    c.prover = static_cast<std::size_t>(read_int(j["prover"], "/prover", 0, static_cast<std::int64_t>(c.S.size()) - 1));
  }

  if (j.contains("params")) {
    const json& p = j["params"];
    const std::string ptr = "/params";
    expect_object(p, ptr, {"n", "rounds", "kappa", "lambda_com", "reps", "delta", "ticks", "t_init", "mesh_target"});
    auto& q = c.params;
    if (p.contains("n")) q.n = static_cast<int>(read_int(p["n"], "/params/n", 1, 4096));
    if (p.contains("rounds")) q.rounds = static_cast<int>(read_int(p["rounds"], "/params/rounds", 1, 1 << 16));
    if (p.contains("kappa")) q.kappa = static_cast<int>(read_int(p["kappa"], "/params/kappa", 1, 128));
    if (p.contains("lambda_com")) q.lambda_com = static_cast<int>(read_int(p["lambda_com"], "/params/lambda_com", 1, 128));
    if (p.contains("reps")) q.reps = static_cast<int>(read_int(p["reps"], "/params/reps", 1, 4096));
    if (p.contains("ticks")) q.ticks = static_cast<int>(read_int(p["ticks"], "/params/ticks", 1, 1 << 20));
    if (p.contains("delta")) {
      q.delta = read_rational(p["delta"], "/params/delta");
      if (q.delta <= 0) throw ConfigError("/params/delta", "must be positive");
    }
    if (p.contains("t_init")) q.t_init = read_rational(p["t_init"], "/params/t_init");
    if (p.contains("mesh_target") && !p["mesh_target"].is_null()) {
      q.mesh_target = static_cast<std::size_t>(read_int(p["mesh_target"], "/params/mesh_target", 0, 1 << 30));
    }
  }

  if (j.contains("outputs")) {
    const json& o = j["outputs"];
    expect_object(o, "/outputs", {"log", "svg", "verdict", "profile", "state", "opening"});
    auto get = [&](const char* key, std::string& dst) {
      if (o.contains(key)) dst = read_string(o[key], child("/outputs", key));
    };
    get("log", c.outputs.log);
    get("svg", c.outputs.svg);
    get("verdict", c.outputs.verdict);
    get("profile", c.outputs.profile);
    get("state", c.outputs.state);
    get("opening", c.outputs.opening);
  }

  if (j.contains("attack")) {
    const json& a = j["attack"];
    expect_object(a, "/attack", {"spoofers", "epr_budget", "zone"});
    if (a.contains("spoofers")) {
      const json& sp = array_at(a["spoofers"], "/attack/spoofers");
      for (std::size_t i = 0; i < sp.size(); ++i) c.attack.spoofers.push_back(read_point(sp[i], child("/attack/spoofers", i), d));
    }
    if (a.contains("epr_budget")) c.attack.epr_budget = static_cast<int>(read_int(a["epr_budget"], "/attack/epr_budget", 0, 1 << 20));
    if (a.contains("zone")) {
      c.attack.zone = read_events(a["zone"], "/attack/zone", d);
      c.zone_indices();
    }
  }
  return c;
}

json to_json(const ScenarioConfig& c) {
  json j;
  if (!c.name.empty()) j["name"] = c.name;
  j["protocol"] = c.protocol;
  j["dimension"] = c.dimension;
  if (!c.verifiers.empty()) {
    json pts = json::array();
    for (const auto& p : c.verifiers) pts.push_back(write_point(p));
    j["verifiers"] = {{"points", pts}};
  } else {
    j["verifiers"] = {{"enclosing_simplex", {{"margin", write_rational(c.margin.value_or(Rational(1)))}}}};
  }
  json S = json::array();
  for (const auto& p : c.S) S.push_back(write_event(p));
  j["S"] = S;
  if (!c.R.empty()) {
    json R = json::array();
    for (const auto& p : c.R) R.push_back(write_event(p));
    j["R"] = R;
  }
  j["prover"] = c.prover ? json(*c.prover) : json(nullptr);
  const auto& q = c.params;
  j["params"] = {{"n", q.n},         {"rounds", q.rounds}, {"kappa", q.kappa},
                 {"lambda_com", q.lambda_com}, {"reps", q.reps}, {"delta", write_rational(q.delta)},
                 {"ticks", q.ticks}, {"t_init", write_rational(q.t_init)}};
  if (q.mesh_target) j["params"]["mesh_target"] = *q.mesh_target;
  j["seed"] = c.seed;
  json o = json::object();
  auto put = [&](const char* key, const std::string& v) {
    if (!v.empty()) o[key] = v;
  };
  put("log", c.outputs.log);
  put("svg", c.outputs.svg);
  put("verdict", c.outputs.verdict);
  put("profile", c.outputs.profile);
  put("state", c.outputs.state);
  put("opening", c.outputs.opening);
  if (!o.empty()) j["outputs"] = o;
  json a = json::object();
  if (!c.attack.spoofers.empty()) {
    json sp = json::array();
    for (const auto& p : c.attack.spoofers) sp.push_back(write_point(p));
    a["spoofers"] = sp;
  }
  if (c.attack.epr_budget) a["epr_budget"] = *c.attack.epr_budget;
  if (!c.attack.zone.empty()) {
    json z = json::array();
    for (const auto& p : c.attack.zone) z.push_back(write_event(p));
    a["zone"] = z;
  }
  if (!a.empty()) j["attack"] = a;
  return j;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace zkpos::cli
