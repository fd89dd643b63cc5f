#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zkpos/pc/commit.hpp"
#include "zkpos/pc/optimized.hpp"
#include "zkpos/pv/fbb84.hpp"

namespace zkpos::cli {

using sim::Rational;
using sim::SpacetimePoint;
using sim::SpatialPoint;

/// Schema violation. `pointer` is the JSON pointer of the offending value.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string pointer, const std::string& message)
      : std::runtime_error(pointer + ": " + message), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

struct ProtocolParams {
  int n = 8;
  int rounds = 1;
  int kappa = crypto::kDefaultKappa;
  int lambda_com = crypto::kDefaultLambdaCom;
  int reps = 40;
  Rational delta = 1;
  int ticks = 16;
  Rational t_init = 0;
  /// pc-opt: index into mesh_points(); empty means the middle one.
  std::optional<std::size_t> mesh_target;

  bool operator==(const ProtocolParams&) const = default;
};

struct OutputPaths {
  std::string log;
  std::string svg;
  std::string verdict;
  std::string profile;
  std::string state;
  std::string opening;

  bool operator==(const OutputPaths&) const = default;
};

/// Adversary settings for `attack run`; every field is optional.
struct AttackParams {
  std::vector<SpatialPoint> spoofers;
  std::optional<int> epr_budget;
  std::vector<SpacetimePoint> zone;

  bool operator==(const AttackParams&) const = default;
};

/// Rationals are written as integers or "p/q" strings; on input, exact
/// decimals ("0.5") and JSON floats (taken at their exact binary value) are
/// also accepted.
struct ScenarioConfig {
  std::string name;
  /// Pipeline a bundled scenario exercises: "pv", "pc", "pc-opt" or "zkpv".
  std::string protocol = "pv";
  std::size_t dimension = 1;
  /// Explicit verifier positions, or empty with `margin` set: the enclosing
  /// simplex of S with that clearance.
  std::vector<SpatialPoint> verifiers;
  std::optional<Rational> margin;
  std::vector<SpacetimePoint> S;
  std::vector<SpacetimePoint> R;
  /// Index into S of the honest prover; empty means no prover.
  std::optional<std::size_t> prover;
  ProtocolParams params;
  std::uint64_t seed = 0;
  OutputPaths outputs;
  AttackParams attack;

  /// Explicit verifiers, or the enclosing simplex.
  std::vector<SpatialPoint> verifier_positions() const;
  /// Indices of R's points in S.
  std::vector<std::size_t> region_indices() const;
  std::vector<std::size_t> zone_indices() const;

  pv::PvInstance pv_instance() const;
  pc::CommitScenario commit_scenario() const;
  pc::OptScenario opt_scenario() const;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Throws ConfigError.
ScenarioConfig parse_config(const nlohmann::json& j);
nlohmann::json to_json(const ScenarioConfig& c);
/// Reads and parses a file; I/O and JSON syntax errors are ConfigErrors at "".
ScenarioConfig load_config(const std::string& path);

}  // namespace zkpos::cli
