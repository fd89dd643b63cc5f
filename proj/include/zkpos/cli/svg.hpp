#pragma once

#include <span>
#include <string>
#include <vector>

#include "zkpos/sim/engine.hpp"

namespace zkpos::cli {

struct SvgParty {
  std::string label;
  sim::SpatialPoint position;
};

/// Spacetime diagram of a log: position along `axis` horizontally, time
/// upward, one world-line per party and one segment per delivery from
/// (sender, send time) to (receiver, arrival). Both axes share one scale, so
/// light-speed signals are drawn at 45 degrees. Party ids index `parties`.
/// The output depends only on the arguments. An empty log gives an <svg>
/// element with no content.
std::string spacetime_svg(const std::vector<sim::Event>& log, std::span<const SvgParty> parties, std::size_t axis = 0);

}  // namespace zkpos::cli
