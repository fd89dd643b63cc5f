#include "zkpos/cli/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace zkpos::cli {

namespace {

constexpr double kWidth = 640;
constexpr double kMargin = 48;
constexpr double kMaxHeight = 1600;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string spacetime_svg(const std::vector<sim::Event>& log, std::span<const SvgParty> parties, std::size_t axis) {
  const std::string header = "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\"";
  if (log.empty()) return header + " width=\"0\" height=\"0\"></svg>\n";

  auto x_of = [&](sim::PartyId id) {
    if (id >= parties.size()) throw std::invalid_argument("log mentions a party without a position");
    const auto& p = parties[id].position;
    if (axis >= p.size()) throw std::invalid_argument("projection axis exceeds the dimension");
    return p[axis].convert_to<double>();
  };

  double x_lo = x_of(0), x_hi = x_lo;
  for (sim::PartyId i = 0; i < parties.size(); ++i) {
    x_lo = std::min(x_lo, x_of(i));
    x_hi = std::max(x_hi, x_of(i));
  }
  double t_lo = log.front().time.to_double(), t_hi = t_lo;
  for (const auto& e : log) {
    t_lo = std::min(t_lo, e.time.to_double());
    t_hi = std::max(t_hi, e.time.to_double());
  }
  const double x_span = std::max(x_hi - x_lo, 1.0), t_span = std::max(t_hi - t_lo, 1.0);
  const double scale = std::min((kWidth - 2 * kMargin) / x_span, (kMaxHeight - 2 * kMargin) / t_span);
  const double height = 2 * kMargin + t_span * scale;
  auto px = [&](double x) { return kMargin + (x - x_lo) * scale; };
  auto py = [&](double t) { return height - kMargin - (t - t_lo) * scale; };

  std::string out = header + " width=\"" + num(kWidth) + "\" height=\"" + num(height) + "\">\n";
  out += "<style>.wl{stroke:#888;stroke-dasharray:4 3}.d{stroke:#c33}.b{stroke:#36c}text{font:12px sans-serif}</style>\n";
  for (sim::PartyId i = 0; i < parties.size(); ++i) {
    const double x = px(x_of(i));
    out += "<line class=\"wl\" x1=\"" + num(x) + "\" y1=\"" + num(py(t_lo)) + "\" x2=\"" + num(x) + "\" y2=\"" +
           num(py(t_hi)) + "\"/>\n";
    out += "<text x=\"" + num(x) + "\" y=\"" + num(height - kMargin / 3) + "\" text-anchor=\"middle\">" +
           escape(parties[i].label) + "</text>\n";
  }
  std::map<std::uint64_t, const sim::Event*> sends;
  for (const auto& e : log) {
    if (e.kind == sim::EventKind::kSend) sends[e.seq] = &e;
  }
  for (const auto& e : log) {
    if (e.kind != sim::EventKind::kDeliver) continue;
    const auto it = sends.find(e.signal);
    if (it == sends.end()) continue;
    const sim::Event& s = *it->second;
    const bool directional = e.mode == sim::SignalMode::kDirectional;
    out += "<line class=\"" + std::string(directional ? "d" : "b") + "\" x1=\"" + num(px(x_of(s.party))) + "\" y1=\"" +
           num(py(s.time.to_double())) + "\" x2=\"" + num(px(x_of(e.party))) + "\" y2=\"" + num(py(e.time.to_double())) +
           "\"><title>" + escape(e.label.empty() ? "signal" : e.label) + "</title></line>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace zkpos::cli
