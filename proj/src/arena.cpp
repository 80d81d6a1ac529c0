#include "dchne/arena.hpp"

#include <cmath>
#include <numbers>

#include "dchne/errors.hpp"
#include "dchne/rng.hpp"

namespace dchne {

void ArenaConfig::validate() const {
  if (!(side_a > 0.0) || !std::isfinite(side_a)) throw ConfigError("arena side must be > 0");
  if (node_count == 0) throw ConfigError("node count must be >= 1");
  if (!std::isfinite(bs_position.x) || !std::isfinite(bs_position.y)) {
    throw ConfigError("base station position must be finite");
  }
}

std::vector<Position> place_nodes(const ArenaConfig& cfg) {
  std::vector<Position> out;
  out.reserve(cfg.node_count);
  for (std::size_t i = 0; i < cfg.node_count; ++i) {
    out.push_back({cfg.side_a * stream_unit(cfg.seed, Stream::kPlacement, i, 0),
                   cfg.side_a * stream_unit(cfg.seed, Stream::kPlacement, i, 1)});
  }
  return out;
}

Meters distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

Meters estimate_distance_to_bs(const Position& node, const Position& bs) {
  return distance(node, bs);
}

Meters reflect_into(Meters v, Meters side) {
  // Unfold onto a period of 2*side, then mirror the upper half.
  const double period = 2.0 * side;
  double m = std::fmod(v, period);
  if (m < 0.0) m += period;
  return m > side ? period - m : m;
}

std::vector<Position> step_mobility(std::span<const Position> positions, double speed, double dt,
                                    Meters side, std::uint64_t seed, std::uint64_t step) {
  std::vector<Position> out(positions.begin(), positions.end());
  const double hop = speed * dt;
  if (hop == 0.0) return out;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double angle = 2.0 * std::numbers::pi * stream_unit(seed, Stream::kMobility, step, i);
    out[i].x = reflect_into(out[i].x + hop * std::cos(angle), side);
    out[i].y = reflect_into(out[i].y + hop * std::sin(angle), side);
  }
  return out;
}

}  // namespace dchne
