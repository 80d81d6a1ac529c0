#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dchne/energy_model.hpp"

namespace dchne {

struct Position {
  Meters x = 0.0;
  Meters y = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

struct ArenaConfig {
  Meters side_a = 350.0;
  // Centre of the square; minimises the mean node to base station distance.
  Position bs_position{175.0, 175.0};
  std::size_t node_count = 190;
  std::uint64_t seed = 1;

  // Throws ConfigError for a non-positive side or zero nodes.
  void validate() const;
};

// node_count positions, i.i.d. uniform over [0, side_a]^2, determined by seed.
std::vector<Position> place_nodes(const ArenaConfig& cfg);

Meters distance(const Position& a, const Position& b);

// Ranging from the base station preamble. Idealised: the estimate is exact.
Meters estimate_distance_to_bs(const Position& node, const Position& bs);

// Folds a coordinate back into [0, side] by mirror reflection at the walls.
Meters reflect_into(Meters v, Meters side);

// Moves every node speed*dt metres in a random direction drawn from
// (seed, step), reflecting at the arena walls. speed == 0 is the identity.
std::vector<Position> step_mobility(std::span<const Position> positions, double speed, double dt,
                                    Meters side, std::uint64_t seed, std::uint64_t step);

}  // namespace dchne
