#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "dchne/arena.hpp"
#include "dchne/energy_model.hpp"

namespace dchne {

enum class Role : std::uint8_t { kNone, kHead, kMember };

struct Node {
  std::uint32_t id = 0;
  Position pos;
  Joules residual = 3.5;
  Role role = Role::kNone;
  bool alive = true;
  bool awake = true;
  std::optional<std::uint32_t> cluster;
};

// Everything an election needs besides the node list.
struct ElectionContext {
  Meters area_side = 350.0;
  EnergyParams energy;
  ControlMessageSizes msgs;
  std::uint64_t seed = 1;
};

struct ElectionOutcome {
  // Cluster k is headed by chn_ids[k].
  std::vector<std::uint32_t> chn_ids;
  // Alive node id -> cluster index.
  std::map<std::uint32_t, std::uint32_t> membership;
  std::map<std::uint32_t, Joules> control_energy_charged;
  // Shape the control charges were computed with: alive nodes, elected heads.
  NetworkShape net;
};

// Splits the alive nodes into min(k, alive) non-empty groups by 20 rounds of
// Lloyd iteration from seed-chosen initial centres. Returns node id -> group.
std::map<std::uint32_t, std::uint32_t> geometric_partition(std::span<const Node> nodes,
                                                           std::size_t k, std::uint64_t seed);

// Highest residual wins; equal residuals go to the lowest id.
// Requires a non-empty candidate list.
std::uint32_t max_residual_candidate(std::span<const Node> nodes,
                                     std::span<const std::uint32_t> candidate_ids);

// Every alive node joins the nearest head (ties to the lower cluster index).
std::map<std::uint32_t, std::uint32_t> assign_nearest(std::span<const Node> nodes,
                                                      std::span<const std::uint32_t> heads);

// Residual-energy election. Alive nodes are grouped by their current cluster
// label (or geometrically partitioned when labels are missing or do not give
// min(c, alive) groups); each group elects its highest-residual member, then
// every alive node joins its nearest head. Charges preamble reception, the
// setup handshake and the head's announcement. Throws EmptyNetworkError when
// no node is alive.
ElectionOutcome dchne_elect(std::span<const Node> nodes, std::size_t c, const ElectionContext& ctx);

// Rotation state for LEACH: who has already served in the current epoch.
struct LeachEpoch {
  std::set<std::uint32_t> served;
};

// Number of rounds in a LEACH epoch, ceil(1/P) with P = c/total_nodes.
std::size_t leach_epoch_length(std::size_t c, std::size_t total_nodes);

// Self-election threshold for the given round of an epoch.
double leach_threshold(std::size_t c, std::size_t total_nodes, std::size_t round_index);

// Probabilistic rotation. Each alive node that has not served this epoch
// self-elects with the LEACH threshold using coin (seed, round, id). Falls back
// to the single highest-residual node when nobody self-elects. Updates epoch.
ElectionOutcome leach_elect(std::span<const Node> nodes, std::size_t c, std::size_t round_index,
                            std::size_t total_nodes, LeachEpoch& epoch,
                            const ElectionContext& ctx);

// Frozen clusters for round-robin headship.
struct RrchClusters {
  std::vector<std::vector<std::uint32_t>> members;  // ascending ids
  std::vector<std::optional<std::uint32_t>> last_head;
};

RrchClusters rrch_form_clusters(std::span<const Node> nodes, std::size_t c,
                                const ElectionContext& ctx);

// Advances each frozen cluster to the next alive member after its previous
// head in ascending id order (wrapping). Clusters with no alive member drop
// out. Membership never changes.
ElectionOutcome rrch_elect(std::span<const Node> nodes, RrchClusters& clusters,
                           const ElectionContext& ctx);

}  // namespace dchne
