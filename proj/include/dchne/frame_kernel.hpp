#pragma once

// Per-frame, per-node kernels of the simulator. Each kernel has a serial
// reference and an OpenMP variant that run the same per-node routine, so the
// two produce bit-identical results; tests compare them and bench/ times them.

#include <cstddef>
#include <cstdint>
#include <span>

#include "dchne/arena.hpp"
#include "dchne/election.hpp"
#include "dchne/energy_model.hpp"
#include "dchne/scenario.hpp"

namespace dchne {

enum class Exec { kSerial, kParallel };

// Draws awake/event flags for every node in the frame. Dead nodes get 0/0.
void sense_frame(std::span<const Node> nodes, std::uint64_t seed, std::size_t frame,
                 const ScenarioConfig& scenario, std::span<std::uint8_t> awake,
                 std::span<std::uint8_t> event, Exec exec);

// What the data phase of one frame does, decided before any energy moves.
struct FramePlan {
  NetworkShape net;
  Bits d_size = 0;
  Position bs;
  std::span<const std::uint8_t> transmits;            // per node: member sends a packet
  std::span<const std::uint32_t> tx_per_cluster;      // transmitting members per cluster
  std::span<const std::uint8_t> forwards;             // per cluster: head forwards to BS
};

// Energy the node at position index spends in the data phase of the frame.
Joules node_frame_charge(const Node& node, std::size_t index, const FramePlan& plan,
                         const EnergyParams& p);

// Debits each node's frame charge, accumulates it into consumed, and kills
// nodes whose residual reaches 0 (clamped to exactly 0). Returns the number
// of nodes that died.
std::size_t charge_frame(std::span<Node> nodes, std::span<Joules> consumed, const FramePlan& plan,
                         const EnergyParams& p, Exec exec);

// Debit shared by the frame and election paths.
inline bool debit(Node& node, Joules& consumed, Joules amount) {
  consumed += amount;
  node.residual -= amount;
  if (node.residual <= 0.0) {
    node.residual = 0.0;
    node.alive = false;
    node.awake = false;
    node.role = Role::kNone;
    return true;
  }
  return false;
}

}  // namespace dchne
