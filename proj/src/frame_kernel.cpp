#include "dchne/frame_kernel.hpp"

#include <cstdint>

#include "dchne/rng.hpp"

namespace dchne {

namespace {

inline void sense_one(const Node& n, std::uint64_t seed, std::size_t frame, double duty,
                      double event_p, std::uint8_t& awake, std::uint8_t& event) {
  if (!n.alive) {
    awake = 0;
    event = 0;
    return;
  }
  awake = stream_unit(seed, Stream::kAwake, frame, n.id) < duty ? 1 : 0;
  event = stream_unit(seed, Stream::kEvent, frame, n.id) < event_p ? 1 : 0;
}

}  // namespace

void sense_frame(std::span<const Node> nodes, std::uint64_t seed, std::size_t frame,
                 const ScenarioConfig& scenario, std::span<std::uint8_t> awake,
                 std::span<std::uint8_t> event, Exec exec) {
  const double duty = scenario.effective_duty_cycle();
  const double event_p = scenario.effective_event_probability();
  const auto n = static_cast<std::int64_t>(nodes.size());
  if (exec == Exec::kParallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      sense_one(nodes[i], seed, frame, duty, event_p, awake[i], event[i]);
    }
  } else {
    for (std::int64_t i = 0; i < n; ++i) {
      sense_one(nodes[i], seed, frame, duty, event_p, awake[i], event[i]);
    }
  }
}

Joules node_frame_charge(const Node& node, std::size_t index, const FramePlan& plan,
                         const EnergyParams& p) {
  if (!node.alive || !node.cluster) return 0.0;
  const std::uint32_t k = *node.cluster;
  if (node.role == Role::kHead) {
    if (!plan.forwards[k]) return 0.0;
    return frame_consumption_chn(plan.tx_per_cluster[k], plan.d_size,
                                 estimate_distance_to_bs(node.pos, plan.bs), plan.net, p);
  }
  if (node.role == Role::kMember && plan.transmits[index]) {
    return frame_consumption_nchn(plan.d_size, 1, plan.net, p);
  }
  return 0.0;
}

std::size_t charge_frame(std::span<Node> nodes, std::span<Joules> consumed, const FramePlan& plan,
                         const EnergyParams& p, Exec exec) {
  const auto n = static_cast<std::int64_t>(nodes.size());
  std::size_t deaths = 0;
  if (exec == Exec::kParallel) {
#pragma omp parallel for schedule(static) reduction(+ : deaths)
    for (std::int64_t i = 0; i < n; ++i) {
      if (!nodes[i].alive) continue;
      const Joules charge = node_frame_charge(nodes[i], static_cast<std::size_t>(i), plan, p);
      if (charge > 0.0 && debit(nodes[i], consumed[i], charge)) ++deaths;
    }
  } else {
    for (std::int64_t i = 0; i < n; ++i) {
      if (!nodes[i].alive) continue;
      const Joules charge = node_frame_charge(nodes[i], static_cast<std::size_t>(i), plan, p);
      if (charge > 0.0 && debit(nodes[i], consumed[i], charge)) ++deaths;
    }
  }
  return deaths;
}

}  // namespace dchne
