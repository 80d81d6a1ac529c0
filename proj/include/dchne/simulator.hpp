#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dchne/arena.hpp"
#include "dchne/election.hpp"
#include "dchne/energy_model.hpp"
#include "dchne/scenario.hpp"

namespace dchne {

enum class Policy { kDchne, kLeach, kRrch };

std::string_view policy_name(Policy p);
// Accepts "dchne", "leach", "rrch"; throws UsageError otherwise.
Policy parse_policy(std::string_view name);
std::string_view scenario_name(ScenarioKind k);
// Accepts "1"/"2" and "scenario1"/"scenario2".
ScenarioKind parse_scenario(std::string_view name);

struct SimConfig {
  ArenaConfig arena;
  EnergyParams energy;
  ControlMessageSizes msgs;
  ScenarioConfig scenario;
  Policy policy = Policy::kDchne;
  std::size_t cluster_count = 10;
  std::size_t max_frames = 12000;
  Joules initial_energy = 3.5;
  double mobility_speed = 0.0;  // m/s, 0 disables mobility
  double frame_seconds = 1.0;   // mobility time step per frame
  bool record_residuals = false;
  bool parallel_kernel = false;

  // Throws ConfigError describing the first invalid field.
  void validate() const;
};

struct FrameRecord {
  std::size_t frame = 0;
  std::size_t alive = 0;
  std::uint64_t packets_delivered_cum = 0;
  std::vector<std::uint32_t> chn_ids;  // heads alive at the end of the frame
  std::vector<Joules> residuals;       // empty unless record_residuals
};

enum class Termination { kAllDead, kMaxFrames };

struct SimTrace {
  SimConfig config;
  std::vector<FrameRecord> records;
  Termination termination = Termination::kMaxFrames;
  std::vector<Joules> final_residuals;
  // Every charge debited from each node, including the overdraft of the
  // frame it died in.
  std::vector<Joules> consumed;
};

// Called for every election with the node states it saw and its outcome.
// full_round is false for a single-cluster head replacement.
using ElectionObserver = std::function<void(std::size_t frame, bool full_round,
                                            std::span<const Node> candidates,
                                            const ElectionOutcome& outcome)>;

SimTrace run(const SimConfig& cfg, const ElectionObserver& observer = {});

// First frame whose alive count is below threshold, or nullopt.
std::optional<std::size_t> network_lifetime(const SimTrace& trace, std::size_t threshold);

}  // namespace dchne
