#pragma once

#include <cstddef>

#include "dchne/energy_model.hpp"

namespace dchne {

enum class ScenarioKind { kScenario1, kScenario2 };

// Scenario 1: every node senses and reports every frame.
// Scenario 2: per node and frame, awake with probability duty_cycle and
// sensing an event with probability event_probability.
struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::kScenario1;
  double event_probability = 0.3;
  double duty_cycle = 0.5;
  Bits d_size = 4000;  // 500 bytes
  std::size_t frames_per_round = 20;

  void validate() const;

  double effective_event_probability() const {
    return kind == ScenarioKind::kScenario1 ? 1.0 : event_probability;
  }
  double effective_duty_cycle() const {
    return kind == ScenarioKind::kScenario1 ? 1.0 : duty_cycle;
  }
};

}  // namespace dchne
