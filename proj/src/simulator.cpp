#include "dchne/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "dchne/election.hpp"
#include "dchne/errors.hpp"
#include "dchne/frame_kernel.hpp"

namespace dchne {

std::string_view policy_name(Policy p) {
  switch (p) {
    case Policy::kDchne: return "dchne";
    case Policy::kLeach: return "leach";
    case Policy::kRrch: return "rrch";
  }
  return "?";
}

Policy parse_policy(std::string_view name) {
  if (name == "dchne") return Policy::kDchne;
  if (name == "leach") return Policy::kLeach;
  if (name == "rrch") return Policy::kRrch;
  throw UsageError("unknown policy '" + std::string(name) + "' (valid: dchne, leach, rrch)");
}

std::string_view scenario_name(ScenarioKind k) {
  return k == ScenarioKind::kScenario1 ? "scenario1" : "scenario2";
}

ScenarioKind parse_scenario(std::string_view name) {
  if (name == "1" || name == "scenario1") return ScenarioKind::kScenario1;
  if (name == "2" || name == "scenario2") return ScenarioKind::kScenario2;
  throw UsageError("unknown scenario '" + std::string(name) + "' (valid: 1, 2)");
}

void ScenarioConfig::validate() const {
  if (!(event_probability >= 0.0 && event_probability <= 1.0)) {
    throw ConfigError("event_probability must lie in [0, 1]");
  }
  if (!(duty_cycle > 0.0 && duty_cycle <= 1.0)) throw ConfigError("duty_cycle must lie in (0, 1]");
  if (d_size == 0) throw ConfigError("d_size must be > 0");
  if (frames_per_round == 0) throw ConfigError("frames_per_round must be >= 1");
}

void SimConfig::validate() const {
  arena.validate();
  energy.validate();
  msgs.validate();
  scenario.validate();
  if (cluster_count == 0) throw ConfigError("cluster_count must be >= 1");
  if (cluster_count > arena.node_count) throw ConfigError("cluster_count must not exceed node_count");
  if (!(initial_energy > 0.0) || !std::isfinite(initial_energy)) {
    throw ConfigError("initial_energy must be > 0");
  }
  if (!(mobility_speed >= 0.0) || !std::isfinite(mobility_speed)) {
    throw ConfigError("mobility_speed must be >= 0");
  }
  if (!(frame_seconds > 0.0)) throw ConfigError("frame_seconds must be > 0");
}

namespace {

class Simulation {
 public:
  Simulation(const SimConfig& cfg, const ElectionObserver& observer)
      : cfg_(cfg), observer_(observer) {
    ctx_.area_side = cfg.arena.side_a;
    ctx_.energy = cfg.energy;
    ctx_.msgs = cfg.msgs;
    ctx_.seed = cfg.arena.seed;

    const auto positions = place_nodes(cfg.arena);
    nodes_.resize(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
      nodes_[i].id = static_cast<std::uint32_t>(i);
      nodes_[i].pos = positions[i];
      nodes_[i].residual = cfg.initial_energy;
    }
    consumed_.assign(nodes_.size(), 0.0);
    awake_.assign(nodes_.size(), 0);
    event_.assign(nodes_.size(), 0);
    transmits_.assign(nodes_.size(), 0);
  }

  SimTrace run() {
    SimTrace trace;
    trace.config = cfg_;
    const Exec exec = cfg_.parallel_kernel ? Exec::kParallel : Exec::kSerial;
    const std::size_t per_round = cfg_.scenario.frames_per_round;

    for (std::size_t frame = 0; frame < cfg_.max_frames; ++frame) {
      if (cfg_.mobility_speed > 0.0 && frame > 0) move_nodes(frame);

      if (frame % per_round == 0) {
        elect_round(frame, frame / per_round);
      } else if (cfg_.policy == Policy::kDchne) {
        replace_dead_heads(frame);
      }

      sense_frame(nodes_, cfg_.arena.seed, frame, cfg_.scenario, awake_, event_, exec);
      for (std::size_t i = 0; i < nodes_.size(); ++i) {
        // Heads stay on to receive; members follow the duty cycle.
        nodes_[i].awake = nodes_[i].alive && (nodes_[i].role == Role::kHead || awake_[i]);
      }
      const FramePlan plan = plan_frame();
      charge_frame(nodes_, consumed_, plan, cfg_.energy, exec);

      trace.records.push_back(snapshot(frame));
      if (trace.records.back().alive == 0) {
        trace.termination = Termination::kAllDead;
        break;
      }
    }

    trace.final_residuals.reserve(nodes_.size());
    for (const Node& n : nodes_) trace.final_residuals.push_back(n.residual);
    trace.consumed = consumed_;
    return trace;
  }

 private:
  void move_nodes(std::size_t frame) {
    std::vector<Position> pos;
    pos.reserve(nodes_.size());
    for (const Node& n : nodes_) pos.push_back(n.pos);
    const auto moved = step_mobility(pos, cfg_.mobility_speed, cfg_.frame_seconds,
                                     cfg_.arena.side_a, cfg_.arena.seed, frame);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].alive) nodes_[i].pos = moved[i];
    }
  }

  bool any_alive() const {
    return std::any_of(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.alive; });
  }

  void elect_round(std::size_t frame, std::size_t round) {
    if (!any_alive()) return;
    ElectionOutcome out;
    switch (cfg_.policy) {
      case Policy::kDchne:
        out = dchne_elect(nodes_, cfg_.cluster_count, ctx_);
        break;
      case Policy::kLeach:
        out = leach_elect(nodes_, cfg_.cluster_count, round, cfg_.arena.node_count, leach_epoch_,
                          ctx_);
        break;
      case Policy::kRrch:
        if (round == 0) rrch_ = rrch_form_clusters(nodes_, cfg_.cluster_count, ctx_);
        out = rrch_elect(nodes_, rrch_, ctx_);
        break;
    }
    if (observer_) observer_(frame, true, nodes_, out);

    for (Node& n : nodes_) {
      n.role = Role::kNone;
      n.cluster.reset();
    }
    heads_ = out.chn_ids;
    net_ = out.net;
    for (const auto& [id, k] : out.membership) {
      nodes_[id].cluster = k;
      nodes_[id].role = Role::kMember;
    }
    for (std::uint32_t h : heads_) nodes_[h].role = Role::kHead;
    apply_charges(out);
  }

  // A cluster whose head died re-runs the residual election among its own
  // surviving members before the next frame's data phase.
  void replace_dead_heads(std::size_t frame) {
    for (std::size_t k = 0; k < heads_.size(); ++k) {
      if (nodes_[heads_[k]].alive) continue;
      std::vector<Node> cluster;
      for (const Node& n : nodes_) {
        if (n.alive && n.cluster == k) cluster.push_back(n);
      }
      if (cluster.empty()) continue;
      const ElectionOutcome out = dchne_elect(cluster, 1, ctx_);
      if (observer_) observer_(frame, false, cluster, out);
      heads_[k] = out.chn_ids.front();
      for (const Node& n : cluster) nodes_[n.id].role = Role::kMember;
      nodes_[heads_[k]].role = Role::kHead;
      apply_charges(out);
    }
  }

  void apply_charges(const ElectionOutcome& out) {
    for (const auto& [id, joules] : out.control_energy_charged) {
      debit(nodes_[id], consumed_[id], joules);
      if (!nodes_[id].alive) nodes_[id].cluster.reset();
    }
  }

  FramePlan plan_frame() {
    tx_per_cluster_.assign(heads_.size(), 0);
    forwards_.assign(heads_.size(), 0);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const Node& n = nodes_[i];
      transmits_[i] = n.alive && n.role == Role::kMember && awake_[i] && event_[i] ? 1 : 0;
      if (transmits_[i]) ++tx_per_cluster_[*n.cluster];
    }
    for (std::size_t k = 0; k < heads_.size(); ++k) {
      const Node& h = nodes_[heads_[k]];
      const bool head_live = h.alive && h.role == Role::kHead;
      forwards_[k] = head_live && (tx_per_cluster_[k] > 0 || event_[h.id]) ? 1 : 0;
      packets_ += forwards_[k];
    }

    FramePlan plan;
    plan.net = net_;
    plan.d_size = cfg_.scenario.d_size;
    plan.bs = cfg_.arena.bs_position;
    plan.transmits = transmits_;
    plan.tx_per_cluster = tx_per_cluster_;
    plan.forwards = forwards_;
    return plan;
  }

  FrameRecord snapshot(std::size_t frame) const {
    FrameRecord r;
    r.frame = frame;
    r.packets_delivered_cum = packets_;
    for (const Node& n : nodes_) r.alive += n.alive ? 1 : 0;
    for (std::uint32_t h : heads_) {
      if (nodes_[h].alive && nodes_[h].role == Role::kHead) r.chn_ids.push_back(h);
    }
    if (cfg_.record_residuals) {
      r.residuals.reserve(nodes_.size());
      for (const Node& n : nodes_) r.residuals.push_back(n.residual);
    }
    return r;
  }

  const SimConfig& cfg_;
  const ElectionObserver& observer_;
  ElectionContext ctx_;
  std::vector<Node> nodes_;
  std::vector<Joules> consumed_;
  std::vector<std::uint8_t> awake_, event_, transmits_, forwards_;
  std::vector<std::uint32_t> tx_per_cluster_;
  std::vector<std::uint32_t> heads_;
  NetworkShape net_;
  LeachEpoch leach_epoch_;
  RrchClusters rrch_;
  std::uint64_t packets_ = 0;
};

}  // namespace

SimTrace run(const SimConfig& cfg, const ElectionObserver& observer) {
  cfg.validate();
  return Simulation(cfg, observer).run();
}

std::optional<std::size_t> network_lifetime(const SimTrace& trace, std::size_t threshold) {
  for (const FrameRecord& r : trace.records) {
    if (r.alive < threshold) return r.frame;
  }
  return std::nullopt;
}

}  // namespace dchne
