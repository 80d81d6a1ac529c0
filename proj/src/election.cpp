#include "dchne/election.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "dchne/errors.hpp"
#include "dchne/rng.hpp"

namespace dchne {

namespace {

constexpr int kPartitionIterations = 20;

std::unordered_map<std::uint32_t, std::size_t> index_by_id(std::span<const Node> nodes) {
  std::unordered_map<std::uint32_t, std::size_t> out;
  out.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) out.emplace(nodes[i].id, i);
  return out;
}

std::vector<std::size_t> alive_indices(std::span<const Node> nodes) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].alive) out.push_back(i);
  }
  std::sort(out.begin(), out.end(),
            [&](std::size_t a, std::size_t b) { return nodes[a].id < nodes[b].id; });
  return out;
}

std::size_t nearest_centre(const Position& p, std::span<const Position> centres) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < centres.size(); ++k) {
    const double d = distance(p, centres[k]);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

// Preamble for every alive participant, handshake for heads and members, and
// the head's announcement multicast.
void charge_control(std::span<const Node> nodes, ElectionOutcome& out, const ElectionContext& ctx) {
  std::size_t alive = 0;
  for (const Node& n : nodes) alive += n.alive ? 1 : 0;
  out.net = NetworkShape{ctx.area_side, alive, out.chn_ids.size()};

  const Joules preamble = static_cast<double>(ctx.msgs.d_preamble) * ctx.energy.e_radio;
  const Joules head_cost = setup_energy_chn(ctx.msgs, out.net, ctx.energy) +
                           tx_intra(ctx.msgs.d_announce, ctx.area_side, out.net.clusters, ctx.energy);
  const Joules member_cost = setup_energy_nchn(ctx.msgs, out.net, ctx.energy);

  std::set<std::uint32_t> heads(out.chn_ids.begin(), out.chn_ids.end());
  for (const auto& [id, cluster] : out.membership) {
    (void)cluster;
    out.control_energy_charged[id] = preamble + (heads.contains(id) ? head_cost : member_cost);
  }
}

void require_alive(const std::vector<std::size_t>& alive) {
  if (alive.empty()) throw EmptyNetworkError("election over a network with no alive node");
}

}  // namespace

std::map<std::uint32_t, std::uint32_t> geometric_partition(std::span<const Node> nodes,
                                                           std::size_t k, std::uint64_t seed) {
  const std::vector<std::size_t> alive = alive_indices(nodes);
  std::map<std::uint32_t, std::uint32_t> out;
  if (alive.empty() || k == 0) return out;
  k = std::min(k, alive.size());

  // Initial centres: the k alive nodes with the smallest seeded hash.
  std::vector<std::size_t> order = alive;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ha = stream_bits(seed, Stream::kPartition, nodes[a].id);
    const auto hb = stream_bits(seed, Stream::kPartition, nodes[b].id);
    return ha != hb ? ha < hb : nodes[a].id < nodes[b].id;
  });
  std::vector<Position> centres;
  for (std::size_t i = 0; i < k; ++i) centres.push_back(nodes[order[i]].pos);

  std::vector<std::size_t> assign(alive.size(), 0);
  for (int iter = 0; iter < kPartitionIterations; ++iter) {
    for (std::size_t i = 0; i < alive.size(); ++i) {
      assign[i] = nearest_centre(nodes[alive[i]].pos, centres);
    }
    std::vector<Position> sum(k);
    std::vector<std::size_t> count(k, 0);
    for (std::size_t i = 0; i < alive.size(); ++i) {
      sum[assign[i]].x += nodes[alive[i]].pos.x;
      sum[assign[i]].y += nodes[alive[i]].pos.y;
      ++count[assign[i]];
    }
    for (std::size_t g = 0; g < k; ++g) {
      if (count[g] > 0) {
        centres[g] = {sum[g].x / static_cast<double>(count[g]),
                      sum[g].y / static_cast<double>(count[g])};
      }
    }
  }
  for (std::size_t i = 0; i < alive.size(); ++i) {
    assign[i] = nearest_centre(nodes[alive[i]].pos, centres);
  }

  // Refill empty groups with the node farthest from its centre among groups
  // that can spare one.
  std::vector<std::size_t> count(k, 0);
  for (std::size_t a : assign) ++count[a];
  for (std::size_t g = 0; g < k; ++g) {
    if (count[g] > 0) continue;
    std::size_t pick = alive.size();
    double far = -1.0;
    for (std::size_t i = 0; i < alive.size(); ++i) {
      if (count[assign[i]] < 2) continue;
      const double d = distance(nodes[alive[i]].pos, centres[assign[i]]);
      if (d > far) {
        far = d;
        pick = i;
      }
    }
    --count[assign[pick]];
    assign[pick] = g;
    count[g] = 1;
    centres[g] = nodes[alive[pick]].pos;
  }

  for (std::size_t i = 0; i < alive.size(); ++i) {
    out[nodes[alive[i]].id] = static_cast<std::uint32_t>(assign[i]);
  }
  return out;
}

std::uint32_t max_residual_candidate(std::span<const Node> nodes,
                                     std::span<const std::uint32_t> candidate_ids) {
  if (candidate_ids.empty()) throw std::invalid_argument("no election candidates");
  const auto index = index_by_id(nodes);
  std::uint32_t best = candidate_ids.front();
  for (std::uint32_t id : candidate_ids) {
    const Joules r = nodes[index.at(id)].residual;
    const Joules rb = nodes[index.at(best)].residual;
    if (r > rb || (r == rb && id < best)) best = id;
  }
  return best;
}

std::map<std::uint32_t, std::uint32_t> assign_nearest(std::span<const Node> nodes,
                                                      std::span<const std::uint32_t> heads) {
  const auto index = index_by_id(nodes);
  std::vector<Position> centres;
  centres.reserve(heads.size());
  for (std::uint32_t h : heads) centres.push_back(nodes[index.at(h)].pos);

  std::map<std::uint32_t, std::uint32_t> out;
  for (std::size_t k = 0; k < heads.size(); ++k) out[heads[k]] = static_cast<std::uint32_t>(k);
  for (const Node& n : nodes) {
    if (!n.alive || out.contains(n.id)) continue;
    out[n.id] = static_cast<std::uint32_t>(nearest_centre(n.pos, centres));
  }
  return out;
}

ElectionOutcome dchne_elect(std::span<const Node> nodes, std::size_t c, const ElectionContext& ctx) {
  if (c == 0) throw std::invalid_argument("cluster count must be >= 1");
  const std::vector<std::size_t> alive = alive_indices(nodes);
  require_alive(alive);
  const std::size_t target = std::min(c, alive.size());

  // Current groupings, keyed by label.
  std::map<std::uint32_t, std::vector<std::uint32_t>> groups;
  bool labelled = true;
  for (std::size_t i : alive) {
    if (!nodes[i].cluster) {
      labelled = false;
      break;
    }
    groups[*nodes[i].cluster].push_back(nodes[i].id);
  }
  if (!labelled || groups.size() != target) {
    groups.clear();
    for (const auto& [id, g] : geometric_partition(nodes, target, ctx.seed)) groups[g].push_back(id);
  }

  ElectionOutcome out;
  for (const auto& [label, members] : groups) {
    (void)label;
    out.chn_ids.push_back(max_residual_candidate(nodes, members));
  }
  std::sort(out.chn_ids.begin(), out.chn_ids.end());
  out.membership = assign_nearest(nodes, out.chn_ids);
  charge_control(nodes, out, ctx);
  return out;
}

std::size_t leach_epoch_length(std::size_t c, std::size_t total_nodes) {
  if (c == 0 || total_nodes == 0) throw std::invalid_argument("leach: c and S must be >= 1");
  if (c >= total_nodes) return 1;
  return (total_nodes + c - 1) / c;
}

double leach_threshold(std::size_t c, std::size_t total_nodes, std::size_t round_index) {
  const std::size_t epoch = leach_epoch_length(c, total_nodes);
  const std::size_t phase = round_index % epoch;
  // The closing round of an epoch always has T >= 1 analytically; pin it so
  // rounding cannot leave a node unserved.
  if (phase + 1 == epoch) return 1.0;
  const double p = static_cast<double>(c) / static_cast<double>(total_nodes);
  return p / (1.0 - p * static_cast<double>(phase));
}

ElectionOutcome leach_elect(std::span<const Node> nodes, std::size_t c, std::size_t round_index,
                            std::size_t total_nodes, LeachEpoch& epoch,
                            const ElectionContext& ctx) {
  if (c == 0) throw std::invalid_argument("cluster count must be >= 1");
  const std::vector<std::size_t> alive = alive_indices(nodes);
  require_alive(alive);

  if (round_index % leach_epoch_length(c, total_nodes) == 0) epoch.served.clear();
  const double threshold = leach_threshold(c, total_nodes, round_index);

  ElectionOutcome out;
  for (std::size_t i : alive) {
    const std::uint32_t id = nodes[i].id;
    if (epoch.served.contains(id)) continue;
    if (stream_unit(ctx.seed, Stream::kLeachCoin, round_index, id) < threshold) {
      out.chn_ids.push_back(id);
    }
  }
  if (out.chn_ids.empty()) {
    std::vector<std::uint32_t> ids;
    for (std::size_t i : alive) ids.push_back(nodes[i].id);
    out.chn_ids.push_back(max_residual_candidate(nodes, ids));
  }
  epoch.served.insert(out.chn_ids.begin(), out.chn_ids.end());
  out.membership = assign_nearest(nodes, out.chn_ids);
  charge_control(nodes, out, ctx);
  return out;
}

RrchClusters rrch_form_clusters(std::span<const Node> nodes, std::size_t c,
                                const ElectionContext& ctx) {
  if (c == 0) throw std::invalid_argument("cluster count must be >= 1");
  require_alive(alive_indices(nodes));
  const auto partition = geometric_partition(nodes, c, ctx.seed);
  std::size_t groups = 0;
  for (const auto& [id, g] : partition) groups = std::max<std::size_t>(groups, g + 1);

  RrchClusters out;
  out.members.resize(groups);
  out.last_head.resize(groups);
  for (const auto& [id, g] : partition) out.members[g].push_back(id);  // map order: ascending ids
  return out;
}

ElectionOutcome rrch_elect(std::span<const Node> nodes, RrchClusters& clusters,
                           const ElectionContext& ctx) {
  require_alive(alive_indices(nodes));
  const auto index = index_by_id(nodes);
  const auto is_alive = [&](std::uint32_t id) {
    const auto it = index.find(id);
    return it != index.end() && nodes[it->second].alive;
  };

  ElectionOutcome out;
  std::vector<std::size_t> live_clusters;
  for (std::size_t g = 0; g < clusters.members.size(); ++g) {
    const auto& members = clusters.members[g];
    if (std::none_of(members.begin(), members.end(), is_alive)) continue;
    // First alive id strictly after the previous head, wrapping around.
    auto start = members.begin();
    if (clusters.last_head[g]) {
      start = std::upper_bound(members.begin(), members.end(), *clusters.last_head[g]);
    }
    auto it = std::find_if(start, members.end(), is_alive);
    if (it == members.end()) it = std::find_if(members.begin(), members.end(), is_alive);
    clusters.last_head[g] = *it;
    out.chn_ids.push_back(*it);
    live_clusters.push_back(g);
  }
  for (std::size_t k = 0; k < live_clusters.size(); ++k) {
    for (std::uint32_t id : clusters.members[live_clusters[k]]) {
      if (is_alive(id)) out.membership[id] = static_cast<std::uint32_t>(k);
    }
  }
  charge_control(nodes, out, ctx);
  return out;
}

}  // namespace dchne
