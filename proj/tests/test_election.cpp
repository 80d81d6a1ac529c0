#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "dchne/election.hpp"
#include "dchne/errors.hpp"

using namespace dchne;

namespace {

std::vector<Node> random_nodes(std::size_t n, std::uint64_t seed) {
  ArenaConfig cfg;
  cfg.node_count = n;
  cfg.seed = seed;
  const auto pos = place_nodes(cfg);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> energy(0.1, 3.5);
  std::vector<Node> nodes(n);
  for (std::size_t i = 0; i < n; ++i) {
    nodes[i].id = static_cast<std::uint32_t>(i);
    nodes[i].pos = pos[i];
    nodes[i].residual = energy(rng);
  }
  return nodes;
}

// Structural checks shared by every policy.
void check_outcome(std::span<const Node> nodes, const ElectionOutcome& out) {
  std::map<std::uint32_t, const Node*> by_id;
  for (const Node& n : nodes) by_id[n.id] = &n;
  std::vector<std::size_t> size(out.chn_ids.size(), 0);
  for (std::size_t k = 0; k < out.chn_ids.size(); ++k) {
    CHECK(by_id.at(out.chn_ids[k])->alive);
    CHECK(out.membership.at(out.chn_ids[k]) == k);
  }
  for (const Node& n : nodes) {
    CHECK(out.membership.contains(n.id) == n.alive);
    CHECK(out.control_energy_charged.contains(n.id) == n.alive);
    if (n.alive) ++size[out.membership.at(n.id)];
  }
  for (std::size_t s : size) CHECK(s > 0);
}

// No member is strictly closer to another head than to its own.
void check_nearest(std::span<const Node> nodes, const ElectionOutcome& out) {
  std::map<std::uint32_t, Position> pos;
  for (const Node& n : nodes) pos[n.id] = n.pos;
  for (const auto& [id, k] : out.membership) {
    const double own = distance(pos[id], pos[out.chn_ids[k]]);
    for (std::uint32_t h : out.chn_ids) CHECK(own <= distance(pos[id], pos[h]));
  }
}

const ElectionContext kCtx{};

}  // namespace

TEST_CASE("max-residual winner with lowest-id tie-break") {
  std::vector<Node> nodes(3);
  const std::uint32_t ids[] = {2, 5, 1};
  const double residual[] = {3.1, 2.0, 3.1};
  for (int i = 0; i < 3; ++i) {
    nodes[i].id = ids[i];
    nodes[i].residual = residual[i];
    nodes[i].pos = {10.0 * i, 0.0};
  }
  const auto out = dchne_elect(nodes, 1, kCtx);
  REQUIRE(out.chn_ids.size() == 1);
  CHECK(out.chn_ids[0] == 1);
  check_outcome(nodes, out);
}

TEST_CASE("single alive node heads the sole cluster") {
  auto nodes = random_nodes(4, 1);
  nodes[0].alive = nodes[1].alive = nodes[3].alive = false;
  const auto out = dchne_elect(nodes, 3, kCtx);
  CHECK(out.chn_ids == std::vector<std::uint32_t>{2});
  CHECK(out.net.nodes == 1);
  CHECK(out.net.clusters == 1);
  check_outcome(nodes, out);
}

TEST_CASE("empty network is an error") {
  auto nodes = random_nodes(3, 1);
  for (Node& n : nodes) n.alive = false;
  CHECK_THROWS_AS(dchne_elect(nodes, 2, kCtx), EmptyNetworkError);
  LeachEpoch epoch;
  CHECK_THROWS_AS(leach_elect(nodes, 2, 0, 3, epoch, kCtx), EmptyNetworkError);
  CHECK_THROWS_AS(dchne_elect(std::span<const Node>{}, 1, kCtx), EmptyNetworkError);
}

TEST_CASE("cluster count collapses to the alive count") {
  auto nodes = random_nodes(10, 8);
  for (std::size_t i = 3; i < 10; ++i) nodes[i].alive = false;
  const auto out = dchne_elect(nodes, 5, kCtx);
  CHECK(out.chn_ids.size() == 3);
  check_outcome(nodes, out);
}

TEST_CASE("labelled groups elect their brute-force max-residual member") {
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    auto nodes = random_nodes(50, 100 + trial);
    std::mt19937_64 rng(trial);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      nodes[i].cluster = static_cast<std::uint32_t>(i < 5 ? i : rng() % 5);
    }
    const auto out = dchne_elect(nodes, 5, kCtx);
    REQUIRE(out.chn_ids.size() == 5);
    for (std::uint32_t g = 0; g < 5; ++g) {
      std::uint32_t best = UINT32_MAX;
      double best_r = -1.0;
      for (const Node& n : nodes) {
        if (n.cluster != g) continue;
        if (n.residual > best_r || (n.residual == best_r && n.id < best)) {
          best_r = n.residual;
          best = n.id;
        }
      }
      CHECK(std::count(out.chn_ids.begin(), out.chn_ids.end(), best) == 1);
    }
    check_outcome(nodes, out);
    check_nearest(nodes, out);
  }
}

TEST_CASE("unlabelled nodes are partitioned geometrically") {
  const auto nodes = random_nodes(190, 2);
  const auto groups = geometric_partition(nodes, 10, 2);
  CHECK(groups.size() == 190);
  std::set<std::uint32_t> labels;
  for (const auto& [id, g] : groups) labels.insert(g);
  CHECK(labels.size() == 10);
  CHECK(geometric_partition(nodes, 10, 2) == groups);

  const auto out = dchne_elect(nodes, 10, kCtx);
  CHECK(out.chn_ids.size() == 10);
  check_outcome(nodes, out);
  check_nearest(nodes, out);
}

TEST_CASE("control charges follow the handshake costs") {
  const auto nodes = random_nodes(30, 4);
  const auto out = dchne_elect(nodes, 3, kCtx);
  const NetworkShape net{350.0, 30, 3};
  const EnergyParams& p = kCtx.energy;
  const double preamble = 200 * p.e_radio;
  const double head = preamble + setup_energy_chn(kCtx.msgs, net, p) + tx_intra(200, 350.0, 3, p);
  const double member = preamble + setup_energy_nchn(kCtx.msgs, net, p);
  const std::set<std::uint32_t> heads(out.chn_ids.begin(), out.chn_ids.end());
  for (const auto& [id, joules] : out.control_energy_charged) {
    CHECK(joules == doctest::Approx(heads.contains(id) ? head : member).epsilon(1e-14));
  }
}

TEST_CASE("LEACH threshold schedule") {
  CHECK(leach_epoch_length(5, 100) == 20);
  CHECK(leach_epoch_length(10, 190) == 19);
  CHECK(leach_epoch_length(3, 10) == 4);
  CHECK(leach_threshold(5, 100, 0) == doctest::Approx(0.05));
  CHECK(leach_threshold(5, 100, 1) == doctest::Approx(0.05 / 0.95));
  CHECK(leach_threshold(5, 100, 19) == 1.0);
  CHECK(leach_threshold(5, 100, 20) == doctest::Approx(0.05));
  CHECK(leach_threshold(10, 10, 7) == 1.0);
}

TEST_CASE("LEACH with P = 1 elects every alive node") {
  auto nodes = random_nodes(12, 6);
  nodes[4].alive = false;
  LeachEpoch epoch;
  for (std::size_t round = 0; round < 5; ++round) {
    const auto out = leach_elect(nodes, 12, round, 12, epoch, kCtx);
    CHECK(out.chn_ids.size() == 11);
    check_outcome(nodes, out);
  }
}

TEST_CASE("LEACH heads every alive node at least once per epoch") {
  auto nodes = random_nodes(100, 9);
  for (std::size_t i = 0; i < 100; i += 7) nodes[i].alive = false;
  LeachEpoch epoch;
  const std::size_t len = leach_epoch_length(5, 100);
  for (std::size_t e = 0; e < 5; ++e) {
    std::map<std::uint32_t, int> count;
    for (std::size_t r = 0; r < len; ++r) {
      const auto out = leach_elect(nodes, 5, e * len + r, 100, epoch, ElectionContext{.seed = e});
      check_outcome(nodes, out);
      check_nearest(nodes, out);
      for (std::uint32_t h : out.chn_ids) ++count[h];
    }
    for (const Node& n : nodes) {
      if (n.alive) CHECK(count[n.id] >= 1);
      if (!n.alive) CHECK(count[n.id] == 0);
    }
  }
}

TEST_CASE("LEACH falls back to the max-residual node") {
  auto nodes = random_nodes(20, 10);
  LeachEpoch epoch;
  for (const Node& n : nodes) epoch.served.insert(n.id);
  const auto out = leach_elect(nodes, 2, 1, 20, epoch, kCtx);
  REQUIRE(out.chn_ids.size() == 1);
  std::vector<std::uint32_t> ids;
  for (const Node& n : nodes) ids.push_back(n.id);
  CHECK(out.chn_ids[0] == max_residual_candidate(nodes, ids));
}

TEST_CASE("LEACH mean heads per round is close to c (Monte Carlo)") {
  const auto nodes = random_nodes(100, 11);
  LeachEpoch epoch;
  ElectionContext ctx;
  ctx.seed = 12345;
  std::size_t total = 0;
  const std::size_t rounds = 10000;
  for (std::size_t r = 0; r < rounds; ++r) total += leach_elect(nodes, 5, r, 100, epoch, ctx).chn_ids.size();
  const double mean = static_cast<double>(total) / rounds;
  CHECK(mean > 4.5);
  CHECK(mean < 5.5);
}

TEST_CASE("RRCH rotation order and dead-member skipping") {
  std::vector<Node> nodes(3);
  const std::uint32_t ids[] = {9, 3, 7};
  for (int i = 0; i < 3; ++i) {
    nodes[i].id = ids[i];
    nodes[i].pos = {1.0 * i, 1.0};
  }
  RrchClusters clusters;
  clusters.members = {{3, 7, 9}};
  clusters.last_head = {std::nullopt};
  std::vector<std::uint32_t> heads;
  for (int r = 0; r < 4; ++r) heads.push_back(rrch_elect(nodes, clusters, kCtx).chn_ids.at(0));
  CHECK(heads == std::vector<std::uint32_t>{3, 7, 9, 3});

  clusters.last_head = {std::nullopt};
  heads.clear();
  heads.push_back(rrch_elect(nodes, clusters, kCtx).chn_ids.at(0));
  nodes[2].alive = false;  // id 7
  for (int r = 1; r < 3; ++r) {
    const auto out = rrch_elect(nodes, clusters, kCtx);
    heads.push_back(out.chn_ids.at(0));
    CHECK_FALSE(out.membership.contains(7));
  }
  CHECK(heads == std::vector<std::uint32_t>{3, 9, 3});
}

TEST_CASE("RRCH heads each member exactly once per |members| rounds") {
  const auto nodes = random_nodes(60, 13);
  auto clusters = rrch_form_clusters(nodes, 6, kCtx);
  REQUIRE(clusters.members.size() == 6);
  std::size_t covered = 0;
  for (const auto& m : clusters.members) {
    CHECK(std::is_sorted(m.begin(), m.end()));
    covered += m.size();
  }
  CHECK(covered == 60);

  const auto frozen = clusters.members;
  for (std::size_t g = 0; g < frozen.size(); ++g) {
    auto state = clusters;
    std::map<std::uint32_t, int> count;
    for (std::size_t r = 0; r < frozen[g].size(); ++r) {
      const auto out = rrch_elect(nodes, state, kCtx);
      check_outcome(nodes, out);
      ++count[out.chn_ids.at(g)];
    }
    CHECK(count.size() == frozen[g].size());
    for (const auto& [id, c] : count) CHECK(c == 1);
    CHECK(state.members == frozen);
  }
}
