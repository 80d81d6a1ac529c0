#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "dchne/errors.hpp"
#include "dchne/metrics_io.hpp"

using namespace dchne;
namespace fs = std::filesystem;

namespace {

RunSummary random_summary(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> len(0, 40);
  std::uniform_int_distribution<std::uint64_t> big(0, 1ULL << 40);
  RunSummary s;
  s.policy = std::vector<std::string>{"dchne", "leach", "rrch"}[rng() % 3];
  s.scenario = rng() % 2 ? "scenario1" : "scenario2";
  s.seed = big(rng);
  s.node_count = 1 + rng() % 200;
  s.frames_run = len(rng);
  s.total_packets = big(rng);
  if (rng() % 2) s.first_death_frame = rng() % 10000;
  if (rng() % 2) s.all_dead_frame = rng() % 10000;
  s.alive_curve = {};
  for (std::size_t i = 0, n = len(rng); i < n; ++i) {
    s.alive_curve.push_back({i, rng() % 200, big(rng), rng() % 20});
  }
  return s;
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("dchne_test_" + name);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SimTrace hand_trace() {
  SimTrace t;
  t.config.arena.node_count = 3;
  t.config.arena.seed = 77;
  t.config.policy = Policy::kRrch;
  t.config.scenario.kind = ScenarioKind::kScenario2;
  t.records = {{0, 3, 2, {0, 2}, {}}, {1, 2, 4, {0}, {}}, {2, 0, 5, {}, {}}};
  t.termination = Termination::kAllDead;
  return t;
}

}  // namespace

TEST_CASE("summarize") {
  SUBCASE("empty trace") {
    const RunSummary s = summarize(SimTrace{});
    CHECK(s.total_packets == 0);
    CHECK(s.frames_run == 0);
    CHECK_FALSE(s.first_death_frame);
    CHECK_FALSE(s.all_dead_frame);
    CHECK(s.alive_curve.empty());
  }
  SUBCASE("hand-built trace") {
    const RunSummary s = summarize(hand_trace());
    CHECK(s.policy == "rrch");
    CHECK(s.scenario == "scenario2");
    CHECK(s.seed == 77);
    CHECK(s.total_packets == 5);
    CHECK(s.first_death_frame == 1);
    CHECK(s.all_dead_frame == 2);
    CHECK(s.alive_curve ==
          std::vector<CurvePoint>{{0, 3, 2, 2}, {1, 2, 4, 1}, {2, 0, 5, 0}});
  }
  SUBCASE("simulated traces match an independent re-scan") {
    for (Policy p : {Policy::kDchne, Policy::kLeach, Policy::kRrch}) {
      SimConfig cfg;
      cfg.policy = p;
      cfg.arena.node_count = 40;
      cfg.cluster_count = 4;
      cfg.initial_energy = 0.3;
      const SimTrace t = run(cfg);
      const RunSummary s = summarize(t);
      std::optional<std::size_t> first, last;
      for (const FrameRecord& r : t.records) {
        if (!first && r.alive < 40) first = r.frame;
        if (!last && r.alive == 0) last = r.frame;
      }
      CHECK(s.first_death_frame == first);
      CHECK(s.all_dead_frame == last);
      CHECK(s.total_packets == t.records.back().packets_delivered_cum);
      CHECK(s.alive_curve.size() == t.records.size());
    }
  }
}

TEST_CASE("delta and compare") {
  RunSummary a, b;
  a.policy = "dchne";
  b.policy = "leach";
  a.scenario = b.scenario = "scenario1";
  a.total_packets = 10;
  b.total_packets = 7;
  a.frames_run = b.frames_run = 100;
  a.all_dead_frame = 90;
  CHECK(delta(a, b).packets == 3);
  CHECK(delta(a, b).last_death == -10);  // b never died: censored at 100
  CHECK(delta(a, a) == MetricDeltas{});

  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const RunSummary x = random_summary(rng), y = random_summary(rng);
    const MetricDeltas d = delta(x, y), e = delta(y, x);
    CHECK(d.packets == -e.packets);
    CHECK(d.first_death == -e.first_death);
    CHECK(d.last_death == -e.last_death);
  }

  SUBCASE("identical summaries give zero deltas") {
    RunSummary r = a;
    r.policy = "rrch";
    RunSummary l = a;
    l.policy = "leach";
    const std::vector<RunSummary> in{a, l, r};
    const ComparisonTable t = compare(in);
    REQUIRE(t.rows.size() == 2);
    for (const ComparisonRow& row : t.rows) CHECK(row.dchne_minus_baseline == MetricDeltas{});
  }

  SUBCASE("grouping errors") {
    const std::vector<RunSummary> no_dchne{b};
    CHECK_THROWS_AS(compare(no_dchne), GroupingError);
    const std::vector<RunSummary> only_dchne{a};
    CHECK_THROWS_AS(compare(only_dchne), GroupingError);
    const std::vector<RunSummary> dup{a, b, b};
    CHECK_THROWS_AS(compare(dup), GroupingError);
  }

  SUBCASE("aggregates over ten seeds") {
    std::vector<RunSummary> in;
    std::map<std::string, std::vector<double>> packets;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      for (const char* policy : {"dchne", "leach", "rrch"}) {
        RunSummary s = random_summary(rng);
        s.policy = policy;
        s.scenario = "scenario1";
        s.seed = seed;
        in.push_back(s);
      }
      const auto& d = in[in.size() - 3];
      packets["leach"].push_back(double(d.total_packets) - double(in[in.size() - 2].total_packets));
      packets["rrch"].push_back(double(d.total_packets) - double(in[in.size() - 1].total_packets));
    }
    const ComparisonTable t = compare(in);
    CHECK(t.rows.size() == 20);
    REQUIRE(t.aggregates.size() == 2);
    for (const ComparisonAggregate& agg : t.aggregates) {
      const auto& v = packets.at(agg.baseline);
      double sum = 0, lo = v[0], hi = v[0];
      for (double x : v) {
        sum += x;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
      CHECK(agg.groups == 10);
      CHECK(agg.packets.mean == doctest::Approx(sum / 10));
      CHECK(double(agg.packets.min) == lo);
      CHECK(double(agg.packets.max) == hi);
    }
  }
}

TEST_CASE("CSV alive curves") {
  CHECK(curve_to_csv({}) == "frame,alive,packets_cum,chn_count\n");
  const SimTrace t = [] {
    SimTrace x = hand_trace();
    x.records.pop_back();
    return x;
  }();
  const std::string two = render(t, Format::kCsv);
  CHECK(std::count(two.begin(), two.end(), '\n') == 3);
  CHECK(two == "frame,alive,packets_cum,chn_count\n0,3,2,2\n1,2,4,1\n");

  std::mt19937_64 rng(17);
  for (int i = 0; i < 100; ++i) {
    const RunSummary s = random_summary(rng);
    CHECK(curve_from_csv(curve_to_csv(s.alive_curve)) == s.alive_curve);
  }
  CHECK_THROWS(curve_from_csv("frame,alive\n1,2\n"));
  CHECK_THROWS(curve_from_csv("frame,alive,packets_cum,chn_count\n1,2,x,4\n"));
}

TEST_CASE("JSON summaries round-trip") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 100; ++i) {
    const RunSummary s = random_summary(rng);
    const std::string text = to_json(s).dump();
    CHECK(summary_from_json(nlohmann::json::parse(text)) == s);
  }
  const auto j = to_json(summarize(hand_trace()));
  CHECK(j.contains("total_packets"));
  CHECK(j.contains("first_death_frame"));
  CHECK(j["alive_curve"][0].contains("packets_cum"));
}

TEST_CASE("config JSON") {
  SimConfig cfg;
  cfg.arena.seed = 9;
  cfg.policy = Policy::kLeach;
  cfg.scenario.kind = ScenarioKind::kScenario2;
  cfg.scenario.duty_cycle = 0.25;
  cfg.energy.e_sched = 1e-8;
  cfg.arena.bs_position = {1.5, -20.0};
  SimConfig back;
  apply_config_json(to_json(cfg), back);
  CHECK(to_json(back) == to_json(cfg));

  SimConfig partial;
  apply_config_json(nlohmann::json::parse(R"({"cluster_count": 7, "scenario": {"d_size": 800}})"),
                    partial);
  CHECK(partial.cluster_count == 7);
  CHECK(partial.scenario.d_size == 800);
  CHECK(partial.arena.node_count == 190);

  CHECK_THROWS_AS(apply_config_json(nlohmann::json::parse(R"({"clusters": 7})"), partial),
                  ConfigError);
  CHECK_THROWS_AS(apply_config_json(nlohmann::json::parse(R"({"policy": "sisr"})"), partial),
                  ConfigError);
  CHECK_THROWS_AS(apply_config_json(nlohmann::json::parse(R"({"max_frames": "many"})"), partial),
                  ConfigError);
}

TEST_CASE("export sinks") {
  CHECK(parse_format("csv") == Format::kCsv);
  CHECK(parse_format("json") == Format::kJson);
  CHECK_THROWS_AS(parse_format("xml"), UsageError);

  const fs::path csv = temp_file("empty.csv");
  CHECK(export_summary(RunSummary{}, Format::kCsv, csv) == 34);
  CHECK(slurp(csv) == "frame,alive,packets_cum,chn_count\n");

  const RunSummary s = summarize(hand_trace());
  const fs::path json = temp_file("summary.json");
  const std::size_t bytes = export_summary(s, Format::kJson, json);
  CHECK(bytes == fs::file_size(json));
  CHECK(summary_from_json(nlohmann::json::parse(slurp(json))) == s);

  const fs::path trace = temp_file("trace.json");
  export_trace(hand_trace(), Format::kJson, trace);
  const auto tj = nlohmann::json::parse(slurp(trace));
  CHECK(tj["termination"] == "all_dead");
  CHECK(tj["records"].size() == 3);
  CHECK(tj["records"][0]["chn_ids"] == nlohmann::json::array({0, 2}));

  CHECK_THROWS_AS(export_summary(s, Format::kCsv, "/nonexistent-dir/x.csv"), IoError);
  fs::remove(csv);
  fs::remove(json);
  fs::remove(trace);
}
