#include "dchne/metrics_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "dchne/errors.hpp"

namespace dchne {

using nlohmann::json;

std::vector<CurvePoint> alive_curve(const SimTrace& trace) {
  std::vector<CurvePoint> out;
  out.reserve(trace.records.size());
  for (const FrameRecord& r : trace.records) {
    out.push_back({r.frame, r.alive, r.packets_delivered_cum, r.chn_ids.size()});
  }
  return out;
}

RunSummary summarize(const SimTrace& trace) {
  RunSummary s;
  s.policy = std::string(policy_name(trace.config.policy));
  s.scenario = std::string(scenario_name(trace.config.scenario.kind));
  s.seed = trace.config.arena.seed;
  s.node_count = trace.config.arena.node_count;
  s.frames_run = trace.records.size();
  if (!trace.records.empty()) s.total_packets = trace.records.back().packets_delivered_cum;
  s.first_death_frame = network_lifetime(trace, s.node_count);
  s.all_dead_frame = network_lifetime(trace, 1);
  s.alive_curve = alive_curve(trace);
  return s;
}

std::size_t censored_first_death(const RunSummary& s) {
  return s.first_death_frame.value_or(s.frames_run);
}

std::size_t censored_last_death(const RunSummary& s) {
  return s.all_dead_frame.value_or(s.frames_run);
}

MetricDeltas delta(const RunSummary& a, const RunSummary& b) {
  const auto diff = [](std::uint64_t x, std::uint64_t y) {
    return static_cast<std::int64_t>(x) - static_cast<std::int64_t>(y);
  };
  return {diff(a.total_packets, b.total_packets),
          diff(censored_first_death(a), censored_first_death(b)),
          diff(censored_last_death(a), censored_last_death(b))};
}

namespace {

DeltaStats stats_of(const std::vector<std::int64_t>& v) {
  DeltaStats s;
  if (v.empty()) return s;
  s.min = *std::min_element(v.begin(), v.end());
  s.max = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (std::int64_t x : v) sum += static_cast<double>(x);
  s.mean = sum / static_cast<double>(v.size());
  return s;
}

json opt_json(const std::optional<std::size_t>& v) { return v ? json(*v) : json(nullptr); }

std::optional<std::size_t> opt_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<std::size_t>();
}

std::string opt_csv(const std::optional<std::size_t>& v) {
  return v ? std::to_string(*v) : std::string();
}

}  // namespace

ComparisonTable compare(std::span<const RunSummary> summaries) {
  using Key = std::pair<std::string, std::uint64_t>;
  std::map<Key, std::map<std::string, const RunSummary*>> groups;
  for (const RunSummary& s : summaries) {
    auto& g = groups[{s.scenario, s.seed}];
    if (!g.emplace(s.policy, &s).second) {
      throw GroupingError("duplicate policy '" + s.policy + "' in group (" + s.scenario + ", seed " +
                          std::to_string(s.seed) + ")");
    }
  }

  ComparisonTable table;
  std::map<std::pair<std::string, std::string>, std::vector<MetricDeltas>> per_baseline;
  for (const auto& [key, members] : groups) {
    const auto dchne = members.find("dchne");
    if (dchne == members.end() || members.size() < 2) {
      throw GroupingError("group (" + key.first + ", seed " + std::to_string(key.second) +
                          ") needs one dchne run and at least one baseline");
    }
    for (const auto& [policy, summary] : members) {
      if (policy == "dchne") continue;
      const MetricDeltas d = delta(*dchne->second, *summary);
      table.rows.push_back({key.first, key.second, policy, d});
      per_baseline[{key.first, policy}].push_back(d);
    }
  }

  for (const auto& [key, ds] : per_baseline) {
    std::vector<std::int64_t> pk, fd, ld;
    for (const MetricDeltas& d : ds) {
      pk.push_back(d.packets);
      fd.push_back(d.first_death);
      ld.push_back(d.last_death);
    }
    table.aggregates.push_back(
        {key.first, key.second, ds.size(), stats_of(pk), stats_of(fd), stats_of(ld)});
  }
  return table;
}

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::kCsv;
  if (name == "json") return Format::kJson;
  throw UsageError("unknown format '" + std::string(name) + "' (valid: csv, json)");
}

std::string curve_to_csv(std::span<const CurvePoint> curve) {
  std::string out = "frame,alive,packets_cum,chn_count\n";
  for (const CurvePoint& p : curve) {
    out += std::to_string(p.frame) + ',' + std::to_string(p.alive) + ',' +
           std::to_string(p.packets_cum) + ',' + std::to_string(p.chn_count) + '\n';
  }
  return out;
}

std::vector<CurvePoint> curve_from_csv(std::string_view text) {
  std::vector<CurvePoint> out;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "frame,alive,packets_cum,chn_count") {
    throw std::invalid_argument("alive-curve CSV: missing or wrong header");
  }
  const auto field = [](std::string_view s, auto& value) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw std::invalid_argument("alive-curve CSV: bad field '" + std::string(s) + "'");
    }
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> cols;
    std::string_view rest = line;
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos;) {
      cols.push_back(rest.substr(0, pos));
      rest.remove_prefix(pos + 1);
    }
    cols.push_back(rest);
    if (cols.size() != 4) throw std::invalid_argument("alive-curve CSV: expected 4 columns");
    CurvePoint p;
    field(cols[0], p.frame);
    field(cols[1], p.alive);
    field(cols[2], p.packets_cum);
    field(cols[3], p.chn_count);
    out.push_back(p);
  }
  return out;
}

json to_json(const RunSummary& s) {
  json curve = json::array();
  for (const CurvePoint& p : s.alive_curve) {
    curve.push_back({{"frame", p.frame},
                     {"alive", p.alive},
                     {"packets_cum", p.packets_cum},
                     {"chn_count", p.chn_count}});
  }
  return {{"policy", s.policy},
          {"scenario", s.scenario},
          {"seed", s.seed},
          {"node_count", s.node_count},
          {"frames_run", s.frames_run},
          {"total_packets", s.total_packets},
          {"first_death_frame", opt_json(s.first_death_frame)},
          {"all_dead_frame", opt_json(s.all_dead_frame)},
          {"alive_curve", std::move(curve)}};
}

RunSummary summary_from_json(const json& j) {
  RunSummary s;
  s.policy = j.at("policy").get<std::string>();
  s.scenario = j.at("scenario").get<std::string>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.node_count = j.at("node_count").get<std::size_t>();
  s.frames_run = j.at("frames_run").get<std::size_t>();
  s.total_packets = j.at("total_packets").get<std::uint64_t>();
  s.first_death_frame = opt_from(j.at("first_death_frame"));
  s.all_dead_frame = opt_from(j.at("all_dead_frame"));
  for (const json& p : j.at("alive_curve")) {
    s.alive_curve.push_back({p.at("frame").get<std::size_t>(), p.at("alive").get<std::size_t>(),
                             p.at("packets_cum").get<std::uint64_t>(),
                             p.at("chn_count").get<std::size_t>()});
  }
  return s;
}

json to_json(const SimConfig& cfg) {
  return {
      {"arena",
       {{"side_a", cfg.arena.side_a},
        {"bs_position", {{"x", cfg.arena.bs_position.x}, {"y", cfg.arena.bs_position.y}}},
        {"node_count", cfg.arena.node_count},
        {"seed", cfg.arena.seed}}},
      {"energy",
       {{"e_radio", cfg.energy.e_radio},
        {"e_amp", cfg.energy.e_amp},
        {"e_mh", cfg.energy.e_mh},
        {"e_sched", cfg.energy.e_sched},
        {"e_agg", cfg.energy.e_agg}}},
      {"msgs",
       {{"d_adv", cfg.msgs.d_adv},
        {"d_syn", cfg.msgs.d_syn},
        {"d_join", cfg.msgs.d_join},
        {"d_preamble", cfg.msgs.d_preamble},
        {"d_announce", cfg.msgs.d_announce}}},
      {"scenario",
       {{"kind", scenario_name(cfg.scenario.kind)},
        {"event_probability", cfg.scenario.event_probability},
        {"duty_cycle", cfg.scenario.duty_cycle},
        {"d_size", cfg.scenario.d_size},
        {"frames_per_round", cfg.scenario.frames_per_round}}},
      {"policy", policy_name(cfg.policy)},
      {"cluster_count", cfg.cluster_count},
      {"max_frames", cfg.max_frames},
      {"initial_energy", cfg.initial_energy},
      {"mobility_speed", cfg.mobility_speed},
      {"frame_seconds", cfg.frame_seconds},
      {"record_residuals", cfg.record_residuals},
      {"parallel_kernel", cfg.parallel_kernel},
  };
}

namespace {

// Calls fn(key, value) for each member, rejecting keys outside `known`.
template <typename Fn>
void for_each_known(const json& j, std::initializer_list<std::string_view> known,
                    std::string_view where, Fn fn) {
  if (!j.is_object()) throw ConfigError("config: '" + std::string(where) + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("config: unknown key '" + key + "' in '" + std::string(where) + "'");
    }
    fn(key, value);
  }
}

}  // namespace

void apply_config_json(const json& j, SimConfig& cfg) {
  try {
    for_each_known(
        j,
        {"arena", "energy", "msgs", "scenario", "policy", "cluster_count", "max_frames",
         "initial_energy", "mobility_speed", "frame_seconds", "record_residuals", "parallel_kernel"},
        "<root>", [&](const std::string& key, const json& v) {
          if (key == "arena") {
            for_each_known(v, {"side_a", "bs_position", "node_count", "seed"}, key,
                           [&](const std::string& k, const json& a) {
                             if (k == "side_a") a.get_to(cfg.arena.side_a);
                             if (k == "node_count") a.get_to(cfg.arena.node_count);
                             if (k == "seed") a.get_to(cfg.arena.seed);
                             if (k == "bs_position") {
                               for_each_known(a, {"x", "y"}, k, [&](const std::string& c, const json& x) {
                                 x.get_to(c == "x" ? cfg.arena.bs_position.x : cfg.arena.bs_position.y);
                               });
                             }
                           });
          } else if (key == "energy") {
            for_each_known(v, {"e_radio", "e_amp", "e_mh", "e_sched", "e_agg"}, key,
                           [&](const std::string& k, const json& e) {
                             if (k == "e_radio") e.get_to(cfg.energy.e_radio);
                             if (k == "e_amp") e.get_to(cfg.energy.e_amp);
                             if (k == "e_mh") e.get_to(cfg.energy.e_mh);
                             if (k == "e_sched") e.get_to(cfg.energy.e_sched);
                             if (k == "e_agg") e.get_to(cfg.energy.e_agg);
                           });
          } else if (key == "msgs") {
            for_each_known(v, {"d_adv", "d_syn", "d_join", "d_preamble", "d_announce"}, key,
                           [&](const std::string& k, const json& m) {
                             if (k == "d_adv") m.get_to(cfg.msgs.d_adv);
                             if (k == "d_syn") m.get_to(cfg.msgs.d_syn);
                             if (k == "d_join") m.get_to(cfg.msgs.d_join);
                             if (k == "d_preamble") m.get_to(cfg.msgs.d_preamble);
                             if (k == "d_announce") m.get_to(cfg.msgs.d_announce);
                           });
          } else if (key == "scenario") {
            for_each_known(
                v, {"kind", "event_probability", "duty_cycle", "d_size", "frames_per_round"}, key,
                [&](const std::string& k, const json& s) {
                  if (k == "kind") cfg.scenario.kind = parse_scenario(s.get<std::string>());
                  if (k == "event_probability") s.get_to(cfg.scenario.event_probability);
                  if (k == "duty_cycle") s.get_to(cfg.scenario.duty_cycle);
                  if (k == "d_size") s.get_to(cfg.scenario.d_size);
                  if (k == "frames_per_round") s.get_to(cfg.scenario.frames_per_round);
                });
          } else if (key == "policy") {
            cfg.policy = parse_policy(v.get<std::string>());
          } else if (key == "cluster_count") {
            v.get_to(cfg.cluster_count);
          } else if (key == "max_frames") {
            v.get_to(cfg.max_frames);
          } else if (key == "initial_energy") {
            v.get_to(cfg.initial_energy);
          } else if (key == "mobility_speed") {
            v.get_to(cfg.mobility_speed);
          } else if (key == "frame_seconds") {
            v.get_to(cfg.frame_seconds);
          } else if (key == "record_residuals") {
            v.get_to(cfg.record_residuals);
          } else if (key == "parallel_kernel") {
            v.get_to(cfg.parallel_kernel);
          }
        });
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const UsageError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

json to_json(const SimTrace& trace) {
  json records = json::array();
  for (const FrameRecord& r : trace.records) {
    json rec = {{"frame", r.frame},
                {"alive", r.alive},
                {"packets_delivered_cum", r.packets_delivered_cum},
                {"chn_ids", r.chn_ids}};
    if (trace.config.record_residuals) rec["residuals"] = r.residuals;
    records.push_back(std::move(rec));
  }
  return {{"config", to_json(trace.config)},
          {"termination", trace.termination == Termination::kAllDead ? "all_dead" : "max_frames"},
          {"records", std::move(records)},
          {"final_residuals", trace.final_residuals}};
}

json to_json(const ComparisonTable& table) {
  const auto stats = [](const DeltaStats& s) {
    return json{{"mean", s.mean}, {"min", s.min}, {"max", s.max}};
  };
  json rows = json::array();
  for (const ComparisonRow& r : table.rows) {
    rows.push_back({{"scenario", r.scenario},
                    {"seed", r.seed},
                    {"baseline", r.baseline},
                    {"packets_delta", r.dchne_minus_baseline.packets},
                    {"first_death_delta", r.dchne_minus_baseline.first_death},
                    {"last_death_delta", r.dchne_minus_baseline.last_death}});
  }
  json aggs = json::array();
  for (const ComparisonAggregate& a : table.aggregates) {
    aggs.push_back({{"scenario", a.scenario},
                    {"baseline", a.baseline},
                    {"groups", a.groups},
                    {"packets_delta", stats(a.packets)},
                    {"first_death_delta", stats(a.first_death)},
                    {"last_death_delta", stats(a.last_death)}});
  }
  return {{"rows", std::move(rows)}, {"aggregates", std::move(aggs)}};
}

std::string table_to_csv(const ComparisonTable& table) {
  std::string out = "scenario,seed,baseline,packets_delta,first_death_delta,last_death_delta\n";
  for (const ComparisonRow& r : table.rows) {
    out += r.scenario + ',' + std::to_string(r.seed) + ',' + r.baseline + ',' +
           std::to_string(r.dchne_minus_baseline.packets) + ',' +
           std::to_string(r.dchne_minus_baseline.first_death) + ',' +
           std::to_string(r.dchne_minus_baseline.last_death) + '\n';
  }
  return out;
}

std::string summaries_to_csv(std::span<const RunSummary> summaries) {
  std::string out =
      "policy,scenario,seed,node_count,frames_run,total_packets,first_death_frame,all_dead_frame\n";
  for (const RunSummary& s : summaries) {
    out += s.policy + ',' + s.scenario + ',' + std::to_string(s.seed) + ',' +
           std::to_string(s.node_count) + ',' + std::to_string(s.frames_run) + ',' +
           std::to_string(s.total_packets) + ',' + opt_csv(s.first_death_frame) + ',' +
           opt_csv(s.all_dead_frame) + '\n';
  }
  return out;
}

std::size_t write_text(const std::filesystem::path& dest, std::string_view text) {
  std::ofstream out(dest, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + dest.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw IoError("write to '" + dest.string() + "' failed");
  return text.size();
}

std::string render(const SimTrace& trace, Format format) {
  if (format == Format::kCsv) return curve_to_csv(alive_curve(trace));
  return to_json(trace).dump(2) + '\n';
}

std::string render(const RunSummary& s, Format format) {
  if (format == Format::kCsv) return curve_to_csv(s.alive_curve);
  return to_json(s).dump(2) + '\n';
}

std::size_t export_trace(const SimTrace& trace, Format format, const std::filesystem::path& dest) {
  return write_text(dest, render(trace, format));
}

std::size_t export_summary(const RunSummary& s, Format format, const std::filesystem::path& dest) {
  return write_text(dest, render(s, format));
}

std::size_t export_summaries(std::span<const RunSummary> s, Format format,
                             const std::filesystem::path& dest) {
  if (format == Format::kCsv) return write_text(dest, summaries_to_csv(s));
  json arr = json::array();
  for (const RunSummary& x : s) arr.push_back(to_json(x));
  return write_text(dest, arr.dump(2) + '\n');
}

std::size_t export_table(const ComparisonTable& t, Format format, const std::filesystem::path& dest) {
  if (format == Format::kCsv) return write_text(dest, table_to_csv(t));
  return write_text(dest, to_json(t).dump(2) + '\n');
}

}  // namespace dchne
