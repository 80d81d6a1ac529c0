#include "dchne/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "dchne/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dchne::cli {

namespace {

template <typename T>
T parse_uint(std::string_view s, const std::string& what) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw UsageError(what + ": '" + std::string(s) + "' is not a non-negative integer");
  }
  return v;
}

// Raw flag values; a flag is applied only when given.
struct Flags {
  std::string policy, scenario, seeds, config, out, format = "csv", sweep_nodes = "10..200:10";
  std::size_t nodes = 0, clusters = 0, frames = 0, round_frames = 0;
  std::uint64_t seed = 0;
  double duty_cycle = 0, event_prob = 0, mobility = 0;
  bool residuals = false, parallel = false;
  int threads = 0;
};

void add_common(CLI::App& cmd, Flags& f, bool with_policy, bool with_seeds) {
  if (with_policy) cmd.add_option("--policy", f.policy, "Election policy: dchne | leach | rrch");
  cmd.add_option("--scenario", f.scenario, "Traffic scenario: 1 (always report) | 2 (random events)");
  cmd.add_option("--nodes", f.nodes, "Sensor node count S");
  cmd.add_option("--clusters", f.clusters, "Cluster count c");
  cmd.add_option("--frames", f.frames, "Maximum frames to simulate");
  auto* seed = cmd.add_option("--seed", f.seed, "Run seed");
  if (with_seeds) {
    auto* seeds = cmd.add_option("--seeds", f.seeds, "Seed range a..b (inclusive)");
    seed->excludes(seeds);
  }
  cmd.add_option("--config", f.config, "JSON config file with SimConfig field names");
  cmd.add_option("--out", f.out, "Output file (stdout when omitted)");
  cmd.add_option("--format", f.format, "Export format: csv | json");
  cmd.add_option("--duty-cycle", f.duty_cycle, "Scenario 2 awake probability per frame");
  cmd.add_option("--event-prob", f.event_prob, "Scenario 2 event probability per frame");
  cmd.add_option("--round-frames", f.round_frames, "Frames per election round");
  cmd.add_option("--mobility", f.mobility, "Node speed in m/s (0 disables)");
  cmd.add_flag("--residuals", f.residuals, "Record per-node residuals in JSON traces");
  cmd.add_flag("--parallel-kernel", f.parallel, "Use the OpenMP per-frame kernel");
  cmd.add_option("--threads", f.threads, "OpenMP threads for the run matrix");
}

bool given(const CLI::App& cmd, const std::string& name) {
  const CLI::Option* opt = cmd.get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

SimConfig build_config(const CLI::App& cmd, const Flags& f) {
  SimConfig cfg;
  if (given(cmd, "--config")) {
    std::ifstream in(f.config);
    if (!in) throw UsageError("--config: cannot read '" + f.config + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("--config: " + std::string(e.what()));
    }
    apply_config_json(j, cfg);
  }
  if (given(cmd, "--policy")) cfg.policy = parse_policy(f.policy);
  if (given(cmd, "--scenario")) cfg.scenario.kind = parse_scenario(f.scenario);
  if (given(cmd, "--nodes")) cfg.arena.node_count = f.nodes;
  if (given(cmd, "--clusters")) cfg.cluster_count = f.clusters;
  if (given(cmd, "--frames")) cfg.max_frames = f.frames;
  if (given(cmd, "--seed")) cfg.arena.seed = f.seed;
  if (given(cmd, "--duty-cycle")) cfg.scenario.duty_cycle = f.duty_cycle;
  if (given(cmd, "--event-prob")) cfg.scenario.event_probability = f.event_prob;
  if (given(cmd, "--round-frames")) cfg.scenario.frames_per_round = f.round_frames;
  if (given(cmd, "--mobility")) cfg.mobility_speed = f.mobility;
  if (f.residuals) cfg.record_residuals = true;
  if (f.parallel) cfg.parallel_kernel = true;
  return cfg;
}

}  // namespace

std::vector<std::uint64_t> parse_seed_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) return {parse_uint<std::uint64_t>(text, "--seeds")};
  const auto lo = parse_uint<std::uint64_t>(std::string_view(text).substr(0, dots), "--seeds");
  const auto hi = parse_uint<std::uint64_t>(std::string_view(text).substr(dots + 2), "--seeds");
  if (hi < lo) throw UsageError("--seeds: empty range '" + text + "'");
  if (hi - lo >= 100000) throw UsageError("--seeds: range '" + text + "' is too large");
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
  return out;
}

std::vector<std::size_t> parse_node_range(const std::string& text) {
  std::string_view rest = text;
  std::size_t step = 10;
  if (const auto colon = rest.find(':'); colon != std::string_view::npos) {
    step = parse_uint<std::size_t>(rest.substr(colon + 1), "--sweep-nodes");
    rest = rest.substr(0, colon);
  }
  const auto dots = rest.find("..");
  if (dots == std::string_view::npos || step == 0) {
    throw UsageError("--sweep-nodes: expected a..b[:step], got '" + text + "'");
  }
  const auto lo = parse_uint<std::size_t>(rest.substr(0, dots), "--sweep-nodes");
  const auto hi = parse_uint<std::size_t>(rest.substr(dots + 2), "--sweep-nodes");
  if (lo == 0 || hi < lo) throw UsageError("--sweep-nodes: empty range '" + text + "'");
  std::vector<std::size_t> out;
  for (std::size_t n = lo; n <= hi; n += step) out.push_back(n);
  return out;
}

CliInvocation parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Clustered wireless sensor network simulator (DCHNE, LEACH, RRCH)", "dchne-sim"};
  app.require_subcommand(1);
  Flags f;
  auto* run_cmd = app.add_subcommand("run", "Simulate one configuration and export its trace");
  auto* cmp_cmd = app.add_subcommand("compare", "Run every policy per seed and export deltas");
  auto* swp_cmd = app.add_subcommand("sweep", "Run a node-count sweep and export summaries");
  add_common(*run_cmd, f, true, false);
  add_common(*cmp_cmd, f, false, true);
  add_common(*swp_cmd, f, true, true);
  swp_cmd->add_option("--sweep-nodes", f.sweep_nodes, "Node counts a..b[:step]");

  CliInvocation inv;
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    inv.help = true;
    inv.help_text = app.help();
    for (auto* sub : {run_cmd, cmp_cmd, swp_cmd}) {
      if (sub->parsed()) inv.help_text = sub->help();
    }
    return inv;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  const CLI::App* cmd = run_cmd;
  if (cmp_cmd->parsed()) {
    inv.subcommand = Subcommand::kCompare;
    cmd = cmp_cmd;
  } else if (swp_cmd->parsed()) {
    inv.subcommand = Subcommand::kSweep;
    cmd = swp_cmd;
  }

  try {
    inv.base = build_config(*cmd, f);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  inv.seeds = {inv.base.arena.seed};
  if (given(*cmd, "--seeds")) inv.seeds = parse_seed_range(f.seeds);
  if (inv.subcommand == Subcommand::kSweep) inv.node_counts = parse_node_range(f.sweep_nodes);
  if (given(*cmd, "--out")) inv.out = f.out;
  inv.format = parse_format(f.format);
  if (f.threads < 0) throw UsageError("--threads must be >= 0");
  inv.threads = f.threads;
  return inv;
}

std::vector<SimConfig> plan_runs(const CliInvocation& inv) {
  std::vector<SimConfig> plan;
  switch (inv.subcommand) {
    case Subcommand::kRun:
      plan.push_back(inv.base);
      break;
    case Subcommand::kCompare:
      // Sorted by (policy, seed); the environment depends only on the seed.
      for (Policy p : {Policy::kDchne, Policy::kLeach, Policy::kRrch}) {
        for (std::uint64_t s : inv.seeds) {
          SimConfig cfg = inv.base;
          cfg.policy = p;
          cfg.arena.seed = s;
          cfg.record_residuals = false;
          plan.push_back(cfg);
        }
      }
      break;
    case Subcommand::kSweep:
      for (std::size_t n : inv.node_counts) {
        for (std::uint64_t s : inv.seeds) {
          SimConfig cfg = inv.base;
          cfg.arena.node_count = n;
          cfg.cluster_count = std::min(cfg.cluster_count, n);
          cfg.arena.seed = s;
          cfg.record_residuals = false;
          plan.push_back(cfg);
        }
      }
      break;
  }
  return plan;
}

namespace {

std::vector<RunSummary> run_matrix(const std::vector<SimConfig>& plan, int threads) {
  std::vector<RunSummary> summaries(plan.size());
  std::vector<std::string> errors(plan.size());
  const auto n = static_cast<std::int64_t>(plan.size());
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      SimConfig cfg = plan[i];
      cfg.parallel_kernel = false;  // parallelism is across runs here
      summaries[i] = summarize(run(cfg));
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (const std::string& e : errors) {
    if (!e.empty()) throw std::runtime_error(e);
  }
  return summaries;
}

void emit(const CliInvocation& inv, const std::string& text, std::ostream& out) {
  if (inv.out) {
    write_text(*inv.out, text);
  } else {
    out << text;
  }
}

}  // namespace

int execute(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
  if (inv.help) {
    out << inv.help_text;
    return kOk;
  }
  try {
    const std::vector<SimConfig> plan = plan_runs(inv);
    for (const SimConfig& cfg : plan) cfg.validate();

    switch (inv.subcommand) {
      case Subcommand::kRun: {
        emit(inv, render(run(plan.front()), inv.format), out);
        break;
      }
      case Subcommand::kCompare: {
        const auto summaries = run_matrix(plan, inv.threads);
        const ComparisonTable table = compare(summaries);
        emit(inv,
             inv.format == Format::kCsv ? table_to_csv(table) : to_json(table).dump(2) + '\n', out);
        if (inv.out) {
          for (const ComparisonAggregate& a : table.aggregates) {
            out << std::fixed << std::setprecision(1) << a.scenario << " dchne-" << a.baseline
                << ": packets " << a.packets.mean << " [" << a.packets.min << ", " << a.packets.max
                << "], last death " << a.last_death.mean << " [" << a.last_death.min << ", "
                << a.last_death.max << "] over " << a.groups << " seeds\n";
          }
        }
        break;
      }
      case Subcommand::kSweep: {
        const auto summaries = run_matrix(plan, inv.threads);
        if (inv.format == Format::kCsv) {
          emit(inv, summaries_to_csv(summaries), out);
        } else {
          nlohmann::json arr = nlohmann::json::array();
          for (const RunSummary& s : summaries) arr.push_back(to_json(s));
          emit(inv, arr.dump(2) + '\n', out);
        }
        break;
      }
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  CliInvocation inv;
  try {
    inv = parse_args(args);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\nRun 'dchne-sim --help' for the flag reference.\n";
    return kUsage;
  }
  return execute(inv, std::cout, std::cerr);
}

}  // namespace dchne::cli
