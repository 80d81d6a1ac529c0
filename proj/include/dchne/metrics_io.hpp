#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dchne/simulator.hpp"

namespace dchne {

// One row of the alive-curve export.
struct CurvePoint {
  std::size_t frame = 0;
  std::size_t alive = 0;
  std::uint64_t packets_cum = 0;
  std::size_t chn_count = 0;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct RunSummary {
  std::string policy;
  std::string scenario;
  std::uint64_t seed = 0;
  std::size_t node_count = 0;
  std::size_t frames_run = 0;
  std::uint64_t total_packets = 0;
  std::optional<std::size_t> first_death_frame;
  std::optional<std::size_t> all_dead_frame;
  std::vector<CurvePoint> alive_curve;

  friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

std::vector<CurvePoint> alive_curve(const SimTrace& trace);
RunSummary summarize(const SimTrace& trace);

// Differences a - b. Lifetimes that never happened are censored at the run
// length (frames_run).
struct MetricDeltas {
  std::int64_t packets = 0;
  std::int64_t first_death = 0;
  std::int64_t last_death = 0;

  friend bool operator==(const MetricDeltas&, const MetricDeltas&) = default;
};

std::size_t censored_first_death(const RunSummary& s);
std::size_t censored_last_death(const RunSummary& s);
MetricDeltas delta(const RunSummary& a, const RunSummary& b);

struct ComparisonRow {
  std::string scenario;
  std::uint64_t seed = 0;
  std::string baseline;
  MetricDeltas dchne_minus_baseline;
};

struct DeltaStats {
  double mean = 0.0;
  std::int64_t min = 0;
  std::int64_t max = 0;
};

struct ComparisonAggregate {
  std::string scenario;
  std::string baseline;
  std::size_t groups = 0;
  DeltaStats packets, first_death, last_death;
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;              // sorted by (scenario, seed, baseline)
  std::vector<ComparisonAggregate> aggregates;  // sorted by (scenario, baseline)
};

// Groups summaries by (scenario, seed). Every group needs exactly one dchne run
// and at least one baseline, with no policy repeated; otherwise GroupingError.
ComparisonTable compare(std::span<const RunSummary> summaries);

enum class Format { kCsv, kJson };
// "csv" or "json"; anything else is a UsageError.
Format parse_format(std::string_view name);

// frame,alive,packets_cum,chn_count with a header row.
std::string curve_to_csv(std::span<const CurvePoint> curve);
std::vector<CurvePoint> curve_from_csv(std::string_view text);

nlohmann::json to_json(const RunSummary& s);
RunSummary summary_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SimConfig& cfg);
nlohmann::json to_json(const SimTrace& trace);
nlohmann::json to_json(const ComparisonTable& table);
std::string table_to_csv(const ComparisonTable& table);
std::string summaries_to_csv(std::span<const RunSummary> summaries);

// Overwrites the fields present in j; unknown keys are a ConfigError.
void apply_config_json(const nlohmann::json& j, SimConfig& cfg);

// Export sinks. Return bytes written; IoError if the destination cannot be written.
std::size_t write_text(const std::filesystem::path& dest, std::string_view text);
std::size_t export_trace(const SimTrace& trace, Format format, const std::filesystem::path& dest);
std::size_t export_summary(const RunSummary& s, Format format, const std::filesystem::path& dest);
std::size_t export_summaries(std::span<const RunSummary> s, Format format,
                             const std::filesystem::path& dest);
std::size_t export_table(const ComparisonTable& t, Format format, const std::filesystem::path& dest);

std::string render(const SimTrace& trace, Format format);
std::string render(const RunSummary& s, Format format);

}  // namespace dchne
