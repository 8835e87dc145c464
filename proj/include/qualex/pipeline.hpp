#pragma once

#include "qualex/config.hpp"
#include "qualex/expertise.hpp"
#include "qualex/store.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qualex {

inline constexpr int kReportSchemaVersion = 1;

struct AnalyzeSummary {
    std::string branch;
    std::size_t revisions = 0;
    std::size_t files_total = 0;    // (revision, changed file) pairs the profile covers
    std::size_t files_analyzed = 0; // analyzed in this run
    std::size_t cache_hits = 0;
    std::size_t unanalyzable = 0; // analyzed in this run but rejected by the analyzer
    std::size_t tombstones = 0;   // written in this run
};

/// Mines the branch, analyzes every changed file that lacks a current record
/// and brings the store up to date. Records are written revision by revision,
/// so an interrupted run resumes where it stopped.
AnalyzeSummary run_analysis(const RunConfig& config);

/// Store contents needed by the report commands.
struct LoadedHistory {
    AnalysisStore store;
    std::vector<RevisionRecord> revisions;
    std::string analyzer_version;
    std::string branch;
};

/// Opens the store for reporting. Throws MissingMetrics when the store is
/// absent or was produced for another branch, profile or analyzer version.
LoadedHistory load_history(const RunConfig& config);

struct ExpertsReport {
    ExpertiseWindow window;
    std::vector<QualityImpactTally> tallies;
    std::vector<ExpertRanking> rankings;
};

ExpertsReport compute_experts(const RunConfig& config, const LoadedHistory& history);

struct SeriesBucket {
    std::string week;           // ISO week label
    std::int64_t week_start = 0; // Monday 00:00 UTC
    std::size_t commit_count = 0;
    std::map<Metric, double> delta;
    std::map<Metric, double> cumulative;
};

struct TimeSeriesReport {
    std::vector<Metric> metrics;
    std::vector<SeriesBucket> buckets;
};

/// Weekly sums of per-metric component global-mark deltas (positive means
/// better code) with commit counts; buckets are contiguous weeks.
TimeSeriesReport compute_timeseries(const RunConfig& config, const LoadedHistory& history);

struct CommitFileDelta {
    std::string path;
    std::string component;
    std::string change;
    std::optional<MetricVector> before;
    std::optional<MetricVector> after;
    std::vector<FunctionEntry> functions;
};

struct CommitComponentDelta {
    std::string component;
    std::optional<double> gm_before;
    std::optional<double> gm_after;
    Direction direction = Direction::Neutral;
};

struct CommitReport {
    RevisionRecord revision;
    std::vector<CommitFileDelta> files;
    std::vector<CommitComponentDelta> components;
};

/// Per-file before/after metrics of one revision (id or unique prefix).
CommitReport compute_commit(const RunConfig& config, const LoadedHistory& history, const std::string& revision);

// Renderers. All output is deterministic for identical store and config.
std::string render_analyze_json(const RunConfig& config, const AnalyzeSummary& summary);
std::string render_experts_json(const RunConfig& config, const ExpertsReport& report);
std::string render_experts_csv(const ExpertsReport& report);
std::string render_timeseries_json(const RunConfig& config, const TimeSeriesReport& report);
std::string render_timeseries_csv(const TimeSeriesReport& report);
std::string render_timeseries_svg(const RunConfig& config, const TimeSeriesReport& report);
std::string render_commit_json(const RunConfig& config, const CommitReport& report);
std::string render_commit_csv(const CommitReport& report);

/// Column header of the experts CSV.
inline constexpr std::string_view kExpertsCsvHeader =
    "component,rank,author,score,qi,increases,decreases,total_commits";

} // namespace qualex
