#pragma once

#include "qualex/analyzer.hpp"
#include "qualex/miner.hpp"

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace qualex {

enum class RecordStatus { Analyzed, Unanalyzable, Deleted };

struct FunctionEntry {
    std::string name;
    int line = 0;
    int cc = 0;
    bool operator==(const FunctionEntry&) const = default;
};

/// Result of analyzing one file at one revision. Deleted records are
/// tombstones: the file stops being live at that revision.
struct AnalysisRecord {
    std::string revision_id;
    std::string path;
    RecordStatus status = RecordStatus::Analyzed;
    MetricVector metrics;
    std::vector<std::string> imports;
    std::vector<FunctionEntry> functions;
    std::string error;
    std::string analyzer_version;
    std::string profile;

    bool operator==(const AnalysisRecord&) const = default;
};

std::string record_to_json_line(const AnalysisRecord& r);
/// Throws StoreCorruption.
AnalysisRecord record_from_json_line(std::string_view line);

std::string revision_to_json_line(const RevisionRecord& r);
RevisionRecord revision_from_json_line(std::string_view line);

struct StoreManifest {
    int schema_version = 1;
    std::string analyzer_version;
    std::string profile;
    std::string branch;
    std::string repository;
    std::string head;
    std::size_t revision_count = 0;
    bool operator==(const StoreManifest&) const = default;
};

/// On-disk analysis cache:
///
///   <dir>/manifest.json          StoreManifest
///   <dir>/revisions.ndjson       mined revisions, oldest first
///   <dir>/records/<xx>.ndjson    AnalysisRecords, sharded by the first two
///                                characters of the revision id
///
/// Record files are append-only; a record is keyed by (analyzer_version,
/// revision, path) and a later line for the same key replaces an earlier one.
/// Single writer.
class AnalysisStore {
public:
    /// Opens (and with `create`, initializes) a store directory. A torn last
    /// line in a shard is cut off; any other malformed line throws
    /// StoreCorruption. Without `create`, a missing store throws MissingMetrics.
    static AnalysisStore open(const std::filesystem::path& dir, bool create);

    const std::filesystem::path& dir() const noexcept { return dir_; }

    const AnalysisRecord* find(std::string_view analyzer_version, std::string_view revision_id,
                               std::string_view path) const;

    /// Appends records in (revision, path) order and flushes them to disk.
    void append(std::vector<AnalysisRecord> records);

    std::size_t record_count() const noexcept { return index_.size(); }
    /// Every stored record, ordered by key.
    std::vector<AnalysisRecord> all_records() const;

    std::optional<StoreManifest> manifest() const { return manifest_; }
    void write_manifest(const StoreManifest& m);

    void write_revisions(std::span<const RevisionRecord> revisions);
    std::vector<RevisionRecord> read_revisions() const;

private:
    explicit AnalysisStore(std::filesystem::path dir) : dir_(std::move(dir)) {}
    void load_shard(const std::filesystem::path& file);

    std::filesystem::path dir_;
    std::optional<StoreManifest> manifest_;
    std::map<std::tuple<std::string, std::string, std::string>, AnalysisRecord> index_;
};

struct PlanItem {
    std::string revision_id;
    std::vector<std::string> analyze;    // changed files lacking a current record
    std::vector<std::string> tombstones; // deleted/renamed-away files lacking a tombstone
};

struct IncrementalPlan {
    std::vector<PlanItem> items; // only revisions with work to do
    std::size_t cache_hits = 0;  // changed files already analyzed
    std::size_t total = 0;       // changed files the profile covers
};

IncrementalPlan plan_incremental(std::span<const RevisionRecord> revisions, const AnalysisStore& store,
                                 const LanguageProfile& profile, std::string_view analyzer_version);

/// Live analyzable files of a revision with their metrics, keyed by path.
using Snapshot = std::map<std::string, MetricVector>;

/// Sequential access to the per-revision file states of a history.
class MetricsHistory {
public:
    virtual ~MetricsHistory() = default;
    /// Calls `visit(index, before, after)` for every revision in order; before
    /// is the parent's state (empty for the root).
    virtual void replay(const std::function<void(std::size_t, const Snapshot&, const Snapshot&)>& visit) const = 0;
};

/// History backed by a store: unchanged files inherit the parent's record,
/// tombstones remove files, unanalyzable files are left out. For profiles with
/// import analysis Ca/Ce are resolved over the whole live file set.
class StoreHistory final : public MetricsHistory {
public:
    StoreHistory(const AnalysisStore& store, std::span<const RevisionRecord> revisions,
                 const LanguageProfile& profile, std::string analyzer_version);

    /// Throws MissingMetrics when a changed file has no record.
    void replay(const std::function<void(std::size_t, const Snapshot&, const Snapshot&)>& visit) const override;

    /// State after the revision at `index`.
    Snapshot state_at(std::size_t index) const;

private:
    const AnalysisStore& store_;
    std::span<const RevisionRecord> revisions_;
    const LanguageProfile& profile_;
    std::string analyzer_version_;
};

struct FileState {
    std::string path;
    MetricVector metrics;
    bool operator==(const FileState&) const = default;
};

class ComponentMap;

/// Live analyzable files of one component after the given revision, sorted by
/// path. Throws MissingMetrics.
std::vector<FileState> component_state(std::string_view revision_id, std::string_view component,
                                       const ComponentMap& components, const AnalysisStore& store,
                                       std::span<const RevisionRecord> revisions, const LanguageProfile& profile,
                                       std::string_view analyzer_version);

/// Applies computed coupling to the snapshot (only where a file lacks Ca/Ce).
void apply_coupling(Snapshot& snapshot, const std::map<std::string, std::vector<std::string>>& imports);

} // namespace qualex
