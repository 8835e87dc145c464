#pragma once

#include "qualex/components.hpp"
#include "qualex/miner.hpp"
#include "qualex/squale.hpp"
#include "qualex/store.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qualex {

inline constexpr int kDefaultWindowDays = 62;
/// Global-mark changes no larger than this count as neutral.
inline constexpr double kNeutralBand = 1e-9;
/// A component's first defined global mark counts as an improvement from this value on.
inline constexpr double kBirthThreshold = 1.5;

/// The half-open interval (reference_time - duration_days * 86400, reference_time].
struct ExpertiseWindow {
    std::int64_t reference_time = 0;
    int duration_days = kDefaultWindowDays;

    ExpertiseWindow() = default;
    ExpertiseWindow(std::int64_t reference, int days);

    std::int64_t start_exclusive() const { return reference_time - static_cast<std::int64_t>(duration_days) * 86400; }
    bool contains(std::int64_t t) const { return t > start_exclusive() && t <= reference_time; }
};

/// Window ending at the newest revision timestamp.
ExpertiseWindow default_window(std::span<const RevisionRecord> revisions, int duration_days = kDefaultWindowDays);

struct QualityImpactTally {
    std::string author;
    std::string component;
    int increases = 0;
    int decreases = 0;
    int total_commits = 0;

    bool operator==(const QualityImpactTally&) const = default;
};

struct ExpertEntry {
    std::string author;
    double score = 0.0;
    double qi = 0.0;
    QualityImpactTally tally;
};

struct ExpertRanking {
    std::string component;
    std::vector<ExpertEntry> entries;
};

/// Revisions by `author` whose timestamp lies inside the window.
std::vector<RevisionRecord> commits_in_window(std::span<const RevisionRecord> revisions,
                                              const ExpertiseWindow& window, std::string_view author);

/// Per-commit component direction, exposed for reports.
enum class Direction { Increase, Decrease, Neutral };

/// Classifies a component global-mark transition. An undefined "before" (the
/// component had no analyzable files) compares the new mark against
/// kBirthThreshold; a component losing its last file is neutral.
Direction classify_delta(std::optional<double> before, std::optional<double> after, double epsilon = kNeutralBand);

/// Components touched by a revision: those holding a changed path that is
/// analyzable before or after it.
std::vector<std::string> touched_components(const RevisionRecord& rev, const Snapshot& before, const Snapshot& after,
                                            const ComponentMap& components);

/// Walks the history and tallies, per (author, component), the in-window
/// commits that raised, lowered or kept the component's pooled global mark.
/// Result sorted by (component, author).
std::vector<QualityImpactTally> attribute_deltas(std::span<const RevisionRecord> revisions,
                                                 const MetricsHistory& history, const ComponentMap& components,
                                                 const SqualeConfig& squale, const ExpertiseWindow& window,
                                                 double epsilon = kNeutralBand);

/// min(increases / decreases, 1), and 1 when there are no decreases.
double quality_impact(const QualityImpactTally& tally);

/// quality_impact * ln(1 + total_commits).
double expertise_score(const QualityImpactTally& tally);

/// Rankings for every component in `components` plus any component with a
/// tally, sorted by component name. Entries: score desc, total_commits desc,
/// author asc; zero scores dropped; at most top_k.
std::vector<ExpertRanking> rank_experts(std::span<const QualityImpactTally> tallies, std::size_t top_k = 3,
                                        std::span<const std::string> components = {});

} // namespace qualex
