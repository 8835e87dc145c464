#include "qualex/expertise.hpp"

#include "qualex/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

namespace qualex {

ExpertiseWindow::ExpertiseWindow(std::int64_t reference, int days) : reference_time(reference), duration_days(days) {
    if (days < 1) throw ConfigError("window duration must be at least one day");
}

ExpertiseWindow default_window(std::span<const RevisionRecord> revisions, int duration_days) {
    std::int64_t newest = 0;
    bool any = false;
    for (const auto& r : revisions) {
        newest = any ? std::max(newest, r.timestamp) : r.timestamp;
        any = true;
    }
    return ExpertiseWindow(newest, duration_days);
}

std::vector<RevisionRecord> commits_in_window(std::span<const RevisionRecord> revisions,
                                              const ExpertiseWindow& window, std::string_view author) {
    std::vector<RevisionRecord> out;
    for (const auto& r : revisions)
        if (r.author == author && window.contains(r.timestamp)) out.push_back(r);
    return out;
}

Direction classify_delta(std::optional<double> before, std::optional<double> after, double epsilon) {
    if (!after) return Direction::Neutral;
    if (!before) return *after >= kBirthThreshold ? Direction::Increase : Direction::Decrease;
    const double delta = *after - *before;
    if (delta > epsilon) return Direction::Increase;
    if (delta < -epsilon) return Direction::Decrease;
    return Direction::Neutral;
}

std::vector<std::string> touched_components(const RevisionRecord& rev, const Snapshot& before, const Snapshot& after,
                                            const ComponentMap& components) {
    std::set<std::string> touched;
    auto consider = [&](const std::string& path) {
        if (path.empty()) return;
        if (before.count(path) || after.count(path)) touched.insert(components.component_of(path));
    };
    for (const auto& c : rev.changed_files) {
        consider(c.path);
        consider(c.renamed_from);
    }
    return {touched.begin(), touched.end()};
}

namespace {

class ComponentIndex {
public:
    explicit ComponentIndex(const ComponentMap& map) : map_(map) {}
    const std::string& of(const std::string& path) {
        auto it = cache_.find(path);
        if (it == cache_.end()) it = cache_.emplace(path, map_.component_of(path)).first;
        return it->second;
    }

private:
    const ComponentMap& map_;
    std::unordered_map<std::string, std::string> cache_;
};

std::optional<double> component_gm(const Snapshot& snap, const std::string& component, ComponentIndex& index,
                                   const SqualeConfig& squale) {
    std::vector<MetricVector> files;
    for (const auto& [path, mv] : snap)
        if (index.of(path) == component) files.push_back(mv);
    return pooled_global_mark(files, squale);
}

} // namespace

std::vector<QualityImpactTally> attribute_deltas(std::span<const RevisionRecord> revisions,
                                                 const MetricsHistory& history, const ComponentMap& components,
                                                 const SqualeConfig& squale, const ExpertiseWindow& window,
                                                 double epsilon) {
    std::map<std::pair<std::string, std::string>, QualityImpactTally> tallies; // (component, author)
    ComponentIndex index(components);
    history.replay([&](std::size_t i, const Snapshot& before, const Snapshot& after) {
        const RevisionRecord& rev = revisions[i];
        if (!window.contains(rev.timestamp)) return;
        for (const std::string& component : touched_components(rev, before, after, components)) {
            const auto gm_before = component_gm(before, component, index, squale);
            const auto gm_after = component_gm(after, component, index, squale);
            auto& t = tallies[{component, rev.author}];
            t.author = rev.author;
            t.component = component;
            ++t.total_commits;
            switch (classify_delta(gm_before, gm_after, epsilon)) {
            case Direction::Increase: ++t.increases; break;
            case Direction::Decrease: ++t.decreases; break;
            case Direction::Neutral: break;
            }
        }
    });
    std::vector<QualityImpactTally> out;
    out.reserve(tallies.size());
    for (auto& [_, t] : tallies) out.push_back(std::move(t));
    return out;
}

double quality_impact(const QualityImpactTally& tally) {
    if (tally.decreases <= 0) return 1.0;
    return std::min(static_cast<double>(tally.increases) / static_cast<double>(tally.decreases), 1.0);
}

double expertise_score(const QualityImpactTally& tally) {
    if (tally.total_commits <= 0) return 0.0;
    return quality_impact(tally) * std::log1p(static_cast<double>(tally.total_commits));
}

std::vector<ExpertRanking> rank_experts(std::span<const QualityImpactTally> tallies, std::size_t top_k,
                                        std::span<const std::string> components) {
    std::map<std::string, std::vector<ExpertEntry>> by_component;
    for (const auto& c : components) by_component[c];
    for (const auto& t : tallies) {
        auto& entries = by_component[t.component];
        const double score = expertise_score(t);
        if (!(score > 0.0)) continue;
        entries.push_back(ExpertEntry{t.author, score, quality_impact(t), t});
    }
    std::vector<ExpertRanking> out;
    for (auto& [component, entries] : by_component) {
        std::sort(entries.begin(), entries.end(), [](const ExpertEntry& a, const ExpertEntry& b) {
            if (a.score != b.score) return a.score > b.score;
            if (a.tally.total_commits != b.tally.total_commits) return a.tally.total_commits > b.tally.total_commits;
            return a.author < b.author;
        });
        if (entries.size() > top_k) entries.resize(top_k);
        out.push_back({component, std::move(entries)});
    }
    return out;
}

} // namespace qualex
