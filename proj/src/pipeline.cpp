#include "qualex/pipeline.hpp"

#include "qualex/batch.hpp"
#include "qualex/errors.hpp"
#include "qualex/log.hpp"
#include "qualex/process.hpp"
#include "qualex/text.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace qualex {

using nlohmann::json;

namespace {

constexpr std::size_t kChunkFiles = 256;

std::string dump(const json& j) { return j.dump(2, ' ', false, json::error_handler_t::replace) + "\n"; }

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json metrics_json(const MetricVector& v) {
    json j = json::object();
    for (Metric m : kAllMetrics)
        if (v[m]) j[std::string(metric_name(m))] = *v[m];
    return j;
}

std::string_view direction_name(Direction d) {
    switch (d) {
    case Direction::Increase: return "increase";
    case Direction::Decrease: return "decrease";
    case Direction::Neutral: return "neutral";
    }
    return "neutral";
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

json report_header(const RunConfig& config, std::string_view command) {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["command"] = command;
    j["config"] = config.to_json();
    return j;
}

struct PendingFile {
    std::size_t item;
    std::string path;
};

// Analyzes one chunk of plan items and appends their records to the store.
void process_chunk(const std::vector<PlanItem>& items, std::size_t first, std::size_t last, GitConnector& git,
                   const RunConfig& config, const LanguageProfile& profile, const std::string& version,
                   AnalysisStore& store, AnalyzeSummary& summary) {
    std::vector<SourceFile> sources;
    std::vector<PendingFile> pending;
    std::vector<AnalysisRecord> records;
    for (std::size_t i = first; i < last; ++i) {
        const PlanItem& item = items[i];
        for (const auto& path : item.tombstones) {
            AnalysisRecord r;
            r.revision_id = item.revision_id;
            r.path = path;
            r.status = RecordStatus::Deleted;
            r.analyzer_version = version;
            r.profile = config.profile;
            records.push_back(std::move(r));
            ++summary.tombstones;
        }
        for (const auto& path : item.analyze) {
            auto text = git.file_at_revision(item.revision_id, path);
            if (!text) {
                // Listed as changed but absent from the tree (e.g. a submodule link).
                AnalysisRecord r;
                r.revision_id = item.revision_id;
                r.path = path;
                r.status = RecordStatus::Unanalyzable;
                r.error = "no file content at revision";
                r.analyzer_version = version;
                r.profile = config.profile;
                records.push_back(std::move(r));
                ++summary.files_analyzed;
                ++summary.unanalyzable;
                continue;
            }
            sources.push_back({path, std::move(*text)});
            pending.push_back({i, path});
        }
    }

    const std::vector<FileOutcome> outcomes = analyze_batch_parallel(sources, profile);

    // External checkers see one revision at a time so paths stay unique.
    std::map<std::size_t, std::map<std::string, MetricVector>> checked;
    if (!config.checkers.empty()) {
        std::map<std::size_t, std::vector<SourceFile>> per_item;
        for (std::size_t k = 0; k < pending.size(); ++k)
            if (outcomes[k].analysis) per_item[pending[k].item].push_back(sources[k]);
        for (const auto& [item, files] : per_item) {
            for (const auto& checker : config.checkers) {
                for (auto& [path, mv] : run_external_checker(checker, files)) checked[item][path].merge_from(mv);
            }
        }
    }

    for (std::size_t k = 0; k < pending.size(); ++k) {
        const FileOutcome& out = outcomes[k];
        AnalysisRecord r;
        r.revision_id = items[pending[k].item].revision_id;
        r.path = pending[k].path;
        r.analyzer_version = version;
        r.profile = config.profile;
        ++summary.files_analyzed;
        if (!out.analysis) {
            r.status = RecordStatus::Unanalyzable;
            r.error = out.error;
            ++summary.unanalyzable;
            log_warning("unanalyzable " + r.path + " at " + r.revision_id.substr(0, 12) + ": " + out.error);
        } else {
            r.status = RecordStatus::Analyzed;
            r.metrics = out.analysis->metrics;
            r.imports = out.analysis->imports;
            for (const auto& f : out.analysis->functions) r.functions.push_back({f.name, f.line, f.cc});
            auto item_it = checked.find(pending[k].item);
            if (item_it != checked.end()) {
                auto file_it = item_it->second.find(r.path);
                if (file_it != item_it->second.end()) r.metrics.merge_from(file_it->second);
            }
        }
        records.push_back(std::move(r));
    }
    store.append(std::move(records));
}

} // namespace

AnalyzeSummary run_analysis(const RunConfig& config) {
    const LanguageProfile& profile = find_profile(config.profile);
    const AliasMap aliases = config.aliases();
    GitConnector git(config.repository);
    std::vector<RevisionRecord> revisions = git.list_revisions(aliases);

    AnalyzeSummary summary;
    summary.branch = git.branch().empty() ? (config.repository.branch.empty() ? "master" : config.repository.branch)
                                          : git.branch();
    summary.revisions = revisions.size();

    const std::string version = config.analyzer_version();
    set_analysis_threads(config.jobs);
    AnalysisStore store = AnalysisStore::open(config.store, true);
    const IncrementalPlan plan = plan_incremental(revisions, store, profile, version);
    summary.files_total = plan.total;
    summary.cache_hits = plan.cache_hits;

    std::size_t first = 0;
    while (first < plan.items.size()) {
        std::size_t last = first;
        std::size_t files = 0;
        while (last < plan.items.size() && (last == first || files + plan.items[last].analyze.size() <= kChunkFiles)) {
            files += plan.items[last].analyze.size();
            ++last;
        }
        process_chunk(plan.items, first, last, git, config, profile, version, store, summary);
        first = last;
    }

    store.write_revisions(revisions);
    StoreManifest manifest;
    manifest.analyzer_version = version;
    manifest.profile = config.profile;
    manifest.branch = summary.branch;
    manifest.repository = config.repository.path.string();
    manifest.head = revisions.empty() ? "" : revisions.back().id;
    manifest.revision_count = revisions.size();
    store.write_manifest(manifest);
    return summary;
}

LoadedHistory load_history(const RunConfig& config) {
    AnalysisStore store = AnalysisStore::open(config.store, false);
    const auto manifest = store.manifest();
    if (!manifest) throw MissingMetrics("analysis store has no manifest; run `qualex analyze` first");
    const std::string version = config.analyzer_version();
    if (manifest->analyzer_version != version)
        throw MissingMetrics("store was built by '" + manifest->analyzer_version + "', current analyzer is '" +
                             version + "'; run `qualex analyze` again");
    if (!config.repository.branch.empty() && config.repository.branch != manifest->branch &&
        !(config.repository.branch == "master" && manifest->branch == "main"))
        throw MissingMetrics("store holds branch '" + manifest->branch + "', not '" + config.repository.branch +
                             "'; run `qualex analyze --branch " + config.repository.branch + "`");
    std::vector<RevisionRecord> revisions = store.read_revisions();
    if (revisions.size() != manifest->revision_count)
        throw StoreCorruption("store lists " + std::to_string(revisions.size()) + " revisions, manifest says " +
                              std::to_string(manifest->revision_count));
    std::string branch = manifest->branch;
    return LoadedHistory{std::move(store), std::move(revisions), version, std::move(branch)};
}

ExpertsReport compute_experts(const RunConfig& config, const LoadedHistory& loaded) {
    const LanguageProfile& profile = find_profile(config.profile);
    const ComponentMap components = config.component_map();
    ExpertsReport report;
    report.window = config.reference_time ? ExpertiseWindow(*config.reference_time, config.window_days)
                                          : default_window(loaded.revisions, config.window_days);
    StoreHistory history(loaded.store, loaded.revisions, profile, loaded.analyzer_version);
    auto matches = [&](const std::string& component) {
        return config.component_filter.empty() || glob_match(config.component_filter, component);
    };
    for (auto& t : attribute_deltas(loaded.revisions, history, components, config.squale, report.window))
        if (matches(t.component)) report.tallies.push_back(std::move(t));

    std::set<std::string> listed;
    if (!loaded.revisions.empty()) {
        // Components alive at the reference time.
        std::size_t last = 0;
        bool found = false;
        for (std::size_t i = 0; i < loaded.revisions.size(); ++i) {
            if (loaded.revisions[i].timestamp <= report.window.reference_time) {
                last = i;
                found = true;
            }
        }
        if (found)
            for (const auto& [path, _] : history.state_at(last))
                if (matches(components.component_of(path))) listed.insert(components.component_of(path));
    }
    const std::vector<std::string> names(listed.begin(), listed.end());
    report.rankings = rank_experts(report.tallies, config.top_k, names);
    return report;
}

TimeSeriesReport compute_timeseries(const RunConfig& config, const LoadedHistory& loaded) {
    const LanguageProfile& profile = find_profile(config.profile);
    const ComponentMap components = config.component_map();
    TimeSeriesReport report;
    report.metrics = config.series_metrics;
    std::sort(report.metrics.begin(), report.metrics.end());
    report.metrics.erase(std::unique(report.metrics.begin(), report.metrics.end()), report.metrics.end());
    if (loaded.revisions.empty()) return report;

    std::map<std::int64_t, SeriesBucket> buckets;
    StoreHistory history(loaded.store, loaded.revisions, profile, loaded.analyzer_version);
    history.replay([&](std::size_t i, const Snapshot& before, const Snapshot& after) {
        const RevisionRecord& rev = loaded.revisions[i];
        SeriesBucket& bucket = buckets[iso_week_start(rev.timestamp)];
        ++bucket.commit_count;
        for (const std::string& component : touched_components(rev, before, after, components)) {
            if (!config.component_filter.empty() && !glob_match(config.component_filter, component)) continue;
            std::vector<MetricVector> files_before;
            std::vector<MetricVector> files_after;
            for (const auto& [path, mv] : before)
                if (components.component_of(path) == component) files_before.push_back(mv);
            for (const auto& [path, mv] : after)
                if (components.component_of(path) == component) files_after.push_back(mv);
            for (Metric m : report.metrics) {
                const auto gm_before = pooled_global_mark(files_before, config.squale, m);
                const auto gm_after = pooled_global_mark(files_after, config.squale, m);
                if (gm_before && gm_after) bucket.delta[m] += *gm_after - *gm_before;
            }
        }
    });

    const std::int64_t first = buckets.begin()->first;
    const std::int64_t last = buckets.rbegin()->first;
    std::map<Metric, double> running;
    for (std::int64_t week = first; week <= last; week += 7 * 86400) {
        SeriesBucket b = buckets.count(week) ? buckets[week] : SeriesBucket{};
        b.week_start = week;
        b.week = iso_week_label(week);
        for (Metric m : report.metrics) {
            b.delta[m] += 0.0;
            running[m] += b.delta[m];
            b.cumulative[m] = running[m];
        }
        report.buckets.push_back(std::move(b));
    }
    return report;
}

CommitReport compute_commit(const RunConfig& config, const LoadedHistory& loaded, const std::string& revision) {
    if (revision.empty()) throw ConfigError("commit: revision id required");
    std::optional<std::size_t> index;
    for (std::size_t i = 0; i < loaded.revisions.size(); ++i) {
        if (loaded.revisions[i].id.rfind(revision, 0) != 0) continue;
        if (index) throw ConfigError("commit: revision prefix '" + revision + "' is ambiguous");
        index = i;
    }
    if (!index) {
        // Symbolic names (HEAD, tags, rev~2) resolve through git.
        const ProcessResult r = run_process({"git", "rev-parse", "--verify", "--quiet", revision + "^{commit}"},
                                            config.repository.path, {"LC_ALL=C"});
        const std::string full = trim(r.out);
        if (r.exit_code == 0 && !full.empty() && full != revision)
            for (std::size_t i = 0; i < loaded.revisions.size(); ++i)
                if (loaded.revisions[i].id == full) index = i;
    }
    if (!index) throw MissingMetrics("revision '" + revision + "' is not in the analyzed history of " + loaded.branch);

    const LanguageProfile& profile = find_profile(config.profile);
    const ComponentMap components = config.component_map();
    StoreHistory history(loaded.store, loaded.revisions, profile, loaded.analyzer_version);
    const Snapshot before = *index == 0 ? Snapshot{} : history.state_at(*index - 1);
    const Snapshot after = history.state_at(*index);
    const RevisionRecord& rev = loaded.revisions[*index];

    CommitReport report;
    report.revision = rev;
    for (const auto& change : rev.changed_files) {
        if (!profile.accepts_path(change.path) && !profile.accepts_path(change.renamed_from)) continue;
        CommitFileDelta d;
        d.path = change.path;
        d.component = components.component_of(change.path);
        d.change = to_string(change.kind);
        if (!change.renamed_from.empty()) d.change += ":" + change.renamed_from;
        const std::string& old_path = change.kind == ChangeKind::Renamed ? change.renamed_from : change.path;
        if (auto it = before.find(old_path); it != before.end()) d.before = it->second;
        if (auto it = after.find(change.path); it != after.end()) d.after = it->second;
        if (const AnalysisRecord* r = loaded.store.find(loaded.analyzer_version, rev.id, change.path))
            d.functions = r->functions;
        report.files.push_back(std::move(d));
    }
    for (const std::string& component : touched_components(rev, before, after, components)) {
        std::vector<MetricVector> fb;
        std::vector<MetricVector> fa;
        for (const auto& [path, mv] : before)
            if (components.component_of(path) == component) fb.push_back(mv);
        for (const auto& [path, mv] : after)
            if (components.component_of(path) == component) fa.push_back(mv);
        CommitComponentDelta cd;
        cd.component = component;
        cd.gm_before = pooled_global_mark(fb, config.squale);
        cd.gm_after = pooled_global_mark(fa, config.squale);
        cd.direction = classify_delta(cd.gm_before, cd.gm_after);
        report.components.push_back(std::move(cd));
    }
    return report;
}

std::string render_analyze_json(const RunConfig& config, const AnalyzeSummary& s) {
    json j = report_header(config, "analyze");
    j["branch"] = s.branch;
    j["revisions_processed"] = s.revisions;
    j["files_total"] = s.files_total;
    j["files_analyzed"] = s.files_analyzed;
    j["cache_hits"] = s.cache_hits;
    j["unanalyzable"] = s.unanalyzable;
    j["tombstones"] = s.tombstones;
    return dump(j);
}

std::string render_experts_json(const RunConfig& config, const ExpertsReport& report) {
    json j = report_header(config, "experts");
    j["window"] = {{"reference_time", report.window.reference_time},
                   {"reference_time_iso", format_iso8601(report.window.reference_time)},
                   {"duration_days", report.window.duration_days},
                   {"start_exclusive", report.window.start_exclusive()}};
    json comps = json::array();
    for (const auto& ranking : report.rankings) {
        json entries = json::array();
        int rank = 0;
        for (const auto& e : ranking.entries) {
            entries.push_back({{"rank", ++rank},
                               {"author", e.author},
                               {"score", e.score},
                               {"qi", e.qi},
                               {"increases", e.tally.increases},
                               {"decreases", e.tally.decreases},
                               {"total_commits", e.tally.total_commits}});
        }
        comps.push_back({{"component", ranking.component}, {"experts", std::move(entries)}});
    }
    j["components"] = std::move(comps);
    return dump(j);
}

std::string render_experts_csv(const ExpertsReport& report) {
    std::ostringstream out;
    out << kExpertsCsvHeader << '\n';
    for (const auto& ranking : report.rankings) {
        int rank = 0;
        for (const auto& e : ranking.entries) {
            out << csv_field(ranking.component) << ',' << ++rank << ',' << csv_field(e.author) << ','
                << format_number(e.score) << ',' << format_number(e.qi) << ',' << e.tally.increases << ','
                << e.tally.decreases << ',' << e.tally.total_commits << '\n';
        }
    }
    return out.str();
}

std::string render_timeseries_json(const RunConfig& config, const TimeSeriesReport& report) {
    json j = report_header(config, "timeseries");
    json metrics = json::array();
    for (Metric m : report.metrics) metrics.push_back(metric_name(m));
    j["metrics"] = std::move(metrics);
    json buckets = json::array();
    for (const auto& b : report.buckets) {
        json bj{{"week", b.week}, {"week_start", format_iso8601(b.week_start)}, {"commit_count", b.commit_count}};
        for (Metric m : report.metrics) {
            bj["delta"][std::string(metric_name(m))] = b.delta.at(m);
            bj["cumulative"][std::string(metric_name(m))] = b.cumulative.at(m);
        }
        buckets.push_back(std::move(bj));
    }
    j["buckets"] = std::move(buckets);
    return dump(j);
}

std::string render_timeseries_csv(const TimeSeriesReport& report) {
    std::ostringstream out;
    out << "week,week_start,commit_count";
    for (Metric m : report.metrics) out << ",delta_" << metric_name(m);
    for (Metric m : report.metrics) out << ",cumulative_" << metric_name(m);
    out << '\n';
    for (const auto& b : report.buckets) {
        out << b.week << ',' << format_iso8601(b.week_start) << ',' << b.commit_count;
        for (Metric m : report.metrics) out << ',' << format_number(b.delta.at(m));
        for (Metric m : report.metrics) out << ',' << format_number(b.cumulative.at(m));
        out << '\n';
    }
    return out.str();
}

namespace {

std::string_view metric_color(Metric m) {
    switch (m) {
    case Metric::Cc: return "#1f77b4";
    case Metric::Hv: return "#2ca02c";
    case Metric::Hd: return "#ff7f0e";
    case Metric::Ca: return "#9467bd";
    case Metric::Ce: return "#d62728";
    case Metric::Sloc: return "#7f7f7f";
    }
    return "#000000";
}

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

std::string render_timeseries_svg(const RunConfig& config, const TimeSeriesReport& report) {
    constexpr double width = 960, height = 420, left = 60, right = 20, top = 30, bottom = 60;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    const std::size_t n = report.buckets.size();
    const double step = n > 0 ? plot_w / static_cast<double>(n) : plot_w;

    std::size_t max_commits = 1;
    double lo = 0.0, hi = 0.0;
    for (const auto& b : report.buckets) {
        max_commits = std::max(max_commits, b.commit_count);
        for (Metric m : report.metrics) {
            lo = std::min(lo, b.cumulative.at(m));
            hi = std::max(hi, b.cumulative.at(m));
        }
    }
    if (hi - lo < 1e-12) {
        hi += 1.0;
        lo -= 1.0;
    }
    auto y_of = [&](double v) { return top + (hi - v) / (hi - lo) * plot_h; };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg << "<metadata>" << xml_escape(config.to_json().dump(-1, ' ', false, json::error_handler_t::replace))
        << "</metadata>\n";
    svg << "<title>Component quality deltas per week (rising lines = improving code)</title>\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"#ffffff\"/>\n";

    svg << "<g class=\"commits\" fill=\"#c8c8c8\">\n";
    for (std::size_t i = 0; i < n; ++i) {
        const auto& b = report.buckets[i];
        const double h = plot_h * 0.5 * static_cast<double>(b.commit_count) / static_cast<double>(max_commits);
        svg << "  <rect x=\"" << fixed(left + step * static_cast<double>(i) + step * 0.15) << "\" y=\""
            << fixed(top + plot_h - h) << "\" width=\"" << fixed(step * 0.7) << "\" height=\"" << fixed(h)
            << "\" data-week=\"" << b.week << "\" data-commit-count=\"" << b.commit_count << "\"/>\n";
    }
    svg << "</g>\n";

    svg << "<line x1=\"" << left << "\" y1=\"" << fixed(y_of(0.0)) << "\" x2=\"" << width - right << "\" y2=\""
        << fixed(y_of(0.0)) << "\" stroke=\"#888888\" stroke-dasharray=\"4 3\"/>\n";

    for (Metric m : report.metrics) {
        svg << "<g class=\"series\" data-metric=\"" << metric_name(m) << "\" stroke=\"" << metric_color(m)
            << "\" fill=\"" << metric_color(m) << "\">\n  <polyline fill=\"none\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < n; ++i) {
            if (i) svg << ' ';
            svg << fixed(left + step * (static_cast<double>(i) + 0.5)) << ','
                << fixed(y_of(report.buckets[i].cumulative.at(m)));
        }
        svg << "\"/>\n";
        for (std::size_t i = 0; i < n; ++i) {
            const auto& b = report.buckets[i];
            svg << "  <circle cx=\"" << fixed(left + step * (static_cast<double>(i) + 0.5)) << "\" cy=\""
                << fixed(y_of(b.cumulative.at(m))) << "\" r=\"2.5\" data-week=\"" << b.week << "\" data-delta=\""
                << format_number(b.delta.at(m)) << "\" data-cumulative=\"" << format_number(b.cumulative.at(m))
                << "\"/>\n";
        }
        svg << "</g>\n";
    }

    svg << "<g class=\"axis\" fill=\"#333333\">\n";
    const std::size_t label_every = std::max<std::size_t>(1, n / 12);
    for (std::size_t i = 0; i < n; i += label_every) {
        svg << "  <text x=\"" << fixed(left + step * (static_cast<double>(i) + 0.5)) << "\" y=\""
            << fixed(height - bottom + 16) << "\" text-anchor=\"middle\">" << report.buckets[i].week << "</text>\n";
    }
    svg << "  <text x=\"" << fixed(left - 6) << "\" y=\"" << fixed(top + 4) << "\" text-anchor=\"end\">"
        << format_number(hi) << "</text>\n";
    svg << "  <text x=\"" << fixed(left - 6) << "\" y=\"" << fixed(top + plot_h) << "\" text-anchor=\"end\">"
        << format_number(lo) << "</text>\n";
    svg << "</g>\n";

    svg << "<g class=\"legend\">\n";
    double lx = left;
    for (Metric m : report.metrics) {
        svg << "  <rect x=\"" << fixed(lx) << "\" y=\"" << fixed(height - 24) << "\" width=\"12\" height=\"12\" fill=\""
            << metric_color(m) << "\"/><text x=\"" << fixed(lx + 16) << "\" y=\"" << fixed(height - 14) << "\">"
            << metric_name(m) << "</text>\n";
        lx += 70;
    }
    svg << "  <rect x=\"" << fixed(lx) << "\" y=\"" << fixed(height - 24)
        << "\" width=\"12\" height=\"12\" fill=\"#c8c8c8\"/><text x=\"" << fixed(lx + 16) << "\" y=\""
        << fixed(height - 14) << "\">commits</text>\n";
    svg << "</g>\n</svg>\n";
    return svg.str();
}

std::string render_commit_json(const RunConfig& config, const CommitReport& report) {
    json j = report_header(config, "commit");
    const RevisionRecord& r = report.revision;
    j["revision"] = {{"id", r.id},
                     {"author", r.author},
                     {"timestamp", r.timestamp},
                     {"timestamp_iso", format_iso8601(r.timestamp)},
                     {"parent", r.parent_id ? json(*r.parent_id) : json(nullptr)}};
    json files = json::array();
    for (const auto& f : report.files) {
        json fj{{"path", f.path},
                {"component", f.component},
                {"change", f.change},
                {"before", f.before ? metrics_json(*f.before) : json(nullptr)},
                {"after", f.after ? metrics_json(*f.after) : json(nullptr)}};
        json fns = json::array();
        for (const auto& fn : f.functions) fns.push_back({{"name", fn.name}, {"line", fn.line}, {"cc", fn.cc}});
        fj["functions"] = std::move(fns);
        files.push_back(std::move(fj));
    }
    j["files"] = std::move(files);
    json comps = json::array();
    for (const auto& c : report.components)
        comps.push_back({{"component", c.component},
                         {"gm_before", optional_number(c.gm_before)},
                         {"gm_after", optional_number(c.gm_after)},
                         {"direction", direction_name(c.direction)}});
    j["components"] = std::move(comps);
    return dump(j);
}

std::string render_commit_csv(const CommitReport& report) {
    std::ostringstream out;
    out << "path,component,change,metric,before,after\n";
    for (const auto& f : report.files) {
        for (Metric m : kAllMetrics) {
            const std::optional<double> b = f.before ? (*f.before)[m] : std::nullopt;
            const std::optional<double> a = f.after ? (*f.after)[m] : std::nullopt;
            if (!b && !a) continue;
            out << csv_field(f.path) << ',' << csv_field(f.component) << ',' << csv_field(f.change) << ','
                << metric_name(m) << ',' << (b ? format_number(*b) : "") << ',' << (a ? format_number(*a) : "")
                << '\n';
        }
    }
    return out.str();
}

} // namespace qualex
