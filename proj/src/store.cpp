#include "qualex/store.hpp"

#include "qualex/components.hpp"
#include "qualex/errors.hpp"
#include "qualex/log.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace qualex {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kStoreSchemaVersion = 1;

std::string_view status_name(RecordStatus s) {
    switch (s) {
    case RecordStatus::Analyzed: return "ok";
    case RecordStatus::Unanalyzable: return "unanalyzable";
    case RecordStatus::Deleted: return "deleted";
    }
    return "ok";
}

RecordStatus status_from_name(std::string_view s) {
    if (s == "ok") return RecordStatus::Analyzed;
    if (s == "unanalyzable") return RecordStatus::Unanalyzable;
    if (s == "deleted") return RecordStatus::Deleted;
    throw StoreCorruption("unknown record status '" + std::string(s) + "'");
}

json metrics_to_json(const MetricVector& v) {
    json j = json::object();
    for (Metric m : kAllMetrics)
        if (v[m]) j[std::string(metric_name(m))] = *v[m];
    return j;
}

MetricVector metrics_from_json(const json& j) {
    MetricVector v;
    for (Metric m : kAllMetrics) {
        auto it = j.find(std::string(metric_name(m)));
        if (it == j.end()) continue;
        if (!it->is_number()) throw StoreCorruption("non-numeric metric in store record");
        v[m] = it->get<double>();
    }
    return v;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw StoreCorruption("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Write-to-temp then rename, so readers never see a half-written file.
void write_atomically(const fs::path& p, const std::string& content) {
    const fs::path tmp = p.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw StoreCorruption("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw StoreCorruption("short write to " + tmp.string());
    }
    fs::rename(tmp, p);
}

std::string shard_of(std::string_view revision_id) {
    std::string prefix(revision_id.substr(0, std::min<std::size_t>(2, revision_id.size())));
    for (char& c : prefix)
        if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
    return prefix.empty() ? "__" : prefix;
}

} // namespace

std::string record_to_json_line(const AnalysisRecord& r) {
    json j;
    j["revision"] = r.revision_id;
    j["path"] = r.path;
    j["status"] = status_name(r.status);
    j["analyzer_version"] = r.analyzer_version;
    j["profile"] = r.profile;
    if (r.status == RecordStatus::Analyzed) {
        j["metrics"] = metrics_to_json(r.metrics);
        if (!r.imports.empty()) j["imports"] = r.imports;
        if (!r.functions.empty()) {
            json fns = json::array();
            for (const auto& f : r.functions) fns.push_back({{"name", f.name}, {"line", f.line}, {"cc", f.cc}});
            j["functions"] = std::move(fns);
        }
    }
    if (!r.error.empty()) j["error"] = r.error;
    return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

AnalysisRecord record_from_json_line(std::string_view line) {
    try {
        const json j = json::parse(line);
        AnalysisRecord r;
        r.revision_id = j.at("revision").get<std::string>();
        r.path = j.at("path").get<std::string>();
        r.status = status_from_name(j.at("status").get<std::string>());
        r.analyzer_version = j.at("analyzer_version").get<std::string>();
        r.profile = j.at("profile").get<std::string>();
        if (j.contains("metrics")) r.metrics = metrics_from_json(j["metrics"]);
        if (j.contains("imports")) r.imports = j["imports"].get<std::vector<std::string>>();
        if (j.contains("functions")) {
            for (const auto& f : j["functions"])
                r.functions.push_back({f.at("name").get<std::string>(), f.at("line").get<int>(), f.at("cc").get<int>()});
        }
        if (j.contains("error")) r.error = j["error"].get<std::string>();
        return r;
    } catch (const json::exception& e) {
        throw StoreCorruption(std::string("malformed store record: ") + e.what());
    }
}

std::string revision_to_json_line(const RevisionRecord& r) {
    json j;
    j["id"] = r.id;
    j["author"] = r.author;
    j["timestamp"] = r.timestamp;
    j["parent"] = r.parent_id ? json(*r.parent_id) : json(nullptr);
    json changes = json::array();
    for (const auto& c : r.changed_files) {
        json cj{{"path", c.path}, {"kind", to_string(c.kind)}};
        if (!c.renamed_from.empty()) cj["from"] = c.renamed_from;
        changes.push_back(std::move(cj));
    }
    j["changes"] = std::move(changes);
    return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

RevisionRecord revision_from_json_line(std::string_view line) {
    try {
        const json j = json::parse(line);
        RevisionRecord r;
        r.id = j.at("id").get<std::string>();
        r.author = j.at("author").get<std::string>();
        r.timestamp = j.at("timestamp").get<std::int64_t>();
        if (!j.at("parent").is_null()) r.parent_id = j["parent"].get<std::string>();
        for (const auto& c : j.at("changes")) {
            FileChange fc;
            fc.path = c.at("path").get<std::string>();
            fc.kind = change_kind_from_string(c.at("kind").get<std::string>());
            if (c.contains("from")) fc.renamed_from = c["from"].get<std::string>();
            r.changed_files.push_back(std::move(fc));
        }
        return r;
    } catch (const json::exception& e) {
        throw StoreCorruption(std::string("malformed revision record: ") + e.what());
    }
}

AnalysisStore AnalysisStore::open(const fs::path& dir, bool create) {
    std::error_code ec;
    const fs::path manifest_path = dir / "manifest.json";
    if (!fs::is_directory(dir / "records", ec)) {
        if (!create) throw MissingMetrics("no analysis store at " + dir.string() + "; run `qualex analyze` first");
        fs::create_directories(dir / "records", ec);
        if (ec) throw StoreCorruption("cannot create store directory " + dir.string() + ": " + ec.message());
    }

    AnalysisStore store(dir);
    if (fs::exists(manifest_path, ec)) {
        try {
            const json m = json::parse(read_file(manifest_path));
            StoreManifest man;
            man.schema_version = m.at("schema_version").get<int>();
            if (man.schema_version != kStoreSchemaVersion)
                throw StoreCorruption("unsupported store schema_version " + std::to_string(man.schema_version));
            man.analyzer_version = m.at("analyzer_version").get<std::string>();
            man.profile = m.at("profile").get<std::string>();
            man.branch = m.at("branch").get<std::string>();
            man.repository = m.value("repository", "");
            man.head = m.value("head", "");
            man.revision_count = m.value("revision_count", std::size_t{0});
            store.manifest_ = man;
        } catch (const json::exception& e) {
            throw StoreCorruption(std::string("malformed store manifest: ") + e.what());
        }
    }

    // Shards left by an interrupted first run are loaded too.
    std::vector<fs::path> shards;
    for (const auto& entry : fs::directory_iterator(dir / "records"))
        if (entry.path().extension() == ".ndjson") shards.push_back(entry.path());
    std::sort(shards.begin(), shards.end());
    for (const auto& s : shards) store.load_shard(s);
    return store;
}

void AnalysisStore::load_shard(const fs::path& file) {
    const std::string content = read_file(file);
    std::size_t pos = 0;
    while (pos < content.size()) {
        const std::size_t nl = content.find('\n', pos);
        if (nl == std::string::npos) {
            // Torn final write from an interrupted run: drop it.
            log_warning("dropping incomplete trailing record in " + file.string());
            fs::resize_file(file, pos);
            break;
        }
        const std::string_view line(content.data() + pos, nl - pos);
        if (!line.empty()) {
            AnalysisRecord r = record_from_json_line(line);
            auto key = std::make_tuple(r.analyzer_version, r.revision_id, r.path);
            index_.insert_or_assign(std::move(key), std::move(r));
        }
        pos = nl + 1;
    }
}

const AnalysisRecord* AnalysisStore::find(std::string_view analyzer_version, std::string_view revision_id,
                                          std::string_view path) const {
    auto it = index_.find(std::make_tuple(std::string(analyzer_version), std::string(revision_id), std::string(path)));
    return it == index_.end() ? nullptr : &it->second;
}

void AnalysisStore::append(std::vector<AnalysisRecord> records) {
    std::sort(records.begin(), records.end(), [](const AnalysisRecord& a, const AnalysisRecord& b) {
        return std::tie(a.revision_id, a.path) < std::tie(b.revision_id, b.path);
    });
    std::map<std::string, std::string> by_shard;
    for (const auto& r : records) by_shard[shard_of(r.revision_id)] += record_to_json_line(r) + "\n";
    for (const auto& [shard, text] : by_shard) {
        const fs::path file = dir_ / "records" / (shard + ".ndjson");
        std::ofstream out(file, std::ios::binary | std::ios::app);
        if (!out) throw StoreCorruption("cannot append to " + file.string());
        out << text;
        out.flush();
        if (!out) throw StoreCorruption("short write to " + file.string());
    }
    for (auto& r : records) {
        auto key = std::make_tuple(r.analyzer_version, r.revision_id, r.path);
        index_.insert_or_assign(std::move(key), std::move(r));
    }
}

std::vector<AnalysisRecord> AnalysisStore::all_records() const {
    std::vector<AnalysisRecord> out;
    out.reserve(index_.size());
    for (const auto& [_, r] : index_) out.push_back(r);
    return out;
}

void AnalysisStore::write_manifest(const StoreManifest& m) {
    json j;
    j["schema_version"] = m.schema_version;
    j["analyzer_version"] = m.analyzer_version;
    j["profile"] = m.profile;
    j["branch"] = m.branch;
    j["repository"] = m.repository;
    j["head"] = m.head;
    j["revision_count"] = m.revision_count;
    write_atomically(dir_ / "manifest.json", j.dump(2, ' ', false, json::error_handler_t::replace) + "\n");
    manifest_ = m;
}

void AnalysisStore::write_revisions(std::span<const RevisionRecord> revisions) {
    std::string text;
    for (const auto& r : revisions) text += revision_to_json_line(r) + "\n";
    write_atomically(dir_ / "revisions.ndjson", text);
}

std::vector<RevisionRecord> AnalysisStore::read_revisions() const {
    const fs::path p = dir_ / "revisions.ndjson";
    std::error_code ec;
    if (!fs::exists(p, ec)) return {};
    std::vector<RevisionRecord> out;
    std::istringstream in(read_file(p));
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) out.push_back(revision_from_json_line(line));
    return out;
}

IncrementalPlan plan_incremental(std::span<const RevisionRecord> revisions, const AnalysisStore& store,
                                 const LanguageProfile& profile, std::string_view analyzer_version) {
    IncrementalPlan plan;
    for (const auto& rev : revisions) {
        std::set<std::string> analyze;
        std::set<std::string> tombstones;
        auto want_analysis = [&](const std::string& path) {
            if (!profile.accepts_path(path)) return;
            ++plan.total;
            const AnalysisRecord* r = store.find(analyzer_version, rev.id, path);
            if (r && r->status != RecordStatus::Deleted)
                ++plan.cache_hits;
            else
                analyze.insert(path);
        };
        auto want_tombstone = [&](const std::string& path) {
            if (path.empty() || !profile.accepts_path(path)) return;
            const AnalysisRecord* r = store.find(analyzer_version, rev.id, path);
            if (!r || r->status != RecordStatus::Deleted) tombstones.insert(path);
        };
        for (const auto& change : rev.changed_files) {
            switch (change.kind) {
            case ChangeKind::Deleted: want_tombstone(change.path); break;
            case ChangeKind::Renamed:
                if (change.renamed_from != change.path) want_tombstone(change.renamed_from);
                want_analysis(change.path);
                break;
            case ChangeKind::Added:
            case ChangeKind::Modified: want_analysis(change.path); break;
            }
        }
        // A path both removed and (re)created in one revision is live.
        for (const auto& p : analyze) tombstones.erase(p);
        if (analyze.empty() && tombstones.empty()) continue;
        plan.items.push_back({rev.id, {analyze.begin(), analyze.end()}, {tombstones.begin(), tombstones.end()}});
    }
    return plan;
}

void apply_coupling(Snapshot& snapshot, const std::map<std::string, std::vector<std::string>>& imports) {
    for (const auto& [path, c] : resolve_coupling(imports)) {
        auto it = snapshot.find(path);
        if (it == snapshot.end()) continue;
        if (!it->second.ca) it->second.ca = c.ca;
        if (!it->second.ce) it->second.ce = c.ce;
    }
}

StoreHistory::StoreHistory(const AnalysisStore& store, std::span<const RevisionRecord> revisions,
                           const LanguageProfile& profile, std::string analyzer_version)
    : store_(store), revisions_(revisions), profile_(profile), analyzer_version_(std::move(analyzer_version)) {}

namespace {

class LiveFiles {
public:
    LiveFiles(const AnalysisStore& store, const LanguageProfile& profile, std::string_view version)
        : store_(store), profile_(profile), version_(version) {}

    void apply(const RevisionRecord& rev) {
        auto load = [&](const std::string& path) {
            const AnalysisRecord* r = store_.find(version_, rev.id, path);
            if (!r || r->status == RecordStatus::Deleted)
                throw MissingMetrics("no analysis record for " + path + " at revision " + rev.id.substr(0, 12) +
                                     "; run `qualex analyze` first");
            live_[path] = r;
        };
        auto remove = [&](const std::string& path) {
            if (!path.empty()) live_.erase(path);
        };
        std::vector<const std::string*> created;
        for (const auto& c : rev.changed_files) {
            if (c.kind == ChangeKind::Deleted && profile_.accepts_path(c.path)) remove(c.path);
            if (c.kind == ChangeKind::Renamed && profile_.accepts_path(c.renamed_from) && c.renamed_from != c.path)
                remove(c.renamed_from);
            if (c.kind != ChangeKind::Deleted && profile_.accepts_path(c.path)) created.push_back(&c.path);
        }
        for (const std::string* p : created) load(*p);
    }

    Snapshot snapshot() const {
        Snapshot s;
        std::map<std::string, std::vector<std::string>> imports;
        for (const auto& [path, rec] : live_) {
            if (rec->status != RecordStatus::Analyzed) continue;
            s.emplace(path, rec->metrics);
            if (profile_.supports_coupling()) imports.emplace(path, rec->imports);
        }
        if (profile_.supports_coupling()) apply_coupling(s, imports);
        return s;
    }

private:
    const AnalysisStore& store_;
    const LanguageProfile& profile_;
    std::string_view version_;
    std::map<std::string, const AnalysisRecord*> live_;
};

} // namespace

void StoreHistory::replay(const std::function<void(std::size_t, const Snapshot&, const Snapshot&)>& visit) const {
    LiveFiles live(store_, profile_, analyzer_version_);
    Snapshot before;
    for (std::size_t i = 0; i < revisions_.size(); ++i) {
        live.apply(revisions_[i]);
        Snapshot after = live.snapshot();
        visit(i, before, after);
        before = std::move(after);
    }
}

Snapshot StoreHistory::state_at(std::size_t index) const {
    LiveFiles live(store_, profile_, analyzer_version_);
    for (std::size_t i = 0; i <= index && i < revisions_.size(); ++i) live.apply(revisions_[i]);
    return live.snapshot();
}

std::vector<FileState> component_state(std::string_view revision_id, std::string_view component,
                                       const ComponentMap& components, const AnalysisStore& store,
                                       std::span<const RevisionRecord> revisions, const LanguageProfile& profile,
                                       std::string_view analyzer_version) {
    auto it = std::find_if(revisions.begin(), revisions.end(),
                           [&](const RevisionRecord& r) { return r.id == revision_id; });
    if (it == revisions.end())
        throw MissingMetrics("revision " + std::string(revision_id) + " is not part of the analyzed history");
    StoreHistory history(store, revisions, profile, std::string(analyzer_version));
    const Snapshot snap = history.state_at(static_cast<std::size_t>(it - revisions.begin()));
    std::vector<FileState> out;
    for (const auto& [path, metrics] : snap)
        if (components.component_of(path) == component) out.push_back({path, metrics});
    return out;
}

} // namespace qualex
