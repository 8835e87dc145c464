#include "qualex/miner.hpp"

#include "qualex/errors.hpp"
#include "qualex/log.hpp"
#include "qualex/process.hpp"
#include "qualex/text.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <system_error>
#include <unordered_map>

namespace qualex {

using nlohmann::json;

namespace {

std::pair<std::string, std::string> alias_key(std::string_view name, std::string_view email) {
    return {trim(name), to_lower_ascii(trim(email))};
}

} // namespace

AliasMap::AliasMap(const std::vector<AuthorIdentity>& identities) {
    for (const auto& id : identities) {
        std::string canonical = trim(id.canonical_name);
        if (canonical.empty()) throw ConfigError("alias map: empty canonical name");
        for (const auto& [name, email] : id.aliases) {
            auto key = alias_key(name, email);
            auto [it, inserted] = table_.emplace(key, canonical);
            if (!inserted && it->second != canonical)
                throw ConfigError("alias map: '" + key.first + " <" + key.second + ">' maps to both '" +
                                  it->second + "' and '" + canonical + "'");
        }
    }
    // Resolution must be idempotent: a canonical name reappearing as an alias
    // under some email has to map back to itself.
    for (const auto& [key, canonical] : table_) {
        auto again = table_.find({canonical, key.second});
        if (again != table_.end() && again->second != canonical)
            throw ConfigError("alias map: canonical name '" + canonical + "' is itself an alias of '" +
                              again->second + "'");
    }
}

AliasMap AliasMap::from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("alias map: invalid JSON: ") + e.what());
    }
    if (!doc.is_array()) throw ConfigError("alias map: top level must be an array");
    std::vector<AuthorIdentity> identities;
    for (const auto& entry : doc) {
        if (!entry.is_object() || !entry.contains("canonical") || !entry["canonical"].is_string())
            throw ConfigError("alias map: every entry needs a string 'canonical'");
        AuthorIdentity id;
        id.canonical_name = entry["canonical"].get<std::string>();
        if (entry.contains("aliases")) {
            if (!entry["aliases"].is_array()) throw ConfigError("alias map: 'aliases' must be an array");
            for (const auto& a : entry["aliases"]) {
                if (!a.is_object() || !a.value("name", json()).is_string() || !a.value("email", json()).is_string())
                    throw ConfigError("alias map: aliases need string 'name' and 'email'");
                id.aliases.emplace(a["name"].get<std::string>(), a["email"].get<std::string>());
            }
        }
        identities.push_back(std::move(id));
    }
    return AliasMap(identities);
}

AliasMap AliasMap::load(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ConfigError("alias map: cannot read " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string AliasMap::resolve(std::string_view name, std::string_view email) const {
    auto key = alias_key(name, email);
    auto it = table_.find(key);
    if (it != table_.end()) return it->second;
    return key.first;
}

std::string to_string(ChangeKind kind) {
    switch (kind) {
    case ChangeKind::Added: return "added";
    case ChangeKind::Modified: return "modified";
    case ChangeKind::Deleted: return "deleted";
    case ChangeKind::Renamed: return "renamed";
    }
    return "modified";
}

ChangeKind change_kind_from_string(std::string_view s) {
    if (s == "added") return ChangeKind::Added;
    if (s == "modified") return ChangeKind::Modified;
    if (s == "deleted") return ChangeKind::Deleted;
    if (s == "renamed") return ChangeKind::Renamed;
    throw StoreCorruption("unknown change kind '" + std::string(s) + "'");
}

std::vector<FileChange> parse_name_status_z(std::string_view raw) {
    std::vector<FileChange> changes;
    auto fields = split(raw, '\0');
    if (!fields.empty() && fields.back().empty()) fields.pop_back();
    std::size_t i = 0;
    auto next = [&]() -> std::string {
        if (i >= fields.size()) throw VcsToolFailure("truncated diff-tree output", std::string(raw));
        return fields[i++];
    };
    while (i < fields.size()) {
        std::string status = next();
        if (status.empty()) continue;
        FileChange change;
        switch (status[0]) {
        case 'A': change.kind = ChangeKind::Added; break;
        case 'D': change.kind = ChangeKind::Deleted; break;
        case 'R': change.kind = ChangeKind::Renamed; break;
        case 'C': change.kind = ChangeKind::Added; break;
        default: change.kind = ChangeKind::Modified; break; // M, T
        }
        if (status[0] == 'R') {
            change.renamed_from = normalize_repo_path(next());
            change.path = normalize_repo_path(next());
        } else if (status[0] == 'C') {
            next(); // copy source stays in place
            change.path = normalize_repo_path(next());
        } else {
            change.path = normalize_repo_path(next());
        }
        changes.push_back(std::move(change));
    }
    return changes;
}

GitConnector::GitConnector(RepositoryRef repo) : repo_(std::move(repo)) {
    std::error_code ec;
    if (repo_.path.empty() || !std::filesystem::is_directory(repo_.path, ec))
        throw RepositoryNotFound("repository path does not exist: " + repo_.path.string());
    ProcessResult r;
    try {
        r = run_process({"git", "-C", repo_.path.string(), "rev-parse", "--git-dir"}, {}, {"LC_ALL=C"});
    } catch (const std::system_error& e) {
        throw VcsToolFailure("cannot run git", e.what());
    }
    if (r.exit_code != 0)
        throw RepositoryNotFound("not a git repository: " + repo_.path.string() + " (" + trim(r.err) + ")");
}

std::string GitConnector::git(const std::vector<std::string>& args, const char* what) const {
    std::vector<std::string> argv{"git", "-C", repo_.path.string(), "-c", "core.quotepath=off"};
    argv.insert(argv.end(), args.begin(), args.end());
    ProcessResult r;
    try {
        r = run_process(argv, {}, {"LC_ALL=C", "GIT_PAGER=cat"});
    } catch (const std::system_error& e) {
        throw VcsToolFailure(std::string("cannot run git ") + what, e.what());
    }
    if (r.exit_code != 0)
        throw VcsToolFailure(std::string("git ") + what + " exited with " + std::to_string(r.exit_code), trim(r.err));
    return std::move(r.out);
}

std::optional<std::string> GitConnector::resolve_branch() {
    if (!resolved_branch_.empty()) return resolved_branch_;
    auto has_ref = [&](const std::string& branch) {
        auto r = run_process({"git", "-C", repo_.path.string(), "rev-parse", "--verify", "--quiet",
                              "refs/heads/" + branch},
                             {}, {"LC_ALL=C"});
        return r.exit_code == 0;
    };
    std::vector<std::string> candidates;
    if (repo_.branch.empty() || repo_.branch == "master") {
        candidates = {"master", "main"};
    } else {
        candidates = {repo_.branch};
    }
    for (const auto& c : candidates) {
        if (has_ref(c)) {
            resolved_branch_ = c;
            return c;
        }
    }
    if (trim(git({"for-each-ref", "--count=1", "--format=%(refname)", "refs/heads"}, "for-each-ref")).empty())
        return std::nullopt;
    std::string wanted = candidates.front();
    if (candidates.size() > 1) wanted += "' or '" + candidates.back();
    throw BranchNotFound("branch '" + wanted + "' not found in " + repo_.path.string());
}

std::vector<RevisionRecord> GitConnector::list_revisions(const AliasMap& aliases) {
    auto branch = resolve_branch();
    if (!branch) return {};

    const std::string ref = "refs/heads/" + *branch;
    auto order = split(git({"rev-list", "--first-parent", "--reverse", ref}, "rev-list"), '\n');
    if (!order.empty() && order.back().empty()) order.pop_back();

    struct Meta {
        std::string name, email;
        std::int64_t time = 0;
        std::vector<std::string> parents;
    };
    std::unordered_map<std::string, Meta> meta;
    auto log = git({"log", "--first-parent", "--no-show-signature", "--format=%H%x00%an%x00%ae%x00%at%x00%P", ref},
                   "log");
    for (const auto& line : split(log, '\n')) {
        if (line.empty()) continue;
        auto f = split(line, '\0');
        if (f.size() != 5) throw VcsToolFailure("unexpected git log line", line);
        Meta m;
        m.name = f[1];
        m.email = f[2];
        try {
            m.time = std::stoll(f[3]);
        } catch (const std::exception&) {
            throw VcsToolFailure("bad author timestamp in git log", line);
        }
        for (auto& p : split(f[4], ' '))
            if (!p.empty()) m.parents.push_back(p);
        meta.emplace(f[0], std::move(m));
    }

    std::vector<RevisionRecord> revisions;
    revisions.reserve(order.size());
    for (const auto& id : order) {
        auto it = meta.find(id);
        if (it == meta.end()) throw VcsToolFailure("revision missing from git log output", id);
        const Meta& m = it->second;
        RevisionRecord rec;
        rec.id = id;
        rec.author = aliases.resolve(m.name, m.email);
        rec.timestamp = m.time;
        std::string diff;
        if (m.parents.empty()) {
            diff = git({"diff-tree", "--no-commit-id", "--name-status", "-r", "-M", "-z", "--root", id}, "diff-tree");
        } else {
            rec.parent_id = m.parents.front();
            diff = git({"diff-tree", "--no-commit-id", "--name-status", "-r", "-M", "-z", m.parents.front(), id},
                       "diff-tree");
        }
        rec.changed_files = parse_name_status_z(diff);
        if (!revisions.empty() && rec.timestamp < revisions.back().timestamp)
            log_warning("revision " + id.substr(0, 12) + " is older than its first parent (clock skew)");
        revisions.push_back(std::move(rec));
    }
    return revisions;
}

std::optional<std::string> GitConnector::file_at_revision(const std::string& revision_id, const std::string& path) {
    std::vector<std::string> argv{"git", "-C", repo_.path.string(), "show", revision_id + ":" + path};
    ProcessResult r;
    try {
        r = run_process(argv, {}, {"LC_ALL=C", "GIT_PAGER=cat"});
    } catch (const std::system_error& e) {
        throw VcsToolFailure("cannot run git show", e.what());
    }
    if (r.exit_code == 0) return sanitize_utf8(r.out);
    if (r.err.find("does not exist in") != std::string::npos ||
        r.err.find("exists on disk, but not in") != std::string::npos)
        return std::nullopt;
    throw VcsToolFailure("git show " + revision_id + ":" + path + " failed", trim(r.err));
}

std::vector<std::string> GitConnector::list_files(const std::string& revision_id) {
    auto raw = git({"ls-tree", "-r", "--name-only", "-z", revision_id}, "ls-tree");
    std::vector<std::string> files;
    for (auto& f : split(raw, '\0'))
        if (!f.empty()) files.push_back(normalize_repo_path(f));
    return files;
}

} // namespace qualex
