#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace qualex {

struct RepositoryRef {
    std::filesystem::path path;
    /// Empty means "master, falling back to main".
    std::string branch;
    std::string name;
};

struct AuthorIdentity {
    std::string canonical_name;
    std::set<std::pair<std::string, std::string>> aliases; // (name, email)
};

/// Resolves raw (name, email) commit authors to canonical names. Keys are
/// compared after trimming the name and lowercasing the email.
class AliasMap {
public:
    AliasMap() = default;
    explicit AliasMap(const std::vector<AuthorIdentity>& identities);

    static AliasMap from_json_text(const std::string& text);
    static AliasMap load(const std::filesystem::path& file);

    std::string resolve(std::string_view name, std::string_view email) const;
    bool empty() const noexcept { return table_.empty(); }
    std::size_t size() const noexcept { return table_.size(); }

private:
    std::map<std::pair<std::string, std::string>, std::string> table_;
};

enum class ChangeKind { Added, Modified, Deleted, Renamed };

struct FileChange {
    std::string path;
    ChangeKind kind = ChangeKind::Modified;
    /// Source path of a rename; empty otherwise.
    std::string renamed_from;

    bool operator==(const FileChange&) const = default;
};

struct RevisionRecord {
    std::string id;
    std::string author;
    std::int64_t timestamp = 0;
    std::optional<std::string> parent_id;
    std::vector<FileChange> changed_files;

    bool operator==(const RevisionRecord&) const = default;
};

std::string to_string(ChangeKind kind);
ChangeKind change_kind_from_string(std::string_view s);

/// The minimal connector contract a version-control backend implements.
class Connector {
public:
    virtual ~Connector() = default;
    virtual std::vector<RevisionRecord> list_revisions(const AliasMap& aliases) = 0;
    virtual std::optional<std::string> file_at_revision(const std::string& revision_id,
                                                        const std::string& path) = 0;
    virtual std::vector<std::string> list_files(const std::string& revision_id) = 0;
    virtual std::string branch() const = 0;
};

/// Git backend driving the `git` executable through plumbing commands.
class GitConnector final : public Connector {
public:
    /// Throws RepositoryNotFound when the path is not a Git repository.
    explicit GitConnector(RepositoryRef repo);

    /// First-parent history of the branch, oldest first. Throws BranchNotFound
    /// if neither the configured branch nor the fallback exists (a repository
    /// without any commit yields an empty list).
    std::vector<RevisionRecord> list_revisions(const AliasMap& aliases) override;

    std::optional<std::string> file_at_revision(const std::string& revision_id,
                                                const std::string& path) override;

    /// Every blob path in the revision's tree.
    std::vector<std::string> list_files(const std::string& revision_id) override;

    /// The branch actually mined (after fallback); empty before resolution.
    std::string branch() const override { return resolved_branch_; }
    const RepositoryRef& repository() const noexcept { return repo_; }

    /// Resolves the branch to mine without listing history. Returns nullopt
    /// for a repository without commits.
    std::optional<std::string> resolve_branch();

private:
    std::string git(const std::vector<std::string>& args, const char* what) const;

    RepositoryRef repo_;
    std::string resolved_branch_;
};

/// Parses `diff-tree --name-status -z` output.
std::vector<FileChange> parse_name_status_z(std::string_view raw);

} // namespace qualex
