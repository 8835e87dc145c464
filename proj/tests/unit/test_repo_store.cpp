#include "fixture_repo.hpp"

#include "qualex/analyzer.hpp"
#include "qualex/components.hpp"
#include "qualex/config.hpp"
#include "qualex/errors.hpp"
#include "qualex/miner.hpp"
#include "qualex/pipeline.hpp"
#include "qualex/store.hpp"
#include "qualex/text.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace qualex;
using namespace qualex::testing;
namespace fs = std::filesystem;

namespace {

const Author kAlice{"Alice", "a@x"};
const Author kBob{"Bob", "bob@example.org"};
constexpr std::int64_t kT0 = 1'704'067'200; // 2024-01-01

std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig config_for(const FixtureRepo& repo, const fs::path& store) {
    RunConfig cfg = default_config(repo.path());
    cfg.store = store;
    return cfg;
}

// Name-status of a commit against its first parent, parsed from git's
// human-readable output rather than the -z form the miner uses.
std::vector<FileChange> reference_changes(const FixtureRepo& repo, const std::string& id, bool root) {
    std::vector<std::string> args{"diff-tree", "--no-commit-id", "--name-status", "-r", "-M"};
    if (root) args.push_back("--root");
    else args.push_back(id + "^1");
    args.push_back(id);
    std::vector<FileChange> out;
    std::istringstream in(repo.git(args));
    std::string line;
    while (std::getline(in, line)) {
        auto f = split(line, '\t');
        FileChange c;
        switch (f[0][0]) {
        case 'A': c = {f[1], ChangeKind::Added, ""}; break;
        case 'D': c = {f[1], ChangeKind::Deleted, ""}; break;
        case 'R': c = {f[2], ChangeKind::Renamed, f[1]}; break;
        default: c = {f[1], ChangeKind::Modified, ""}; break;
        }
        out.push_back(c);
    }
    return out;
}

} // namespace

TEST_CASE("empty repository has no revisions") {
    FixtureRepo repo;
    GitConnector git({repo.path(), "", ""});
    CHECK(git.list_revisions({}).empty());
}

TEST_CASE("missing repository and branch") {
    TempDir dir;
    CHECK_THROWS_AS(GitConnector({dir.path() / "nope", "", ""}).list_revisions({}), RepositoryNotFound);
    FixtureRepo repo;
    repo.write("a.c", "int a;\n");
    repo.commit(kAlice, kT0);
    CHECK_THROWS_AS(GitConnector({repo.path(), "release", ""}).list_revisions({}), BranchNotFound);
}

TEST_CASE("main is used when master is absent") {
    FixtureRepo repo("main");
    repo.write("a.c", "int a;\n");
    repo.commit(kAlice, kT0);
    GitConnector git({repo.path(), "", ""});
    CHECK(git.list_revisions({}).size() == 1);
    CHECK(git.branch() == "main");
}

TEST_CASE("alias folding") {
    FixtureRepo repo;
    for (int i = 0; i < 3; ++i) {
        repo.write("a.c", "int a" + std::to_string(i) + ";\n");
        repo.commit(kAlice, kT0 + i);
    }
    repo.write("a.c", "int z;\n");
    repo.commit({"alice", "A@X"}, kT0 + 10);
    const AliasMap aliases = AliasMap::from_json_text(
        R"([{"canonical": "Alice", "aliases": [{"name": "alice", "email": "A@X"}, {"name": "Alice", "email": "a@x"}]}])");
    GitConnector git({repo.path(), "", ""});
    const auto revs = git.list_revisions(aliases);
    REQUIRE(revs.size() == 4);
    for (const auto& r : revs) CHECK(r.author == "Alice");
    CHECK(git.list_revisions({})[3].author == "alice");
    CHECK(aliases.resolve(aliases.resolve("alice", "A@X"), "a@x") == "Alice");
    CHECK_THROWS_AS(AliasMap::from_json_text(R"([{"canonical": "A", "aliases": [{"name": "x", "email": "e"}]},
                                                  {"canonical": "B", "aliases": [{"name": "x", "email": "E"}]}])"),
                    ConfigError);
}

TEST_CASE("first-parent history with merges and renames") {
    FixtureRepo repo;
    repo.write("src/a.c", "int a;\n");
    repo.write("src/b.c", "int b;\n");
    const std::string root = repo.commit(kAlice, kT0);
    repo.git({"checkout", "-q", "-b", "topic"});
    repo.write("src/c.c", "int c;\n");
    repo.commit(kBob, kT0 + 100);
    repo.write("src/c.c", "int c2;\n");
    repo.commit(kBob, kT0 + 200);
    repo.git({"checkout", "-q", "master"});
    repo.write("src/a.c", "int a2;\n");
    repo.commit(kAlice, kT0 + 300);
    repo.git({"merge", "-q", "--no-ff", "-m", "merge topic", "topic"});
    repo.move("src/b.c", "lib/b.c");
    repo.remove("src/a.c");
    repo.commit(kAlice, kT0 + 500);

    GitConnector git({repo.path(), "", ""});
    const auto revs = git.list_revisions({});
    REQUIRE(revs.size() == 4); // root, a2, merge, rename+delete
    CHECK(revs[0].id == root);
    CHECK_FALSE(revs[0].parent_id);
    for (std::size_t i = 0; i < revs.size(); ++i) {
        CAPTURE(i);
        auto expected = reference_changes(repo, revs[i].id, i == 0);
        auto actual = revs[i].changed_files;
        auto by_path = [](const FileChange& a, const FileChange& b) { return a.path < b.path; };
        std::sort(expected.begin(), expected.end(), by_path);
        std::sort(actual.begin(), actual.end(), by_path);
        CHECK(actual == expected);
    }
    REQUIRE(revs[2].changed_files.size() == 1);
    CHECK(revs[2].changed_files[0] == FileChange{"src/c.c", ChangeKind::Added, ""});
    CHECK(git.list_revisions({}) == revs);

    CHECK(git.file_at_revision(root, "src/a.c") == std::optional<std::string>("int a;\n"));
    CHECK_FALSE(git.file_at_revision(root, "src/c.c"));
    CHECK_FALSE(git.file_at_revision(revs[3].id, "src/a.c"));
    CHECK(git.file_at_revision(revs[3].id, "lib/b.c") == std::optional<std::string>("int b;\n"));
}

TEST_CASE("store round trip and recovery") {
    TempDir dir;
    AnalysisRecord r;
    r.revision_id = "abcdef0123";
    r.path = "src/a.c";
    r.status = RecordStatus::Analyzed;
    r.metrics.cc = 3;
    r.metrics.hv = 1.0 / 3.0;
    r.metrics.hd = 0.1 + 0.2;
    r.metrics.sloc = 12;
    r.imports = {"a.b.C"};
    r.functions = {{"f", 2, 3}};
    r.analyzer_version = "v1";
    r.profile = "c-family";
    CHECK(record_from_json_line(record_to_json_line(r)) == r);

    {
        AnalysisStore store = AnalysisStore::open(dir.path() / "s", true);
        store.append({r});
        AnalysisRecord newer = r;
        newer.metrics.cc = 4;
        store.append({newer});
    }
    {
        AnalysisStore store = AnalysisStore::open(dir.path() / "s", false);
        REQUIRE(store.find("v1", r.revision_id, r.path));
        CHECK(*store.find("v1", r.revision_id, r.path)->metrics.cc == 4);
        CHECK_FALSE(store.find("v2", r.revision_id, r.path));
    }
    const fs::path shard = dir.path() / "s" / "records" / "ab.ndjson";
    REQUIRE(fs::exists(shard));
    const std::string good = read_text(shard);
    {
        std::ofstream out(shard, std::ios::app | std::ios::binary);
        out << R"({"revision_id":"abcdef0123","pa)";
    }
    {
        AnalysisStore store = AnalysisStore::open(dir.path() / "s", false);
        CHECK(store.record_count() == 1);
    }
    CHECK(read_text(shard) == good);
    {
        std::ofstream out(shard, std::ios::trunc | std::ios::binary);
        out << "garbage\n" << good;
    }
    CHECK_THROWS_AS(AnalysisStore::open(dir.path() / "s", false), StoreCorruption);
    CHECK_THROWS_AS(AnalysisStore::open(dir.path() / "missing", false), MissingMetrics);
    CHECK_FALSE(AnalysisStore::open(dir.path() / "fresh", true).manifest());

    RevisionRecord rev{"abc", "Alice", kT0, std::string("def"), {{"x/y.c", ChangeKind::Renamed, "x/z.c"}}};
    CHECK(revision_from_json_line(revision_to_json_line(rev)) == rev);
}

TEST_CASE("incremental plan") {
    FixtureRepo repo;
    for (int i = 0; i < 100; ++i) repo.write("src/f" + std::to_string(i) + ".c", "int v" + std::to_string(i) + ";\n");
    repo.write("README.md", "docs\n");
    repo.commit(kAlice, kT0);
    TempDir dir;
    RunConfig cfg = config_for(repo, dir.path() / "store");
    AnalyzeSummary first = run_analysis(cfg);
    CHECK(first.revisions == 1);
    CHECK(first.files_total == 100);
    CHECK(first.files_analyzed == 100);

    AnalyzeSummary again = run_analysis(cfg);
    CHECK(again.cache_hits == again.files_total);
    CHECK(again.files_analyzed == 0);
    {
        AnalysisStore store = AnalysisStore::open(cfg.store, false);
        GitConnector git({repo.path(), "", ""});
        auto revs = git.list_revisions({});
        CHECK(plan_incremental(revs, store, find_profile("c-family"), cfg.analyzer_version()).items.empty());
        auto bumped = plan_incremental(revs, store, find_profile("c-family"), "qualex-analyzer/2");
        REQUIRE(bumped.items.size() == 1);
        CHECK(bumped.items[0].analyze.size() == 100);
    }

    repo.write("src/f3.c", "int changed;\n");
    repo.write("src/f7.c", "int changed;\n");
    repo.commit(kBob, kT0 + 60);
    {
        AnalysisStore store = AnalysisStore::open(cfg.store, false);
        GitConnector git({repo.path(), "", ""});
        auto plan = plan_incremental(git.list_revisions({}), store, find_profile("c-family"), cfg.analyzer_version());
        REQUIRE(plan.items.size() == 1);
        CHECK(plan.items[0].analyze == std::vector<std::string>{"src/f3.c", "src/f7.c"});
    }
    AnalyzeSummary third = run_analysis(cfg);
    CHECK(third.files_analyzed == 2);
    CHECK(third.cache_hits == 100);
}

TEST_CASE("component state follows tombstones and inheritance") {
    FixtureRepo repo;
    repo.write("core/a.c", "int a(int x) { return x; }\n");
    repo.write("core/b.c", "int b(int x) { if (x) return 1; return 2; }\n");
    repo.write("core/c.c", "int c;\n");
    repo.write("ui/d.c", "int d;\n");
    repo.commit(kAlice, kT0);
    repo.write("core/b.c", "int b(int x) { return x; }\n");
    const std::string r2 = repo.commit(kBob, kT0 + 10);
    repo.remove("core/c.c");
    const std::string r3 = repo.commit(kBob, kT0 + 20);

    TempDir dir;
    RunConfig cfg = config_for(repo, dir.path() / "store");
    AnalyzeSummary s = run_analysis(cfg);
    CHECK(s.revisions == 3);
    CHECK(s.files_total == 5);
    CHECK(s.tombstones == 1);

    const LoadedHistory h = load_history(cfg);
    const ComponentMap map;
    const auto& profile = find_profile("c-family");
    auto at2 = component_state(r2, "core", map, h.store, h.revisions, profile, h.analyzer_version);
    REQUIRE(at2.size() == 3);
    CHECK(at2[1].path == "core/b.c");
    CHECK(at2[1].metrics == analyze_source("int b(int x) { return x; }\n", "c-family"));
    CHECK(at2[0].metrics == analyze_source("int a(int x) { return x; }\n", "c-family"));
    auto at3 = component_state(r3, "core", map, h.store, h.revisions, profile, h.analyzer_version);
    REQUIRE(at3.size() == 2);
    CHECK(at3[0].path == "core/a.c");
    CHECK(at3[1].path == "core/b.c");
    CHECK(component_state(r3, "docs", map, h.store, h.revisions, profile, h.analyzer_version).empty());
}

TEST_CASE("unanalyzable files are recorded and excluded") {
    FixtureRepo repo;
    repo.write("core/ok.c", "int ok(void) { return 0; }\n");
    repo.write("core/bad.c", "int broken( { \n");
    repo.commit(kAlice, kT0);
    TempDir dir;
    RunConfig cfg = config_for(repo, dir.path() / "store");
    AnalyzeSummary s = run_analysis(cfg);
    CHECK(s.unanalyzable == 1);
    const LoadedHistory h = load_history(cfg);
    auto state = component_state(h.revisions[0].id, "core", ComponentMap(), h.store, h.revisions,
                                 find_profile("c-family"), h.analyzer_version);
    REQUIRE(state.size() == 1);
    CHECK(state[0].path == "core/ok.c");
}

TEST_CASE("interrupted analysis converges") {
    FixtureRepo repo;
    for (int i = 0; i < 6; ++i) {
        repo.write("m/f" + std::to_string(i % 3) + ".c", "int f(int x) { return x + " + std::to_string(i) + "; }\n");
        repo.commit(i % 2 ? kAlice : kBob, kT0 + i * 3600);
    }
    TempDir dir;
    RunConfig clean = config_for(repo, dir.path() / "clean");
    run_analysis(clean);

    // Replay a run that died after writing the first half of its records.
    RunConfig crashed = config_for(repo, dir.path() / "crashed");
    {
        AnalysisStore src = AnalysisStore::open(clean.store, false);
        auto records = src.all_records();
        records.resize(records.size() / 2);
        AnalysisStore dst = AnalysisStore::open(crashed.store, true);
        dst.append(records);
    }
    const AnalyzeSummary resumed = run_analysis(crashed);
    CHECK(resumed.cache_hits > 0);
    CHECK(AnalysisStore::open(crashed.store, false).all_records() ==
          AnalysisStore::open(clean.store, false).all_records());
    CHECK(read_text(clean.store / "revisions.ndjson") == read_text(crashed.store / "revisions.ndjson"));
}

TEST_CASE("reports need a matching store") {
    FixtureRepo repo;
    repo.write("a.c", "int a;\n");
    repo.commit(kAlice, kT0);
    TempDir dir;
    RunConfig cfg = config_for(repo, dir.path() / "store");
    CHECK_THROWS_AS(load_history(cfg), MissingMetrics);
    run_analysis(cfg);
    CHECK_NOTHROW(load_history(cfg));
    RunConfig other = cfg;
    other.profile = "java-like";
    CHECK_THROWS_AS(load_history(other), MissingMetrics);
    RunConfig branch = cfg;
    branch.repository.branch = "dev";
    CHECK_THROWS_AS(load_history(branch), MissingMetrics);
}
