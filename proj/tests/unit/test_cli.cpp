#include "fixture_repo.hpp"

#include <json.hpp>

#include <doctest.h>

#include <fstream>

using namespace qualex::testing;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr std::int64_t kT0 = 1'704'067'200; // Monday 2024-01-01

struct SmallRepo {
    FixtureRepo repo;
    TempDir work;
    std::string store() const { return (work.path() / "store").string(); }

    SmallRepo() {
        repo.write("core/a.c", "int f(int x) { if (x) return 1; return 0; }\n");
        repo.write("ui/b.js", "function g(a) { return a ? 1 : 2; }\n");
        repo.commit({"Ann", "ann@x"}, kT0);
        repo.write("core/a.c", "int f(int x) { return x; }\n");
        repo.commit({"Ben", "ben@x"}, kT0 + 3600);
        repo.write("docs/readme.txt", "hello\n");
        repo.commit({"Ann", "ann@x"}, kT0 + 7200);
    }

    CliResult run(std::vector<std::string> args) const {
        args.push_back("--repo");
        args.push_back(repo.path().string());
        args.push_back("--store");
        args.push_back(store());
        return run_cli(args);
    }
};

} // namespace

TEST_CASE("analyze then report") {
    SmallRepo s;
    CliResult a = s.run({"analyze"});
    REQUIRE(a.exit_code == 0);
    json summary = json::parse(a.out);
    CHECK(summary["revisions_processed"] == 3);
    CHECK(summary["files_total"] == 3);
    CHECK(summary["files_analyzed"] == 3);
    CHECK(summary["cache_hits"] == 0);

    json again = json::parse(s.run({"analyze"}).out);
    CHECK(again["cache_hits"] == again["files_total"]);
    CHECK(again["files_analyzed"] == 0);

    CliResult e1 = s.run({"experts"});
    CliResult e2 = s.run({"experts"});
    REQUIRE(e1.exit_code == 0);
    CHECK(e1.out == e2.out);
    json experts = json::parse(e1.out);
    CHECK(experts["schema_version"] == 1);
    CHECK(experts["config"]["lambda"] == 9.0);
    for (const auto& comp : experts["components"]) {
        for (const auto& e : comp["experts"]) {
            const double qi = e["decreases"] == 0 ? 1.0
                                                  : std::min(e["increases"].get<double>() / e["decreases"].get<double>(), 1.0);
            CHECK(e["qi"].get<double>() == qi);
            CHECK(e["score"].get<double>() == doctest::Approx(qi * std::log1p(e["total_commits"].get<double>())));
        }
    }

    CliResult csv = s.run({"experts", "--format", "csv", "--top-k", "1"});
    REQUIRE(csv.exit_code == 0);
    CHECK(csv.out.rfind("component,rank,author,score,qi,increases,decreases,total_commits\n", 0) == 0);
    CHECK(csv.err.find("\"top_k\":1") != std::string::npos);

    CliResult ts = s.run({"timeseries", "--format", "csv"});
    REQUIRE(ts.exit_code == 0);
    CHECK(std::count(ts.out.begin(), ts.out.end(), '\n') == 2); // header + one week

    CliResult commit = s.run({"commit", "HEAD~1"});
    REQUIRE(commit.exit_code == 0);
    json cj = json::parse(commit.out);
    CHECK(cj["revision"]["author"] == "Ben");
    CHECK(cj["files"][0]["before"]["cc"] == 2.0);
    CHECK(cj["files"][0]["after"]["cc"] == 1.0);
    CHECK(cj["components"][0]["direction"] == "increase");

    CHECK(s.run({"commit", "deadbeef"}).exit_code == 5);
    CHECK(s.run({"experts", "--format", "svg"}).exit_code == 2);
    CHECK(s.run({"experts", "--lambda", "1"}).exit_code == 2);
    CHECK(s.run({"experts", "--reference-time", "not-a-date"}).exit_code == 2);
}

TEST_CASE("component filter and empty window") {
    SmallRepo s;
    REQUIRE(s.run({"analyze"}).exit_code == 0);
    json only = json::parse(s.run({"experts", "--component", "co*"}).out);
    REQUIRE(only["components"].size() == 1);
    CHECK(only["components"][0]["component"] == "core");
    json later = json::parse(s.run({"experts", "--reference-time", "2024-06-01"}).out);
    REQUIRE(later["components"].size() == 2);
    for (const auto& c : later["components"]) CHECK(c["experts"].empty());
}

TEST_CASE("error exit codes") {
    TempDir dir;
    CliResult missing = run_cli({"analyze", "--repo", (dir.path() / "nope").string(), "--store",
                                 (dir.path() / "s").string()});
    CHECK(missing.exit_code == 3);
    CHECK(missing.err.find("qualex: error:") != std::string::npos);

    {
        std::ofstream(dir.path() / "bad.json") << R"({"unknown_key": 1})";
    }
    CHECK(run_cli({"analyze", "--config", (dir.path() / "bad.json").string()}).exit_code == 2);
    CHECK(run_cli({"frobnicate"}).exit_code == 2);

    SmallRepo s;
    CHECK(s.run({"experts"}).exit_code == 5);
    REQUIRE(s.run({"analyze"}).exit_code == 0);
    for (const auto& entry : fs::directory_iterator(fs::path(s.store()) / "records")) {
        std::ofstream out(entry.path(), std::ios::trunc);
        out << "{not json}\n{\"also\": \"bad\"}\n";
    }
    CHECK(s.run({"experts"}).exit_code == 4);
}

TEST_CASE("config file drives a run") {
    SmallRepo s;
    const fs::path cfg = s.work.path() / "qualex.json";
    {
        std::ofstream out(cfg);
        out << json{{"repository", s.repo.path().string()},
                    {"components", {{{"pattern", "**/*.js"}, {"component", "frontend"}}}},
                    {"top_k", 2},
                    {"format", "csv"}}
                   .dump();
    }
    REQUIRE(run_cli({"analyze", "--config", cfg.string()}).exit_code == 0);
    CHECK(fs::exists(s.work.path() / ".qualex-store" / "manifest.json"));
    CliResult r = run_cli({"experts", "--config", cfg.string()});
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("frontend,1,Ann,") != std::string::npos);
}
