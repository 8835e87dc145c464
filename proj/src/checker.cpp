#include "qualex/checker.hpp"

#include "qualex/errors.hpp"
#include "qualex/process.hpp"
#include "qualex/text.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <system_error>

namespace qualex {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class TempDir {
public:
    TempDir() {
        std::string pattern = (fs::temp_directory_path() / "qualex-checker-XXXXXX").string();
        if (::mkdtemp(pattern.data()) == nullptr)
            throw std::system_error(errno, std::generic_category(), "mkdtemp");
        path_ = pattern;
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

} // namespace

std::map<std::string, MetricVector> parse_checker_output(const std::string& payload) {
    json doc;
    try {
        doc = json::parse(payload);
    } catch (const json::parse_error& e) {
        throw CheckerProtocolError(std::string("checker output is not JSON: ") + e.what(), payload);
    }
    if (doc.is_object()) doc = json::array({std::move(doc)});
    if (!doc.is_array()) throw CheckerProtocolError("checker output must be a JSON array or object", payload);
    std::map<std::string, MetricVector> out;
    for (const auto& entry : doc) {
        if (!entry.is_object() || !entry.contains("path") || !entry["path"].is_string())
            throw CheckerProtocolError("checker entry without string 'path'", payload);
        const std::string path = normalize_repo_path(entry["path"].get<std::string>());
        if (path.empty()) throw CheckerProtocolError("checker entry with invalid path", payload);
        MetricVector mv;
        for (auto it = entry.begin(); it != entry.end(); ++it) {
            if (it.key() == "path") continue;
            auto metric = metric_from_name(it.key());
            if (!metric || metric_name(*metric) != it.key())
                throw CheckerProtocolError("checker entry with unknown key '" + it.key() + "'", payload);
            if (!it->is_number())
                throw CheckerProtocolError("checker metric '" + it.key() + "' is not a number", payload);
            mv[*metric] = it->get<double>();
        }
        out[path].merge_from(mv);
    }
    return out;
}

std::map<std::string, MetricVector> run_external_checker(const CheckerCommand& command,
                                                         const std::vector<SourceFile>& files) {
    if (command.argv.empty()) throw CheckerProcessFailure("checker command is empty");
    TempDir dir;
    for (const auto& f : files) {
        const std::string rel = normalize_repo_path(f.path);
        if (rel.empty()) continue;
        const fs::path target = dir.path() / rel;
        fs::create_directories(target.parent_path());
        std::ofstream out(target, std::ios::binary);
        out.write(f.text.data(), static_cast<std::streamsize>(f.text.size()));
    }
    std::vector<std::string> argv = command.argv;
    argv.push_back(dir.path().string());
    ProcessResult r;
    try {
        r = run_process(argv);
    } catch (const std::system_error& e) {
        throw CheckerProcessFailure("cannot start checker '" + command.argv.front() + "': " + e.what());
    }
    if (r.exit_code != 0)
        throw CheckerProcessFailure("checker '" + command.argv.front() + "' exited with " +
                                    std::to_string(r.exit_code) + (r.err.empty() ? "" : ": " + trim(r.err)));
    return parse_checker_output(r.out);
}

} // namespace qualex
