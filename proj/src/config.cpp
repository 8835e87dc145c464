#include "qualex/config.hpp"

#include "qualex/errors.hpp"
#include "qualex/text.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace qualex {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view format_name(OutputFormat f) {
    switch (f) {
    case OutputFormat::Json: return "json";
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Svg: return "svg";
    }
    return "json";
}

OutputFormat format_from_name(std::string_view name) {
    const std::string n = to_lower_ascii(name);
    if (n == "json") return OutputFormat::Json;
    if (n == "csv") return OutputFormat::Csv;
    if (n == "svg" || n == "svg-chart") return OutputFormat::Svg;
    throw ConfigError("unknown output format '" + std::string(name) + "' (expected json, csv or svg)");
}

namespace {

// FNV-1a; stable across platforms, unlike std::hash.
std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

fs::path resolve(const fs::path& base, const std::string& p) {
    fs::path path(p);
    return path.is_absolute() ? path : (base / path).lexically_normal();
}

template <typename T>
T get_as(const json& j, const char* key) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config: '") + key + "' has the wrong type");
    }
}

} // namespace

std::string RunConfig::analyzer_version() const {
    std::string v = std::string(kAnalyzerVersion) + "+" + profile;
    if (checkers.empty()) return v;
    std::string joined;
    for (const auto& c : checkers) {
        for (const auto& a : c.argv) joined += a + '\x1f';
        joined += '\x1e';
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(joined)));
    return v + "+checkers-" + buf;
}

AliasMap RunConfig::aliases() const {
    if (alias_map.empty()) return {};
    return AliasMap::load(alias_map);
}

json RunConfig::to_json() const {
    json j;
    j["repository"] = {{"path", repository.path.string()},
                       {"branch", repository.branch.empty() ? "master" : repository.branch},
                       {"name", repository.name}};
    j["alias_map"] = alias_map.empty() ? json(nullptr) : json(alias_map.string());
    json rules = json::array();
    for (const auto& r : components) rules.push_back({{"pattern", r.pattern}, {"component", r.component}});
    j["components"] = std::move(rules);
    j["profile"] = profile;
    json checks = json::array();
    for (const auto& c : checkers) checks.push_back(c.argv);
    j["checkers"] = std::move(checks);
    j["lambda"] = squale.lambda();
    json thresholds = json::array();
    for (const auto& [metric, t] : squale.thresholds())
        thresholds.push_back({{"metric", metric_name(metric)},
                              {"formula", mark_formula_name(t.formula)},
                              {"lower", t.lower},
                              {"upper", t.upper}});
    j["thresholds"] = std::move(thresholds);
    j["window"] = {{"reference_time", reference_time ? json(format_iso8601(*reference_time)) : json(nullptr)},
                   {"duration_days", window_days}};
    j["format"] = format_name(format);
    j["store"] = store.string();
    j["top_k"] = top_k;
    j["component_filter"] = component_filter.empty() ? json(nullptr) : json(component_filter);
    json metrics = json::array();
    for (Metric m : series_metrics) metrics.push_back(metric_name(m));
    j["series_metrics"] = std::move(metrics);
    j["analyzer_version"] = analyzer_version();
    return j;
}

RunConfig default_config(const fs::path& base_dir) {
    RunConfig cfg;
    cfg.repository.path = base_dir;
    cfg.store = base_dir / ".qualex-store";
    return cfg;
}

RunConfig parse_config(const json& doc, const fs::path& base_dir) {
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    RunConfig cfg = default_config(base_dir);
    static const std::set<std::string> known = {"repository", "alias_map", "components", "profile", "checkers",
                                                "lambda", "thresholds", "window", "format", "store", "top_k",
                                                "series_metrics", "jobs", "component_filter"};
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (!known.count(it.key())) throw ConfigError("config: unknown key '" + it.key() + "'");

    if (doc.contains("repository")) {
        const json& r = doc["repository"];
        if (r.is_string()) {
            cfg.repository.path = resolve(base_dir, r.get<std::string>());
        } else if (r.is_object()) {
            if (r.contains("path")) cfg.repository.path = resolve(base_dir, get_as<std::string>(r["path"], "repository.path"));
            if (r.contains("branch")) cfg.repository.branch = get_as<std::string>(r["branch"], "repository.branch");
            if (r.contains("name")) cfg.repository.name = get_as<std::string>(r["name"], "repository.name");
        } else {
            throw ConfigError("config: 'repository' must be a path or an object");
        }
    }
    if (doc.contains("alias_map") && !doc["alias_map"].is_null())
        cfg.alias_map = resolve(base_dir, get_as<std::string>(doc["alias_map"], "alias_map"));
    if (doc.contains("components")) {
        if (!doc["components"].is_array()) throw ConfigError("config: 'components' must be an array");
        for (const auto& rule : doc["components"]) {
            if (!rule.is_object() || !rule.contains("pattern"))
                throw ConfigError("config: component rules need 'pattern' and 'component'");
            std::string name = rule.contains("component") ? get_as<std::string>(rule["component"], "component")
                                                          : get_as<std::string>(rule.value("name", json()), "name");
            cfg.components.push_back({get_as<std::string>(rule["pattern"], "pattern"), std::move(name)});
        }
        (void)cfg.component_map(); // validates rules
    }
    if (doc.contains("profile")) cfg.profile = get_as<std::string>(doc["profile"], "profile");
    if (doc.contains("checkers")) {
        if (!doc["checkers"].is_array()) throw ConfigError("config: 'checkers' must be an array");
        for (const auto& c : doc["checkers"]) {
            CheckerCommand cmd;
            if (c.is_string())
                cmd.argv = {c.get<std::string>()};
            else
                cmd.argv = get_as<std::vector<std::string>>(c, "checkers[]");
            if (cmd.argv.empty()) throw ConfigError("config: empty checker command");
            cfg.checkers.push_back(std::move(cmd));
        }
    }
    if (doc.contains("lambda")) cfg.squale.set_lambda(get_as<double>(doc["lambda"], "lambda"));
    if (doc.contains("thresholds")) {
        if (!doc["thresholds"].is_array()) throw ConfigError("config: 'thresholds' must be an array");
        for (const auto& t : doc["thresholds"]) {
            const std::string metric_text = get_as<std::string>(t.value("metric", json()), "thresholds[].metric");
            auto metric = metric_from_name(metric_text);
            if (!metric) throw UnknownMetric("config: unknown metric '" + metric_text + "'");
            Threshold th = cfg.squale.has_threshold(*metric) ? cfg.squale.threshold(*metric)
                                                             : Threshold{MarkFormula::Cc, 0.0, 1.0};
            if (t.contains("formula")) {
                const std::string f = get_as<std::string>(t["formula"], "thresholds[].formula");
                auto formula = mark_formula_from_name(f);
                if (!formula) throw ConfigError("config: unknown formula id '" + f + "'");
                th.formula = *formula;
            }
            if (t.contains("lower")) th.lower = get_as<double>(t["lower"], "thresholds[].lower");
            if (t.contains("upper")) th.upper = get_as<double>(t["upper"], "thresholds[].upper");
            cfg.squale.set_threshold(*metric, th);
        }
    }
    if (doc.contains("window")) {
        const json& w = doc["window"];
        if (!w.is_object()) throw ConfigError("config: 'window' must be an object");
        if (w.contains("reference_time") && !w["reference_time"].is_null())
            cfg.reference_time = parse_iso8601(get_as<std::string>(w["reference_time"], "window.reference_time"));
        if (w.contains("duration_days")) cfg.window_days = get_as<int>(w["duration_days"], "window.duration_days");
    }
    if (doc.contains("format")) cfg.format = format_from_name(get_as<std::string>(doc["format"], "format"));
    if (doc.contains("store")) cfg.store = resolve(base_dir, get_as<std::string>(doc["store"], "store"));
    if (doc.contains("top_k")) cfg.top_k = get_as<std::size_t>(doc["top_k"], "top_k");
    if (doc.contains("component_filter") && !doc["component_filter"].is_null())
        cfg.component_filter = get_as<std::string>(doc["component_filter"], "component_filter");
    if (doc.contains("series_metrics")) {
        cfg.series_metrics.clear();
        for (const auto& m : get_as<std::vector<std::string>>(doc["series_metrics"], "series_metrics")) {
            auto metric = metric_from_name(m);
            if (!metric || *metric == Metric::Sloc) throw UnknownMetric("config: unknown series metric '" + m + "'");
            cfg.series_metrics.push_back(*metric);
        }
    }
    if (doc.contains("jobs")) cfg.jobs = get_as<int>(doc["jobs"], "jobs");
    if (cfg.window_days < 1) throw ConfigError("config: window.duration_days must be >= 1");
    return cfg;
}

RunConfig load_config(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    json doc;
    try {
        doc = json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw ConfigError("config file " + file.string() + " is not valid JSON: " + e.what());
    }
    fs::path base = fs::absolute(file).parent_path();
    return parse_config(doc, base);
}

} // namespace qualex
