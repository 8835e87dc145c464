#include "qualex/config.hpp"
#include "qualex/errors.hpp"
#include "qualex/log.hpp"
#include "qualex/pipeline.hpp"
#include "qualex/text.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace qualex;

namespace {

struct Options {
    std::string config;
    std::string repo;
    std::string store;
    std::string branch;
    std::string reference_time;
    std::string format;
    std::string component;
    std::vector<std::string> metrics;
    std::optional<int> window_days;
    std::optional<double> lambda;
    std::optional<std::size_t> top_k;
    std::optional<int> jobs;
    bool quiet = false;
    bool verbose = false;
    std::string revision;
};

fs::path absolute_dir(const std::string& p) {
    fs::path out = fs::absolute(p).lexically_normal();
    if (!out.has_filename() && out.has_parent_path() && out != out.root_path()) out = out.parent_path();
    return out;
}

RunConfig effective_config(const Options& o) {
    RunConfig cfg = o.config.empty() ? default_config(fs::current_path()) : load_config(o.config);
    if (!o.repo.empty()) {
        cfg.repository.path = absolute_dir(o.repo);
        if (o.config.empty()) cfg.store = cfg.repository.path / ".qualex-store";
    }
    if (!o.store.empty()) cfg.store = absolute_dir(o.store);
    if (!o.branch.empty()) cfg.repository.branch = o.branch;
    if (!o.reference_time.empty()) cfg.reference_time = parse_iso8601(o.reference_time);
    if (o.window_days) {
        if (*o.window_days < 1) throw ConfigError("--window-days must be >= 1");
        cfg.window_days = *o.window_days;
    }
    if (o.lambda) cfg.squale.set_lambda(*o.lambda);
    if (o.top_k) cfg.top_k = *o.top_k;
    if (!o.format.empty()) cfg.format = format_from_name(o.format);
    if (!o.component.empty()) cfg.component_filter = o.component;
    if (!o.metrics.empty()) {
        cfg.series_metrics.clear();
        for (const auto& name : o.metrics) {
            auto m = metric_from_name(name);
            if (!m || *m == Metric::Sloc) throw UnknownMetric("unknown series metric '" + name + "'");
            cfg.series_metrics.push_back(*m);
        }
    }
    if (o.jobs) cfg.jobs = *o.jobs;
    return cfg;
}

void emit_csv_metadata(const RunConfig& cfg) {
    std::cerr << "qualex: config " << cfg.to_json().dump(-1, ' ', false, nlohmann::json::error_handler_t::replace)
              << '\n';
}

void require_format(const RunConfig& cfg, std::initializer_list<OutputFormat> allowed, std::string_view command) {
    for (OutputFormat f : allowed)
        if (cfg.format == f) return;
    throw ConfigError(std::string(command) + ": format '" + std::string(format_name(cfg.format)) +
                      "' is not supported");
}

int run(const std::string& command, const Options& o) {
    const RunConfig cfg = effective_config(o);
    if (command == "analyze") {
        const AnalyzeSummary s = run_analysis(cfg);
        std::cout << render_analyze_json(cfg, s);
        return 0;
    }
    const LoadedHistory history = load_history(cfg);
    if (command == "experts") {
        require_format(cfg, {OutputFormat::Json, OutputFormat::Csv}, command);
        const ExpertsReport r = compute_experts(cfg, history);
        if (cfg.format == OutputFormat::Csv) {
            emit_csv_metadata(cfg);
            std::cout << render_experts_csv(r);
        } else {
            std::cout << render_experts_json(cfg, r);
        }
    } else if (command == "timeseries") {
        const TimeSeriesReport r = compute_timeseries(cfg, history);
        switch (cfg.format) {
        case OutputFormat::Json: std::cout << render_timeseries_json(cfg, r); break;
        case OutputFormat::Csv:
            emit_csv_metadata(cfg);
            std::cout << render_timeseries_csv(r);
            break;
        case OutputFormat::Svg: std::cout << render_timeseries_svg(cfg, r); break;
        }
    } else if (command == "commit") {
        require_format(cfg, {OutputFormat::Json, OutputFormat::Csv}, command);
        const CommitReport r = compute_commit(cfg, history, o.revision);
        if (cfg.format == OutputFormat::Csv) {
            emit_csv_metadata(cfg);
            std::cout << render_commit_csv(r);
        } else {
            std::cout << render_commit_json(cfg, r);
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qualex: code-quality expertise mining for git repositories"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", o.config, "JSON configuration file")->check(CLI::ExistingFile);
        sub->add_option("--repo", o.repo, "repository path (overrides config)");
        sub->add_option("--store", o.store, "analysis store directory");
        sub->add_option("--branch", o.branch, "branch to follow (default master, then main)");
        sub->add_flag("-q,--quiet", o.quiet, "suppress warnings");
        sub->add_flag("-v,--verbose", o.verbose, "progress messages");
    };
    auto reporting = [&](CLI::App* sub) {
        sub->add_option("--format", o.format, "json, csv or svg");
        sub->add_option("--lambda", o.lambda, "global mark hardness (3 soft, 9 medium, 30 hard)");
        sub->add_option("--component", o.component, "component name glob");
        sub->add_option("--reference-time", o.reference_time, "window end, ISO-8601");
        sub->add_option("--window-days", o.window_days, "window length in days");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "mine history and fill the analysis store");
    common(analyze);
    analyze->add_option("-j,--jobs", o.jobs, "analysis threads");

    CLI::App* experts = app.add_subcommand("experts", "rank experts per component");
    common(experts);
    reporting(experts);
    experts->add_option("--top-k", o.top_k, "experts per component");

    CLI::App* timeseries = app.add_subcommand("timeseries", "weekly quality deltas");
    common(timeseries);
    reporting(timeseries);
    timeseries->add_option("--metrics", o.metrics, "series metrics (cc, hv, hd, Ca, Ce)")->delimiter(',');

    CLI::App* commit = app.add_subcommand("commit", "metric changes of one revision");
    common(commit);
    reporting(commit);
    commit->add_option("revision", o.revision, "revision id or unique prefix")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    set_log_level(o.quiet ? LogLevel::Quiet : (o.verbose ? LogLevel::Info : LogLevel::Warning));
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return run(command, o);
    } catch (const Error& e) {
        std::cerr << "qualex: error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "qualex: error: " << e.what() << '\n';
        return 1;
    }
}
