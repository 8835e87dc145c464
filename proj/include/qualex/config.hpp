#pragma once

#include "qualex/checker.hpp"
#include "qualex/components.hpp"
#include "qualex/miner.hpp"
#include "qualex/squale.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace qualex {

enum class OutputFormat { Json, Csv, Svg };

std::string_view format_name(OutputFormat f);
OutputFormat format_from_name(std::string_view name);

/// Effective settings of one run: the configuration file with command-line
/// overrides applied. Relative paths in the file resolve against its directory.
struct RunConfig {
    RepositoryRef repository;
    std::filesystem::path alias_map;
    std::vector<ComponentRule> components;
    std::string profile = "c-family";
    std::vector<CheckerCommand> checkers;
    SqualeConfig squale;
    std::optional<std::int64_t> reference_time;
    int window_days = 62;
    OutputFormat format = OutputFormat::Json;
    std::filesystem::path store;
    std::size_t top_k = 3;
    std::string component_filter; // glob over component names; empty = all
    std::vector<Metric> series_metrics{Metric::Cc, Metric::Hv, Metric::Hd};
    int jobs = 0; // analysis threads, 0 = OpenMP default

    /// Analyzer version plus a fingerprint of the checker commands.
    std::string analyzer_version() const;
    ComponentMap component_map() const { return ComponentMap(components); }
    AliasMap aliases() const;

    /// Every effective value, echoed into report metadata.
    nlohmann::json to_json() const;
};

/// Parses a configuration document. Throws ConfigError.
RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& file);

/// Defaults for a run without a configuration file.
RunConfig default_config(const std::filesystem::path& base_dir);

} // namespace qualex
