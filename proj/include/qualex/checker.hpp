#pragma once

#include "qualex/batch.hpp"
#include "qualex/metrics.hpp"

#include <map>
#include <string>
#include <vector>

namespace qualex {

/// An external metric tool invoked as `<argv...> <dir>`. It must print a JSON
/// array of `{"path": ..., "cc"|"hv"|"hd"|"Ca"|"Ce"|"sloc": number...}` objects
/// (a lone object is accepted too) and exit with 0.
struct CheckerCommand {
    std::vector<std::string> argv;
};

/// Writes the files below a fresh temporary directory, runs the checker once
/// on it and parses the reply. Metrics the tool omits stay absent.
/// Throws CheckerProcessFailure or CheckerProtocolError.
std::map<std::string, MetricVector> run_external_checker(const CheckerCommand& command,
                                                         const std::vector<SourceFile>& files);

/// Parses a checker's standard output. Throws CheckerProtocolError.
std::map<std::string, MetricVector> parse_checker_output(const std::string& payload);

} // namespace qualex
