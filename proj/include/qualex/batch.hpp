#pragma once

#include "qualex/analyzer.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qualex {

struct SourceFile {
    std::string path;
    std::string text;
};

struct FileOutcome {
    std::string path;
    /// Empty when the file could not be analyzed; `error` then says why.
    std::optional<SourceAnalysis> analysis;
    std::string error;
};

/// Reference implementation: analyzes files one after another.
std::vector<FileOutcome> analyze_batch_serial(const std::vector<SourceFile>& files, const LanguageProfile& profile);

/// OpenMP kernel over files. Output order matches input order, so results are
/// identical to analyze_batch_serial regardless of thread count.
std::vector<FileOutcome> analyze_batch_parallel(const std::vector<SourceFile>& files,
                                                const LanguageProfile& profile);

/// Caps the parallel kernel's thread count; 0 keeps the OpenMP default.
void set_analysis_threads(int threads);

/// Threads the parallel kernel will use (1 without OpenMP).
int analysis_threads();

} // namespace qualex
