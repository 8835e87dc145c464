#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace qualex {

struct ProcessResult {
    int exit_code = 0;
    std::string out;
    std::string err;
};

/// Runs argv[0] (looked up on PATH) with the given arguments and captures both
/// output streams. A process killed by a signal reports 128 + signo.
/// Throws std::system_error if the process cannot be started at all.
ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::filesystem::path& cwd = {},
                          const std::vector<std::string>& extra_env = {});

} // namespace qualex
