#pragma once

#include <string_view>

namespace qualex {

enum class LogLevel { Quiet, Warning, Info };

void set_log_level(LogLevel level);
void log_warning(std::string_view message);
void log_info(std::string_view message);

} // namespace qualex
