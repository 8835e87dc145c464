#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qualex {

/// Replaces every invalid UTF-8 sequence with U+FFFD.
std::string sanitize_utf8(std::string_view bytes);

std::string trim(std::string_view s);
std::string to_lower_ascii(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

/// Shortest decimal that round-trips to the same double. Used by every report
/// so that CSV, JSON and SVG carry identical digits.
std::string format_number(double v);

/// UTC seconds -> "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601(std::int64_t utc_seconds);

/// Accepts "YYYY-MM-DD", "YYYY-MM-DDTHH:MM[:SS]" with optional "Z" or
/// "+HH:MM"/"-HH:MM" offset. Throws ConfigError on malformed input.
std::int64_t parse_iso8601(std::string_view text);

/// ISO-8601 week label ("2024-W03") of a UTC timestamp.
std::string iso_week_label(std::int64_t utc_seconds);

/// UTC seconds of 00:00 on the Monday starting the ISO week containing t.
std::int64_t iso_week_start(std::int64_t utc_seconds);

/// Repository-relative path normalization: forward slashes, no "." segments.
/// Returns an empty string for paths that escape the root via "..".
std::string normalize_repo_path(std::string_view path);

} // namespace qualex
