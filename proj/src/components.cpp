#include "qualex/components.hpp"

#include "qualex/errors.hpp"

namespace qualex {

namespace {

// Matches a bracket expression at pattern[pi] against c; sets pi past it.
bool match_class(std::string_view pattern, std::size_t& pi, char c, bool& valid) {
    std::size_t i = pi + 1;
    bool negate = false;
    if (i < pattern.size() && (pattern[i] == '!' || pattern[i] == '^')) {
        negate = true;
        ++i;
    }
    bool matched = false;
    bool first = true;
    while (i < pattern.size() && (first || pattern[i] != ']')) {
        first = false;
        char lo = pattern[i];
        char hi = lo;
        if (i + 2 < pattern.size() && pattern[i + 1] == '-' && pattern[i + 2] != ']') {
            hi = pattern[i + 2];
            i += 2;
        }
        if (c >= lo && c <= hi) matched = true;
        ++i;
    }
    if (i >= pattern.size()) {
        valid = false;
        return false;
    }
    pi = i + 1;
    return matched != negate;
}

bool match_from(std::string_view p, std::size_t pi, std::string_view s, std::size_t si) {
    while (pi < p.size()) {
        if (p[pi] == '*' && pi + 1 < p.size() && p[pi + 1] == '*') {
            std::size_t rest = pi + 2;
            // "**/" also matches zero directories
            if (rest < p.size() && p[rest] == '/') {
                if (match_from(p, rest + 1, s, si)) return true;
            }
            for (std::size_t k = si; k <= s.size(); ++k)
                if (match_from(p, rest, s, k)) return true;
            return false;
        }
        if (p[pi] == '*') {
            for (std::size_t k = si;; ++k) {
                if (match_from(p, pi + 1, s, k)) return true;
                if (k >= s.size() || s[k] == '/') return false;
            }
        }
        if (si >= s.size()) return false;
        if (p[pi] == '?') {
            if (s[si] == '/') return false;
            ++pi;
            ++si;
            continue;
        }
        if (p[pi] == '[') {
            bool valid = true;
            std::size_t next = pi;
            bool ok = match_class(p, next, s[si], valid);
            if (valid) {
                if (!ok || s[si] == '/') return false;
                pi = next;
                ++si;
                continue;
            }
        }
        if (p[pi] != s[si]) return false;
        ++pi;
        ++si;
    }
    return si == s.size();
}

} // namespace

bool glob_match(std::string_view pattern, std::string_view path) { return match_from(pattern, 0, path, 0); }

ComponentMap::ComponentMap(std::vector<ComponentRule> rules) : rules_(std::move(rules)) {
    for (const auto& r : rules_)
        if (r.pattern.empty() || r.component.empty())
            throw ConfigError("component rules need a non-empty pattern and name");
}

std::string ComponentMap::component_of(std::string_view path) const {
    for (const auto& r : rules_)
        if (glob_match(r.pattern, path)) return r.component;
    const auto slash = path.find('/');
    if (slash == std::string_view::npos) return std::string(kRootComponent);
    return std::string(path.substr(0, slash));
}

} // namespace qualex
