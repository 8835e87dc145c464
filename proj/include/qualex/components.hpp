#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qualex {

/// Glob match over '/'-separated paths: `*` and `?` stay within one segment,
/// `**` spans any number of segments, `[...]` is a character class.
bool glob_match(std::string_view pattern, std::string_view path);

struct ComponentRule {
    std::string pattern;
    std::string component;
};

/// Ordered path rules; the first matching rule names the component. Paths no
/// rule matches fall back to their top-level directory ("(root)" for files at
/// the repository root).
class ComponentMap {
public:
    ComponentMap() = default;
    explicit ComponentMap(std::vector<ComponentRule> rules);

    std::string component_of(std::string_view path) const;
    const std::vector<ComponentRule>& rules() const noexcept { return rules_; }

private:
    std::vector<ComponentRule> rules_;
};

inline constexpr std::string_view kRootComponent = "(root)";

} // namespace qualex
