#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace qualex {

enum class Metric { Cc, Hv, Hd, Ca, Ce, Sloc };

inline constexpr std::array<Metric, 6> kAllMetrics{Metric::Cc, Metric::Hv, Metric::Hd,
                                                   Metric::Ca, Metric::Ce, Metric::Sloc};
/// The metrics that have an individual-mark formula.
inline constexpr std::array<Metric, 5> kMarkedMetrics{Metric::Cc, Metric::Hv, Metric::Hd, Metric::Ca, Metric::Ce};

std::string_view metric_name(Metric m);
/// Accepts "cc", "hv", "hd", "Ca", "Ce", "sloc" (case-insensitive).
std::optional<Metric> metric_from_name(std::string_view name);

/// Raw metric values of one file at one revision. Absent means "not measured",
/// which is distinct from zero.
struct MetricVector {
    std::optional<double> cc;
    std::optional<double> hv;
    std::optional<double> hd;
    std::optional<double> ca;
    std::optional<double> ce;
    std::optional<double> sloc;

    std::optional<double>& operator[](Metric m);
    const std::optional<double>& operator[](Metric m) const;

    /// Copies every metric present in `other` over this one.
    void merge_from(const MetricVector& other);

    bool operator==(const MetricVector&) const = default;
};

} // namespace qualex
