#include "qualex/metrics.hpp"

#include "qualex/text.hpp"

namespace qualex {

std::string_view metric_name(Metric m) {
    switch (m) {
    case Metric::Cc: return "cc";
    case Metric::Hv: return "hv";
    case Metric::Hd: return "hd";
    case Metric::Ca: return "Ca";
    case Metric::Ce: return "Ce";
    case Metric::Sloc: return "sloc";
    }
    return "?";
}

std::optional<Metric> metric_from_name(std::string_view name) {
    const std::string lower = to_lower_ascii(name);
    for (Metric m : kAllMetrics)
        if (to_lower_ascii(metric_name(m)) == lower) return m;
    return std::nullopt;
}

std::optional<double>& MetricVector::operator[](Metric m) {
    switch (m) {
    case Metric::Cc: return cc;
    case Metric::Hv: return hv;
    case Metric::Hd: return hd;
    case Metric::Ca: return ca;
    case Metric::Ce: return ce;
    case Metric::Sloc: break;
    }
    return sloc;
}

const std::optional<double>& MetricVector::operator[](Metric m) const {
    return const_cast<MetricVector&>(*this)[m];
}

void MetricVector::merge_from(const MetricVector& other) {
    for (Metric m : kAllMetrics)
        if (other[m]) (*this)[m] = other[m];
}

} // namespace qualex
