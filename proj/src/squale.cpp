#include "qualex/squale.hpp"

#include "qualex/errors.hpp"
#include "qualex/text.hpp"

#include <algorithm>
#include <cmath>

namespace qualex {

std::optional<MarkFormula> mark_formula_from_name(std::string_view name) {
    const std::string n = to_lower_ascii(name);
    if (n == "cc") return MarkFormula::Cc;
    if (n == "hv") return MarkFormula::Hv;
    if (n == "hd") return MarkFormula::Hd;
    if (n == "ca") return MarkFormula::Ca;
    if (n == "ce") return MarkFormula::Ce;
    return std::nullopt;
}

std::string_view mark_formula_name(MarkFormula f) {
    switch (f) {
    case MarkFormula::Cc: return "cc";
    case MarkFormula::Hv: return "hv";
    case MarkFormula::Hd: return "hd";
    case MarkFormula::Ca: return "Ca";
    case MarkFormula::Ce: return "Ce";
    }
    return "?";
}

double apply_formula(MarkFormula f, double x) {
    switch (f) {
    case MarkFormula::Cc: return std::pow(2.0, (7.0 - x) / 3.5);
    case MarkFormula::Hv: return 3.0 - 3.0 * x / 1000.0;
    case MarkFormula::Hd: return 3.0 - 3.0 * x / 50.0;
    case MarkFormula::Ca: return std::pow(2.0, (30.0 - x) / 7.0);
    case MarkFormula::Ce: return std::pow(2.0, (10.0 - x) / 2.0);
    }
    return 0.0;
}

std::map<Metric, Threshold> default_thresholds() {
    return {
        {Metric::Cc, {MarkFormula::Cc, 2.0, 19.0}},
        {Metric::Hv, {MarkFormula::Hv, 20.0, 1000.0}},
        {Metric::Hd, {MarkFormula::Hd, 10.0, 50.0}},
        {Metric::Ca, {MarkFormula::Ca, 19.0, 60.0}},
        {Metric::Ce, {MarkFormula::Ce, 6.0, 19.0}},
    };
}

SqualeConfig::SqualeConfig() : SqualeConfig(9.0) {}

SqualeConfig::SqualeConfig(double lambda) : lambda_(9.0), thresholds_(default_thresholds()) { set_lambda(lambda); }

void SqualeConfig::set_lambda(double lambda) {
    if (!std::isfinite(lambda) || !(lambda > 1.0))
        throw ConfigError("lambda must be a finite number greater than 1, got " + format_number(lambda));
    lambda_ = lambda;
}

const Threshold& SqualeConfig::threshold(Metric m) const {
    auto it = thresholds_.find(m);
    if (it == thresholds_.end())
        throw UnknownMetric("no individual-mark threshold for metric '" + std::string(metric_name(m)) + "'");
    return it->second;
}

void SqualeConfig::set_threshold(Metric m, Threshold t) {
    if (m == Metric::Sloc) throw UnknownMetric("sloc has no individual-mark formula");
    if (!std::isfinite(t.lower) || !std::isfinite(t.upper) || !(t.lower < t.upper))
        throw ConfigError("threshold for '" + std::string(metric_name(m)) + "' needs lower < upper");
    thresholds_[m] = t;
}

double individual_mark(Metric metric, double raw, const SqualeConfig& config) {
    const Threshold& t = config.threshold(metric);
    if (!std::isfinite(raw))
        throw ConfigError("non-finite raw value for metric '" + std::string(metric_name(metric)) + "'");
    if (raw < t.lower) return kMaxMark;
    if (raw > t.upper) return kMinMark;
    return std::clamp(apply_formula(t.formula, raw), kMinMark, kMaxMark);
}

std::map<Metric, double> individual_marks(const MetricVector& v, const SqualeConfig& config) {
    std::map<Metric, double> marks;
    for (Metric m : kMarkedMetrics)
        if (v[m] && config.has_threshold(m)) marks[m] = individual_mark(m, *v[m], config);
    return marks;
}

double global_mark(std::span<const double> marks, double lambda) {
    if (marks.empty()) throw EmptyMarks("global mark of an empty mark set");
    if (!(lambda > 1.0)) throw ConfigError("lambda must be greater than 1");
    // Evaluated as min - log_lambda(mean(lambda^-(mark - min))), which is the
    // same quantity but keeps every weight in (0, 1] and returns m exactly
    // for a constant mark set. Summing in sorted order makes the result
    // independent of input order.
    const auto [lo, hi] = std::minmax_element(marks.begin(), marks.end());
    std::vector<double> weights;
    weights.reserve(marks.size());
    for (double m : marks) weights.push_back(std::pow(lambda, -(m - *lo)));
    std::sort(weights.begin(), weights.end());
    double sum = 0.0;
    for (double w : weights) sum += w;
    const double mean = sum / static_cast<double>(marks.size());
    const double gm = *lo - std::log(mean) / std::log(lambda);
    return std::clamp(std::clamp(gm, *lo, *hi), kMinMark, kMaxMark);
}

double global_mark(std::span<const double> marks, const SqualeConfig& config) {
    return global_mark(marks, config.lambda());
}

std::optional<double> pooled_global_mark(std::span<const MetricVector> files, const SqualeConfig& config,
                                         std::optional<Metric> only) {
    std::vector<double> pool;
    for (const MetricVector& v : files) {
        for (const auto& [metric, mark] : individual_marks(v, config))
            if (!only || *only == metric) pool.push_back(mark);
    }
    if (pool.empty()) return std::nullopt;
    return global_mark(pool, config);
}

} // namespace qualex
