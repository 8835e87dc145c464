#pragma once

#include "qualex/metrics.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace qualex {

/// The five individual-mark formulas. Each is selected by the metric name
/// whose formula it is.
enum class MarkFormula {
    Cc, // 2^((7 - x) / 3.5)
    Hv, // 3 - 3x / 1000
    Hd, // 3 - 3x / 50
    Ca, // 2^((30 - x) / 7)
    Ce, // 2^((10 - x) / 2)
};

std::optional<MarkFormula> mark_formula_from_name(std::string_view name);
std::string_view mark_formula_name(MarkFormula f);
double apply_formula(MarkFormula f, double raw);

struct Threshold {
    MarkFormula formula;
    double lower;
    double upper;
};

inline constexpr double kMinMark = 0.0;
inline constexpr double kMaxMark = 3.0;

class SqualeConfig {
public:
    /// lambda 9 with the default threshold table.
    SqualeConfig();
    explicit SqualeConfig(double lambda);

    double lambda() const noexcept { return lambda_; }
    void set_lambda(double lambda);

    const Threshold& threshold(Metric m) const;
    void set_threshold(Metric m, Threshold t);
    bool has_threshold(Metric m) const { return thresholds_.count(m) != 0; }
    const std::map<Metric, Threshold>& thresholds() const noexcept { return thresholds_; }

private:
    double lambda_;
    std::map<Metric, Threshold> thresholds_;
};

/// The reference threshold table (cc 2..19, hv 20..1000, hd 10..50,
/// Ca 19..60, Ce 6..19).
std::map<Metric, Threshold> default_thresholds();

/// Raw value -> mark in [0, 3]. Below the lower threshold the mark is 3,
/// above the upper threshold it is 0, in between the formula clamped to [0, 3].
/// Throws UnknownMetric if the metric has no threshold.
double individual_mark(Metric metric, double raw, const SqualeConfig& config);

/// Marks for every metric present in the vector that has a threshold.
std::map<Metric, double> individual_marks(const MetricVector& v, const SqualeConfig& config);

/// -log_lambda(mean(lambda^-mark)). Throws EmptyMarks.
double global_mark(std::span<const double> marks, double lambda);
double global_mark(std::span<const double> marks, const SqualeConfig& config);

/// Flat pooling: the marks of every file go into one global-mark computation.
/// Returns nullopt if the pool is empty. With `only` set, only that metric's
/// marks are pooled.
std::optional<double> pooled_global_mark(std::span<const MetricVector> files, const SqualeConfig& config,
                                         std::optional<Metric> only = std::nullopt);

} // namespace qualex
