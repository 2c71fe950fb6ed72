#pragma once
// Aggregate statistics over a set of CdResults: summary with quantiles,
// fixed-width histogram over [-1, 1], per-year means, percentile-based
// disruptive/consolidating labels and label-set comparison.
//
// Undefined cd values are excluded from every statistic. Quantiles use
// linear interpolation between closest order statistics; std is the
// population estimator. Quantile computation materializes the defined values
// (memory is linear in the number of defined results).

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cdindex/cd.hpp"

namespace cdindex {

struct SummaryStats {
    std::uint64_t count = 0;
    double mean = 0;
    double std_dev = 0; // population
    double min = 0;
    double max = 0;
    double q25 = 0, q50 = 0, q75 = 0, q95 = 0, q99 = 0;
};

struct HistogramBin {
    double lower; // inclusive lower edge
    std::uint64_t count;
};

// Bins cover [-1, 1]; membership is [lower, next_lower) except the final bin
// which also includes 1.0. The last bin is truncated at 1 when bin_width does
// not divide the interval evenly.
struct Histogram {
    double bin_width = 0;
    std::vector<HistogramBin> bins;
    std::uint64_t total = 0; // equals the number of defined cd values
};

struct TrendPoint {
    int year;
    double mean_cd;
    std::uint64_t count; // defined cd values for that year, >= 1
};

enum class DisruptionLabel { Consolidating = 0, Neutral = 1, Disruptive = 2 };

struct ClassMetrics {
    double precision = 0;
    double recall = 0;
    double f1 = 0;
    std::uint64_t support = 0; // truth-row total
    // false when the corresponding denominator was zero (value reported as 0)
    bool precision_defined = true;
    bool recall_defined = true;
    bool f1_defined = true;
};

// rows = truth label, columns = predicted label, order C / N / D.
struct LabelComparison {
    std::array<std::array<std::uint64_t, 3>, 3> matrix{};
    std::array<ClassMetrics, 3> per_class{};
    std::uint64_t overlap = 0; // publications present in both sources
};

using LabelMap = std::unordered_map<PubId, DisruptionLabel>;

// Linear interpolation between order statistics; input must be sorted
// ascending and non-empty, p in [0, 1].
double interpolated_quantile(std::span<const double> sorted, double p);

SummaryStats summarize(std::span<const CdResult> results);

Histogram make_histogram(std::span<const CdResult> results, double bin_width = 0.01);

// One point per year with at least one defined cd, ascending by year. Every
// result's focal id must be present in year_of.
std::vector<TrendPoint> yearly_trend(std::span<const CdResult> results,
                                     const std::unordered_map<PubId, int>& year_of);

// Thresholds at quantile(top_fraction) and quantile(1 - top_fraction) over
// the defined values; strict inequalities, ties label Neutral.
// top_fraction must lie in (0, 0.5).
LabelMap classify(std::span<const CdResult> results, double top_fraction = 0.01);

LabelComparison compare_labels(const LabelMap& truth, const LabelMap& prediction);

std::string_view label_name(DisruptionLabel label);
std::optional<DisruptionLabel> label_from_name(std::string_view name);

} // namespace cdindex
