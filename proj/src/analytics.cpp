#include "cdindex/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace cdindex {
namespace {

std::vector<double> defined_values(std::span<const CdResult> results) {
    std::vector<double> values;
    values.reserve(results.size());
    for (const CdResult& res : results)
        if (res.cd) values.push_back(*res.cd);
    return values;
}

} // namespace

double interpolated_quantile(std::span<const double> sorted, double p) {
    const std::size_t m = sorted.size();
    if (m == 1) return sorted[0];
    const double h = p * static_cast<double>(m - 1);
    auto lo = static_cast<std::size_t>(h);
    if (lo >= m - 1) return sorted[m - 1];
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

SummaryStats summarize(std::span<const CdResult> results) {
    std::vector<double> values = defined_values(results);
    if (values.empty()) throw EmptyInputError("no defined cd values to summarize");

    // Welford one-pass mean and population variance.
    double mean = 0, m2 = 0;
    std::uint64_t count = 0;
    for (double v : values) {
        ++count;
        double delta = v - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (v - mean);
    }

    std::sort(values.begin(), values.end());
    SummaryStats stats;
    stats.count = count;
    stats.mean = mean;
    stats.std_dev = std::sqrt(m2 / static_cast<double>(count));
    stats.min = values.front();
    stats.max = values.back();
    stats.q25 = interpolated_quantile(values, 0.25);
    stats.q50 = interpolated_quantile(values, 0.50);
    stats.q75 = interpolated_quantile(values, 0.75);
    stats.q95 = interpolated_quantile(values, 0.95);
    stats.q99 = interpolated_quantile(values, 0.99);
    return stats;
}

Histogram make_histogram(std::span<const CdResult> results, double bin_width) {
    if (!(bin_width > 0)) throw NonPositiveBinWidthError(bin_width);
    std::vector<double> values = defined_values(results);
    if (values.empty()) throw EmptyInputError("no defined cd values to bin");

    const auto bin_count =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(2.0 / bin_width)));
    auto lower_edge = [&](std::size_t i) {
        return -1.0 + static_cast<double>(i) * bin_width;
    };

    Histogram hist;
    hist.bin_width = bin_width;
    hist.bins.resize(bin_count);
    for (std::size_t i = 0; i < bin_count; ++i) hist.bins[i] = {lower_edge(i), 0};

    for (double v : values) {
        auto idx = static_cast<std::size_t>(
            std::max(0.0, std::floor((v + 1.0) / bin_width)));
        if (idx >= bin_count) idx = bin_count - 1;
        // Settle floating-point edge cases so membership is exactly
        // [edge_i, edge_{i+1}), final bin closed at 1.
        while (idx + 1 < bin_count && v >= lower_edge(idx + 1)) ++idx;
        while (idx > 0 && v < lower_edge(idx)) --idx;
        ++hist.bins[idx].count;
        ++hist.total;
    }
    return hist;
}

std::vector<TrendPoint> yearly_trend(std::span<const CdResult> results,
                                     const std::unordered_map<PubId, int>& year_of) {
    std::map<int, std::pair<double, std::uint64_t>> groups; // year -> (sum, count)
    for (const CdResult& res : results) {
        auto it = year_of.find(res.focal);
        if (it == year_of.end()) throw MissingYearError(res.focal);
        if (!res.cd) continue;
        auto& [sum, count] = groups[it->second];
        sum += *res.cd;
        ++count;
    }
    std::vector<TrendPoint> out;
    out.reserve(groups.size());
    for (const auto& [year, acc] : groups)
        out.push_back({year, acc.first / static_cast<double>(acc.second), acc.second});
    return out;
}

LabelMap classify(std::span<const CdResult> results, double top_fraction) {
    if (!(top_fraction > 0.0 && top_fraction < 0.5))
        throw Error(ErrorCategory::Validation, "top_fraction must lie in (0, 0.5)");

    std::vector<double> values = defined_values(results);
    if (values.empty()) throw EmptyInputError("no defined cd values to classify");
    std::sort(values.begin(), values.end());
    const double threshold_lo = interpolated_quantile(values, top_fraction);
    const double threshold_hi = interpolated_quantile(values, 1.0 - top_fraction);

    LabelMap labels;
    labels.reserve(results.size());
    for (const CdResult& res : results) {
        if (!res.cd) continue;
        DisruptionLabel label = DisruptionLabel::Neutral;
        if (*res.cd > threshold_hi)
            label = DisruptionLabel::Disruptive;
        else if (*res.cd < threshold_lo)
            label = DisruptionLabel::Consolidating;
        labels.emplace(res.focal, label);
    }
    return labels;
}

LabelComparison compare_labels(const LabelMap& truth, const LabelMap& prediction) {
    LabelComparison cmp;
    for (const auto& [id, truth_label] : truth) {
        auto it = prediction.find(id);
        if (it == prediction.end()) continue;
        ++cmp.matrix[static_cast<std::size_t>(truth_label)]
                    [static_cast<std::size_t>(it->second)];
        ++cmp.overlap;
    }
    if (cmp.overlap == 0) throw NoOverlapError();

    for (std::size_t c = 0; c < 3; ++c) {
        std::uint64_t row = 0, col = 0;
        for (std::size_t j = 0; j < 3; ++j) {
            row += cmp.matrix[c][j];
            col += cmp.matrix[j][c];
        }
        auto diag = static_cast<double>(cmp.matrix[c][c]);
        ClassMetrics& m = cmp.per_class[c];
        m.support = row;
        m.precision_defined = col > 0;
        m.recall_defined = row > 0;
        m.precision = col > 0 ? diag / static_cast<double>(col) : 0.0;
        m.recall = row > 0 ? diag / static_cast<double>(row) : 0.0;
        m.f1_defined = (m.precision + m.recall) > 0;
        m.f1 = m.f1_defined
                   ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                   : 0.0;
    }
    return cmp;
}

std::string_view label_name(DisruptionLabel label) {
    switch (label) {
        case DisruptionLabel::Consolidating: return "consolidating";
        case DisruptionLabel::Neutral: return "neutral";
        case DisruptionLabel::Disruptive: return "disruptive";
    }
    return "neutral";
}

std::optional<DisruptionLabel> label_from_name(std::string_view name) {
    if (name == "consolidating") return DisruptionLabel::Consolidating;
    if (name == "neutral") return DisruptionLabel::Neutral;
    if (name == "disruptive") return DisruptionLabel::Disruptive;
    return std::nullopt;
}

} // namespace cdindex
