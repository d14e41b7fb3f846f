#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bayesab/models.hpp"

namespace bayesab {

/// Fraction of paired indices with y1_j > y2_j.
double prob_pairwise(std::span<const double> y1, std::span<const double> y2);

/// Per-variant probability of being the argmax across paired draws. Ties go
/// to the lowest variant index. The returned values are counts/n and sum to 1.
std::vector<double> prob_best(const MetricSamples& samples);

struct UpliftEstimate {
    double mean = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

/// Mean and equal-tailed 95% interval of (y1_j - y2_j) / y2_j. Indices where
/// y2_j == 0 are excluded; throws if every reference sample is zero.
UpliftEstimate expected_uplift(std::span<const double> y1, std::span<const double> y2);

/// Mean of max((y2_j - y1_j) / y1_j, 0): the expected relative regret of
/// adopting variant 1 when variant 2 was truly better. Indices with y1_j == 0
/// are excluded; throws if every y1 sample is zero.
double expected_loss(std::span<const double> y1, std::span<const double> y2);

/// Equal-tailed credible interval: quantiles at (1-mass)/2 and 1-(1-mass)/2,
/// linearly interpolated on the sorted samples.
std::pair<double, double> credible_interval(std::span<const double> samples, double mass);

/// Linearly interpolated sample quantile, q in [0, 1].
double quantile(std::span<const double> sorted_samples, double q);

struct VariantReport {
    std::string name;
    double posterior_mean = 0.0;
    double prob_best = 0.0;
    // Absent for the baseline row:
    std::optional<double> prob_beat_baseline;
    std::optional<double> uplift_mean;
    std::optional<std::pair<double, double>> uplift_ci95;
    std::optional<double> expected_loss;
};

/// The full decision table for one metric: prob_best over all variants, and
/// beat-baseline / uplift / loss for every variant vs. the baseline.
struct DecisionReport {
    Metric metric = Metric::conversion;
    std::string baseline;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::vector<VariantReport> variants;

    std::string to_json() const;   // full precision, stable key order
    std::string to_table() const;  // aligned text, 2 decimals
};

DecisionReport build_report(const MetricSamples& samples, const std::string& baseline);

} // namespace bayesab
