#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bayesab/distributions.hpp"
#include "bayesab/rng.hpp"

namespace bayesab {

/// Measure of interest an experiment is evaluated on.
enum class Metric { conversion, value, gain };

std::string to_string(Metric metric);
Metric metric_from_string(const std::string& name);

/// One variant where the visitor has a single option: N visitors, C
/// conversions, optional per-conversion value and per-non-conversion loss.
struct OneOptionObservations {
    std::string name;
    std::uint64_t visitors = 0;
    std::uint64_t conversions = 0;
    std::optional<double> value;  // currency per conversion
    double loss = 0.0;            // currency per non-conversion (pay-per-click etc.)

    bool operator==(const OneOptionObservations&) const = default;
};

/// One variant with K options: per-option conversion counts and values, plus
/// a flat cost per visitor and per-non-conversion loss.
struct MultiOptionObservations {
    std::string name;
    std::uint64_t visitors = 0;
    std::vector<std::uint64_t> conversions;  // length K >= 1
    std::vector<double> values;              // length K, currency per conversion
    double cost_per_visitor = 0.0;
    double loss = 0.0;

    std::uint64_t total_conversions() const;

    bool operator==(const MultiOptionObservations&) const = default;
};

/// One variant where only totals are observed: conversions and the revenue
/// summed over all successes.
struct AggregatedObservations {
    std::string name;
    std::uint64_t visitors = 0;
    std::uint64_t conversions = 0;
    double revenue_total = 0.0;
    double cost_per_visitor = 0.0;

    bool operator==(const AggregatedObservations&) const = default;
};

void validate(const OneOptionObservations& obs);
void validate(const MultiOptionObservations& obs);
void validate(const AggregatedObservations& obs);

/// Updated conjugate parameters for one variant, plus the observation
/// metadata needed to turn rate draws into value/gain draws.
struct OneOptionPosterior {
    std::string name;
    BetaParams rate;  // prior + (C, N - C)
    std::optional<double> value;
    double loss = 0.0;
};

struct MultiOptionPosterior {
    std::string name;
    DirichletParams rate;  // K+1 cells; last = no conversion
    std::vector<double> values;
    double cost_per_visitor = 0.0;
    double loss = 0.0;
};

struct AggregatedPosterior {
    std::string name;
    BetaParams rate;           // conversion rate, as in the one-option model
    GammaParams revenue_rate;  // posterior of the exponential rate 1/v_bar
    double cost_per_visitor = 0.0;
};

/// Beta(a + C, b + (N - C)).
OneOptionPosterior posterior_one_option(const BetaParams& prior,
                                        const OneOptionObservations& obs);

/// Dir(a_1 + c_1, ..., a_K + c_K, a_{K+1} + (N - sum c)). The prior must have
/// length K + 1.
MultiOptionPosterior posterior_multi_options(const DirichletParams& prior,
                                             const MultiOptionObservations& obs);

/// Beta part as posterior_one_option; Gamma part (shape + C, rate + s), the
/// posterior of the exponential *rate*, so per-sale revenue is 1/rate-draw.
AggregatedPosterior posterior_aggregated(const BetaParams& prior_rate,
                                         const GammaParams& prior_revenue,
                                         const AggregatedObservations& obs);

/// All variants of one experiment, same scenario shape.
struct PosteriorModel {
    std::variant<std::vector<OneOptionPosterior>,
                 std::vector<MultiOptionPosterior>,
                 std::vector<AggregatedPosterior>>
        variants;

    std::size_t variant_count() const;
    std::vector<std::string> names() const;
};

/// V x n Monte-Carlo draws of one metric, one row per variant, paired by index.
struct MetricSamples {
    std::vector<std::string> names;
    Metric metric = Metric::conversion;
    std::vector<std::vector<double>> samples;
    std::uint64_t seed = 0;  // root seed the sub-streams were derived from

    std::size_t variant_count() const { return samples.size(); }
    std::size_t draw_count() const { return samples.empty() ? 0 : samples.front().size(); }
};

/// Draw n posterior samples of `metric` for every variant. Variant i consumes
/// root.substream(2*i) for rate/simplex draws and root.substream(2*i + 1) for
/// revenue-rate draws (aggregated model), so the same root seed yields the
/// same conversion draws no matter which metric is requested, and appending a
/// variant leaves existing rows untouched.
///
/// Per scenario:
///   one option:  conversion y;            value y*(v-l) - (1-y)*l;  gain = value
///   multi:       conversion 1 - y_last;   value sum(v_l * y_l) - y_last*loss;
///                gain = value - cost_per_visitor
///   aggregated:  conversion y;            value y / r (r a Gamma rate draw);
///                gain = value - cost_per_visitor
MetricSamples draw_metric(const PosteriorModel& model, Metric metric,
                          std::size_t n, const RngStream& root);

} // namespace bayesab
