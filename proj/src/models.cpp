#include "bayesab/models.hpp"

#include <numeric>

#include "bayesab/errors.hpp"

namespace bayesab {

std::string to_string(Metric metric) {
    switch (metric) {
        case Metric::conversion: return "conversion";
        case Metric::value: return "value";
        case Metric::gain: return "gain";
    }
    throw ValidationError("unknown metric");
}

Metric metric_from_string(const std::string& name) {
    if (name == "conversion") return Metric::conversion;
    if (name == "value") return Metric::value;
    if (name == "gain") return Metric::gain;
    throw ValidationError("unknown metric \"" + name +
                          "\" (expected conversion, value or gain)");
}

std::uint64_t MultiOptionObservations::total_conversions() const {
    return std::accumulate(conversions.begin(), conversions.end(), std::uint64_t{0});
}

void validate(const OneOptionObservations& obs) {
    if (obs.conversions > obs.visitors)
        throw ValidationError("conversions (" + std::to_string(obs.conversions) +
                              ") exceed visitors (" + std::to_string(obs.visitors) + ")");
    if (obs.value && !(*obs.value >= 0.0))
        throw ValidationError("value must be non-negative");
    if (!(obs.loss >= 0.0)) throw ValidationError("loss must be non-negative");
}

void validate(const MultiOptionObservations& obs) {
    if (obs.conversions.empty())
        throw ValidationError("at least one option is required");
    if (obs.values.size() != obs.conversions.size())
        throw ValidationError("values length (" + std::to_string(obs.values.size()) +
                              ") must match conversions length (" +
                              std::to_string(obs.conversions.size()) + ")");
    if (obs.total_conversions() > obs.visitors)
        throw ValidationError("total conversions (" + std::to_string(obs.total_conversions()) +
                              ") exceed visitors (" + std::to_string(obs.visitors) + ")");
    for (double v : obs.values)
        if (!(v >= 0.0)) throw ValidationError("values must be non-negative");
    if (!(obs.cost_per_visitor >= 0.0))
        throw ValidationError("cost_per_visitor must be non-negative");
    if (!(obs.loss >= 0.0)) throw ValidationError("loss must be non-negative");
}

void validate(const AggregatedObservations& obs) {
    if (obs.conversions > obs.visitors)
        throw ValidationError("conversions (" + std::to_string(obs.conversions) +
                              ") exceed visitors (" + std::to_string(obs.visitors) + ")");
    if (!(obs.revenue_total >= 0.0))
        throw ValidationError("revenue_total must be non-negative");
    if (obs.conversions == 0 && obs.revenue_total != 0.0)
        throw ValidationError("revenue_total must be 0 when there are no conversions");
    if (!(obs.cost_per_visitor >= 0.0))
        throw ValidationError("cost_per_visitor must be non-negative");
}

OneOptionPosterior posterior_one_option(const BetaParams& prior,
                                        const OneOptionObservations& obs) {
    validate(prior);
    validate(obs);
    OneOptionPosterior post;
    post.name = obs.name;
    post.rate = BetaParams{prior.a + static_cast<double>(obs.conversions),
                           prior.b + static_cast<double>(obs.visitors - obs.conversions)};
    post.value = obs.value;
    post.loss = obs.loss;
    return post;
}

MultiOptionPosterior posterior_multi_options(const DirichletParams& prior,
                                             const MultiOptionObservations& obs) {
    validate(prior);
    validate(obs);
    const std::size_t k = obs.conversions.size();
    if (prior.a.size() != k + 1)
        throw ValidationError("prior length (" + std::to_string(prior.a.size()) +
                              ") must be option count + 1 (" + std::to_string(k + 1) + ")");
    MultiOptionPosterior post;
    post.name = obs.name;
    post.rate.a.resize(k + 1);
    for (std::size_t l = 0; l < k; ++l)
        post.rate.a[l] = prior.a[l] + static_cast<double>(obs.conversions[l]);
    post.rate.a[k] =
        prior.a[k] + static_cast<double>(obs.visitors - obs.total_conversions());
    post.values = obs.values;
    post.cost_per_visitor = obs.cost_per_visitor;
    post.loss = obs.loss;
    return post;
}

AggregatedPosterior posterior_aggregated(const BetaParams& prior_rate,
                                         const GammaParams& prior_revenue,
                                         const AggregatedObservations& obs) {
    validate(prior_rate);
    validate(prior_revenue);
    validate(obs);
    AggregatedPosterior post;
    post.name = obs.name;
    post.rate = BetaParams{prior_rate.a + static_cast<double>(obs.conversions),
                           prior_rate.b + static_cast<double>(obs.visitors - obs.conversions)};
    post.revenue_rate = GammaParams{
        prior_revenue.shape + static_cast<double>(obs.conversions),
        prior_revenue.rate + obs.revenue_total};
    post.cost_per_visitor = obs.cost_per_visitor;
    return post;
}

std::size_t PosteriorModel::variant_count() const {
    return std::visit([](const auto& v) { return v.size(); }, variants);
}

std::vector<std::string> PosteriorModel::names() const {
    return std::visit(
        [](const auto& v) {
            std::vector<std::string> out;
            out.reserve(v.size());
            for (const auto& p : v) out.push_back(p.name);
            return out;
        },
        variants);
}

namespace {

std::vector<double> draw_one_option_row(const OneOptionPosterior& post, Metric metric,
                                        std::size_t n, RngStream conv_stream) {
    if (metric != Metric::conversion && !post.value)
        throw ValidationError("metric \"" + to_string(metric) + "\" requested but variant \"" +
                              post.name + "\" has no value data");
    std::vector<double> row(n);
    const double v = post.value.value_or(0.0);
    const double l = post.loss;
    for (auto& out : row) {
        const double y = draw_beta(post.rate, conv_stream);
        // gain has no cost term in this scenario and equals value
        out = metric == Metric::conversion ? y : y * (v - l) - (1.0 - y) * l;
    }
    return row;
}

std::vector<double> draw_multi_option_row(const MultiOptionPosterior& post, Metric metric,
                                          std::size_t n, RngStream conv_stream) {
    const std::size_t cells = post.rate.a.size();
    std::vector<double> simplex(cells);
    std::vector<double> row(n);
    for (auto& out : row) {
        sample_dirichlet_into(post.rate, conv_stream, simplex);
        if (metric == Metric::conversion) {
            out = 1.0 - simplex[cells - 1];
        } else {
            double value = -simplex[cells - 1] * post.loss;
            for (std::size_t l = 0; l + 1 < cells; ++l)
                value += post.values[l] * simplex[l];
            out = metric == Metric::gain ? value - post.cost_per_visitor : value;
        }
    }
    return row;
}

std::vector<double> draw_aggregated_row(const AggregatedPosterior& post, Metric metric,
                                        std::size_t n, RngStream conv_stream,
                                        RngStream revenue_stream) {
    std::vector<double> row(n);
    for (auto& out : row) {
        const double y = draw_beta(post.rate, conv_stream);
        if (metric == Metric::conversion) {
            out = y;
        } else {
            const double r = draw_gamma(post.revenue_rate.shape, post.revenue_rate.rate,
                                        revenue_stream);
            const double value = y / r;
            out = metric == Metric::gain ? value - post.cost_per_visitor : value;
        }
    }
    return row;
}

} // namespace

MetricSamples draw_metric(const PosteriorModel& model, Metric metric, std::size_t n,
                          const RngStream& root) {
    if (n == 0) throw ValidationError("sample count must be >= 1");
    MetricSamples out;
    out.metric = metric;
    out.seed = root.seed();
    out.names = model.names();
    out.samples.reserve(model.variant_count());

    // Variant i draws from substreams 2i (rates) and 2i+1 (revenue rates);
    // sequential here, but each row is a pure function of (posterior, streams).
    std::visit(
        [&](const auto& variants) {
            for (std::size_t i = 0; i < variants.size(); ++i) {
                RngStream conv = root.substream(2 * i);
                RngStream rev = root.substream(2 * i + 1);
                using T = std::decay_t<decltype(variants[i])>;
                if constexpr (std::is_same_v<T, OneOptionPosterior>)
                    out.samples.push_back(draw_one_option_row(variants[i], metric, n, conv));
                else if constexpr (std::is_same_v<T, MultiOptionPosterior>)
                    out.samples.push_back(draw_multi_option_row(variants[i], metric, n, conv));
                else
                    out.samples.push_back(
                        draw_aggregated_row(variants[i], metric, n, conv, rev));
            }
        },
        model.variants);
    return out;
}

} // namespace bayesab
