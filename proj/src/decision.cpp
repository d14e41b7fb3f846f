#include "bayesab/decision.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "bayesab/errors.hpp"

namespace bayesab {

namespace {

void require_paired(std::span<const double> y1, std::span<const double> y2) {
    if (y1.empty()) throw ValidationError("sample vectors must be non-empty");
    if (y1.size() != y2.size())
        throw ValidationError("sample vectors must have equal length, got " +
                              std::to_string(y1.size()) + " and " + std::to_string(y2.size()));
}

} // namespace

double prob_pairwise(std::span<const double> y1, std::span<const double> y2) {
    require_paired(y1, y2);
    std::size_t wins = 0;
    for (std::size_t j = 0; j < y1.size(); ++j)
        if (y1[j] > y2[j]) ++wins;
    return static_cast<double>(wins) / static_cast<double>(y1.size());
}

std::vector<double> prob_best(const MetricSamples& samples) {
    const std::size_t v = samples.variant_count();
    if (v < 2) throw ValidationError("prob_best needs at least two variants");
    const std::size_t n = samples.draw_count();
    for (const auto& row : samples.samples)
        if (row.size() != n) throw ValidationError("variant rows must have equal length");
    std::vector<std::size_t> wins(v, 0);
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t best = 0;  // ties resolve to the lowest index
        for (std::size_t i = 1; i < v; ++i)
            if (samples.samples[i][j] > samples.samples[best][j]) best = i;
        ++wins[best];
    }
    std::vector<double> probs(v);
    for (std::size_t i = 0; i < v; ++i)
        probs[i] = static_cast<double>(wins[i]) / static_cast<double>(n);
    return probs;
}

double quantile(std::span<const double> sorted_samples, double q) {
    const std::size_t n = sorted_samples.size();
    if (n == 0) throw ValidationError("quantile of empty samples");
    if (q <= 0.0) return sorted_samples.front();
    if (q >= 1.0) return sorted_samples.back();
    const double pos = q * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= n) return sorted_samples.back();
    return sorted_samples[lo] + frac * (sorted_samples[lo + 1] - sorted_samples[lo]);
}

std::pair<double, double> credible_interval(std::span<const double> samples, double mass) {
    if (samples.empty()) throw ValidationError("credible_interval of empty samples");
    if (!(mass > 0.0 && mass < 1.0))
        throw ValidationError("credible mass must be in (0, 1)");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double tail = (1.0 - mass) / 2.0;
    return {quantile(sorted, tail), quantile(sorted, 1.0 - tail)};
}

UpliftEstimate expected_uplift(std::span<const double> y1, std::span<const double> y2) {
    require_paired(y1, y2);
    std::vector<double> rel;
    rel.reserve(y1.size());
    for (std::size_t j = 0; j < y1.size(); ++j) {
        if (y2[j] == 0.0) continue;
        rel.push_back((y1[j] - y2[j]) / y2[j]);
    }
    if (rel.empty()) throw ValidationError("all reference samples are zero");
    double sum = 0.0;
    for (double r : rel) sum += r;
    UpliftEstimate est;
    est.mean = sum / static_cast<double>(rel.size());
    std::sort(rel.begin(), rel.end());
    est.ci_lo = quantile(rel, 0.025);
    est.ci_hi = quantile(rel, 0.975);
    return est;
}

double expected_loss(std::span<const double> y1, std::span<const double> y2) {
    require_paired(y1, y2);
    double sum = 0.0;
    std::size_t used = 0;
    for (std::size_t j = 0; j < y1.size(); ++j) {
        if (y1[j] == 0.0) continue;
        ++used;
        const double regret = (y2[j] - y1[j]) / y1[j];
        if (regret > 0.0) sum += regret;
    }
    if (used == 0) throw ValidationError("all reference samples are zero");
    return sum / static_cast<double>(used);
}

DecisionReport build_report(const MetricSamples& samples, const std::string& baseline) {
    const auto& names = samples.names;
    const auto bl_it = std::find(names.begin(), names.end(), baseline);
    if (bl_it == names.end())
        throw ValidationError("baseline \"" + baseline + "\" is not a variant");
    const auto bl_index = static_cast<std::size_t>(bl_it - names.begin());

    DecisionReport report;
    report.metric = samples.metric;
    report.baseline = baseline;
    report.samples = samples.draw_count();
    report.seed = samples.seed;

    const std::vector<double> best = prob_best(samples);
    const auto& bl_row = samples.samples[bl_index];
    for (std::size_t i = 0; i < names.size(); ++i) {
        VariantReport row;
        row.name = names[i];
        double sum = 0.0;
        for (double s : samples.samples[i]) sum += s;
        row.posterior_mean = sum / static_cast<double>(samples.samples[i].size());
        row.prob_best = best[i];
        if (i != bl_index) {
            row.prob_beat_baseline = prob_pairwise(samples.samples[i], bl_row);
            const UpliftEstimate uplift = expected_uplift(samples.samples[i], bl_row);
            row.uplift_mean = uplift.mean;
            row.uplift_ci95 = std::make_pair(uplift.ci_lo, uplift.ci_hi);
            row.expected_loss = bayesab::expected_loss(samples.samples[i], bl_row);
        }
        report.variants.push_back(std::move(row));
    }
    return report;
}

std::string DecisionReport::to_json() const {
    nlohmann::ordered_json doc;
    doc["metric"] = to_string(metric);
    doc["baseline"] = baseline;
    doc["samples"] = samples;
    doc["seed"] = seed;
    doc["variants"] = nlohmann::ordered_json::array();
    for (const auto& row : variants) {
        nlohmann::ordered_json v;
        v["name"] = row.name;
        v["posterior_mean"] = row.posterior_mean;
        v["prob_best"] = row.prob_best;
        if (row.prob_beat_baseline) v["prob_beat_baseline"] = *row.prob_beat_baseline;
        if (row.uplift_mean) v["uplift_mean"] = *row.uplift_mean;
        if (row.uplift_ci95)
            v["uplift_ci95"] = {row.uplift_ci95->first, row.uplift_ci95->second};
        if (row.expected_loss) v["expected_loss"] = *row.expected_loss;
        doc["variants"].push_back(std::move(v));
    }
    return doc.dump(2) + "\n";
}

namespace {

std::string fixed2(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << v;
    return os.str();
}

} // namespace

std::string DecisionReport::to_table() const {
    const std::vector<std::string> headers = {"variant",     "prob_best",
                                              "prob_beat_baseline", "uplift_mean",
                                              "uplift_ci95", "expected_loss"};
    std::vector<std::vector<std::string>> cells;
    cells.push_back(headers);
    for (const auto& row : variants) {
        std::vector<std::string> line;
        line.push_back(row.name);
        line.push_back(fixed2(row.prob_best));
        line.push_back(row.prob_beat_baseline ? fixed2(*row.prob_beat_baseline) : "-");
        line.push_back(row.uplift_mean ? fixed2(*row.uplift_mean) : "-");
        line.push_back(row.uplift_ci95 ? "[" + fixed2(row.uplift_ci95->first) + ", " +
                                             fixed2(row.uplift_ci95->second) + "]"
                                       : "-");
        line.push_back(row.expected_loss ? fixed2(*row.expected_loss) : "-");
        cells.push_back(std::move(line));
    }
    std::vector<std::size_t> widths(headers.size(), 0);
    for (const auto& line : cells)
        for (std::size_t c = 0; c < line.size(); ++c)
            widths[c] = std::max(widths[c], line[c].size());

    std::ostringstream os;
    os << "metric: " << to_string(metric) << "  baseline: " << baseline
       << "  samples: " << samples << "  seed: " << seed << "\n";
    for (const auto& line : cells) {
        for (std::size_t c = 0; c < line.size(); ++c) {
            if (c) os << "  ";
            os << (c == 0 ? std::left : std::right)
               << std::setw(static_cast<int>(widths[c])) << line[c];
        }
        os << "\n";
    }
    return os.str();
}

} // namespace bayesab
