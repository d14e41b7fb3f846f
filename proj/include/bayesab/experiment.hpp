#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bayesab/decision.hpp"
#include "bayesab/models.hpp"

namespace bayesab {

/// Which conjugate scenario an experiment file uses.
enum class ModelKind { one_option, multi_options, aggregated };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

/// Prior hyperparameters as they appear in experiment files. Which fields
/// apply depends on the model: {a, b} for Beta rates, `a` (scalar broadcast)
/// or `a_vector` (explicit, length K+1) for Dirichlet, {shape, rate} for the
/// aggregated revenue Gamma. Missing fields fall back to the uninformed
/// defaults Beta(1,1) / Dir(1,...,1) / Gamma(1,1).
struct PriorSpec {
    std::optional<double> a;
    std::optional<std::vector<double>> a_vector;
    std::optional<double> b;
    std::optional<double> shape;
    std::optional<double> rate;

    bool operator==(const PriorSpec&) const = default;
};

template <class Obs>
struct VariantSpec {
    Obs observations;
    std::optional<PriorSpec> prior;  // overrides the experiment-level prior

    bool operator==(const VariantSpec&) const = default;
};

/// A parsed, validated experiment document.
struct ExperimentSpec {
    ModelKind model = ModelKind::one_option;
    Metric metric = Metric::conversion;
    std::string baseline;
    std::uint64_t samples = 200000;
    std::optional<std::uint64_t> seed;
    std::optional<PriorSpec> prior;
    std::variant<std::vector<VariantSpec<OneOptionObservations>>,
                 std::vector<VariantSpec<MultiOptionObservations>>,
                 std::vector<VariantSpec<AggregatedObservations>>>
        variants;

    std::size_t variant_count() const;
    std::vector<std::string> variant_names() const;

    bool operator==(const ExperimentSpec&) const = default;
};

/// Parse and validate a UTF-8 experiment document. Every schema or invariant
/// violation throws ValidationError naming the offending field path.
ExperimentSpec parse_experiment(const std::string& text);

/// Serialize back to the document format; parse(serialize(s)) == s.
std::string serialize_experiment(const ExperimentSpec& spec);

/// Resolve priors and build the per-variant conjugate posteriors.
PosteriorModel build_posteriors(const ExperimentSpec& spec);

struct AnalysisResult {
    DecisionReport report;
    MetricSamples samples;
};

/// Build posteriors, draw spec.samples Monte-Carlo samples of spec.metric and
/// assemble the decision report. Deterministic given spec.seed, which must be
/// set (the CLI fills it from --seed, the file, or entropy).
AnalysisResult run_analysis(const ExperimentSpec& spec);

enum class DensityFormat { csv, json };

/// Density curves for every (selected) variant: analytic Beta pdfs for the
/// conversion metric, normalized histograms of posterior draws for value and
/// gain. CSV output separates variants with "# variant: <name>" section
/// headers; JSON maps variant name to its curve.
struct DensityDocument {
    std::vector<std::pair<std::string, DensityGrid>> grids;

    std::string render(DensityFormat format) const;
};

DensityDocument emit_density(const ExperimentSpec& spec, Metric metric,
                             std::size_t bins_or_grid = DensityGrid::default_points,
                             const std::vector<std::string>& variant_filter = {});

} // namespace bayesab
