#include "bayesab/experiment.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "bayesab/errors.hpp"

namespace bayesab {

using nlohmann::ordered_json;

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::one_option: return "one_option";
        case ModelKind::multi_options: return "multi_options";
        case ModelKind::aggregated: return "aggregated";
    }
    throw ValidationError("unknown model kind");
}

ModelKind model_kind_from_string(const std::string& name) {
    if (name == "one_option") return ModelKind::one_option;
    if (name == "multi_options") return ModelKind::multi_options;
    if (name == "aggregated") return ModelKind::aggregated;
    throw ValidationError("unknown model \"" + name +
                          "\" (expected one_option, multi_options or aggregated)");
}

std::size_t ExperimentSpec::variant_count() const {
    return std::visit([](const auto& v) { return v.size(); }, variants);
}

std::vector<std::string> ExperimentSpec::variant_names() const {
    return std::visit(
        [](const auto& v) {
            std::vector<std::string> names;
            names.reserve(v.size());
            for (const auto& entry : v) names.push_back(entry.observations.name);
            return names;
        },
        variants);
}

namespace {

// --- parsing helpers: every extractor reports the JSON pointer-ish path ---

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ValidationError(path, message);
}

const ordered_json& member(const ordered_json& obj, const std::string& path,
                           const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + "." + key, "missing required field");
    return *it;
}

void check_keys(const ordered_json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.contains(it.key())) fail(path + "." + it.key(), "unknown field");
}

std::string get_string(const ordered_json& obj, const std::string& path, const char* key) {
    const auto& v = member(obj, path, key);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

std::uint64_t get_count(const ordered_json& v, const std::string& path) {
    if (!v.is_number_unsigned()) fail(path, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

std::uint64_t get_count(const ordered_json& obj, const std::string& path, const char* key) {
    return get_count(member(obj, path, key), path + "." + key);
}

double get_money(const ordered_json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    const double x = v.get<double>();
    if (!(x >= 0.0)) fail(path, "expected a non-negative number");
    return x;
}

double get_money(const ordered_json& obj, const std::string& path, const char* key) {
    return get_money(member(obj, path, key), path + "." + key);
}

double get_positive(const ordered_json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    const double x = v.get<double>();
    if (!(x > 0.0)) fail(path, "expected a positive number");
    return x;
}

PriorSpec parse_prior(const ordered_json& obj, const std::string& path) {
    if (!obj.is_object()) fail(path, "expected an object");
    check_keys(obj, path, {"a", "b", "shape", "rate"});
    PriorSpec prior;
    if (auto it = obj.find("a"); it != obj.end()) {
        if (it->is_array()) {
            std::vector<double> a;
            for (std::size_t i = 0; i < it->size(); ++i)
                a.push_back(get_positive((*it)[i], path + ".a[" + std::to_string(i) + "]"));
            prior.a_vector = std::move(a);
        } else {
            prior.a = get_positive(*it, path + ".a");
        }
    }
    if (auto it = obj.find("b"); it != obj.end()) prior.b = get_positive(*it, path + ".b");
    if (auto it = obj.find("shape"); it != obj.end())
        prior.shape = get_positive(*it, path + ".shape");
    if (auto it = obj.find("rate"); it != obj.end())
        prior.rate = get_positive(*it, path + ".rate");
    return prior;
}

template <class Obs>
void validate_at(const Obs& obs, const std::string& path) {
    try {
        validate(obs);
    } catch (const ValidationError& e) {
        fail(path, e.what());
    }
}

OneOptionObservations parse_one_option(const ordered_json& obj, const std::string& path) {
    check_keys(obj, path, {"name", "visitors", "conversions", "value", "loss", "prior"});
    OneOptionObservations obs;
    obs.name = get_string(obj, path, "name");
    obs.visitors = get_count(obj, path, "visitors");
    obs.conversions = get_count(obj, path, "conversions");
    if (auto it = obj.find("value"); it != obj.end())
        obs.value = get_money(*it, path + ".value");
    if (auto it = obj.find("loss"); it != obj.end()) obs.loss = get_money(*it, path + ".loss");
    validate_at(obs, path);
    return obs;
}

MultiOptionObservations parse_multi_options(const ordered_json& obj, const std::string& path) {
    check_keys(obj, path,
               {"name", "visitors", "conversions", "values", "cost_per_visitor", "loss",
                "prior"});
    MultiOptionObservations obs;
    obs.name = get_string(obj, path, "name");
    obs.visitors = get_count(obj, path, "visitors");
    const auto& conv = member(obj, path, "conversions");
    if (!conv.is_array()) fail(path + ".conversions", "expected an array of counts");
    for (std::size_t i = 0; i < conv.size(); ++i)
        obs.conversions.push_back(
            get_count(conv[i], path + ".conversions[" + std::to_string(i) + "]"));
    const auto& values = member(obj, path, "values");
    if (!values.is_array()) fail(path + ".values", "expected an array of numbers");
    for (std::size_t i = 0; i < values.size(); ++i)
        obs.values.push_back(get_money(values[i], path + ".values[" + std::to_string(i) + "]"));
    if (auto it = obj.find("cost_per_visitor"); it != obj.end())
        obs.cost_per_visitor = get_money(*it, path + ".cost_per_visitor");
    if (auto it = obj.find("loss"); it != obj.end()) obs.loss = get_money(*it, path + ".loss");
    validate_at(obs, path);
    return obs;
}

AggregatedObservations parse_aggregated(const ordered_json& obj, const std::string& path) {
    check_keys(obj, path,
               {"name", "visitors", "conversions", "revenue_total", "cost_per_visitor",
                "prior"});
    AggregatedObservations obs;
    obs.name = get_string(obj, path, "name");
    obs.visitors = get_count(obj, path, "visitors");
    obs.conversions = get_count(obj, path, "conversions");
    obs.revenue_total = get_money(obj, path, "revenue_total");
    if (auto it = obj.find("cost_per_visitor"); it != obj.end())
        obs.cost_per_visitor = get_money(*it, path + ".cost_per_visitor");
    validate_at(obs, path);
    return obs;
}

template <class Obs, class ParseFn>
std::vector<VariantSpec<Obs>> parse_variants(const ordered_json& arr, ParseFn parse_one) {
    std::vector<VariantSpec<Obs>> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string path = "variants[" + std::to_string(i) + "]";
        if (!arr[i].is_object()) fail(path, "expected an object");
        VariantSpec<Obs> entry;
        entry.observations = parse_one(arr[i], path);
        if (auto it = arr[i].find("prior"); it != arr[i].end())
            entry.prior = parse_prior(*it, path + ".prior");
        out.push_back(std::move(entry));
    }
    return out;
}

// --- prior resolution ---

const PriorSpec* effective_prior(const ExperimentSpec& spec,
                                 const std::optional<PriorSpec>& override_prior) {
    if (override_prior) return &*override_prior;
    if (spec.prior) return &*spec.prior;
    return nullptr;
}

BetaParams resolve_beta_prior(const PriorSpec* prior) {
    BetaParams params;  // Beta(1,1) default
    if (prior) {
        if (prior->a_vector)
            throw ValidationError("prior.a", "expected a scalar for this model");
        if (prior->a) params.a = *prior->a;
        if (prior->b) params.b = *prior->b;
    }
    return params;
}

DirichletParams resolve_dirichlet_prior(const PriorSpec* prior, std::size_t cells,
                                        const std::string& variant_name) {
    DirichletParams params;
    if (prior && prior->a_vector) {
        if (prior->a_vector->size() != cells)
            throw ValidationError(
                "prior.a", "length " + std::to_string(prior->a_vector->size()) +
                               " does not match option count + 1 (" + std::to_string(cells) +
                               ") of variant \"" + variant_name + "\"");
        params.a = *prior->a_vector;
    } else {
        params.a.assign(cells, prior && prior->a ? *prior->a : 1.0);
    }
    return params;
}

GammaParams resolve_gamma_prior(const PriorSpec* prior) {
    GammaParams params;  // Gamma(1,1) default
    if (prior) {
        if (prior->shape) params.shape = *prior->shape;
        if (prior->rate) params.rate = *prior->rate;
    }
    return params;
}

void reject_gamma_fields(const PriorSpec* prior) {
    if (prior && (prior->shape || prior->rate))
        throw ValidationError("prior", "shape/rate apply only to the aggregated model");
}

} // namespace

ExperimentSpec parse_experiment(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) fail("$", "expected a JSON object");
    check_keys(doc, "$", {"model", "metric", "baseline", "samples", "seed", "prior", "variants"});

    ExperimentSpec spec;
    spec.model = model_kind_from_string(get_string(doc, "$", "model"));
    if (auto it = doc.find("metric"); it != doc.end()) {
        if (!it->is_string()) fail("$.metric", "expected a string");
        try {
            spec.metric = metric_from_string(it->get<std::string>());
        } catch (const ValidationError& e) {
            fail("$.metric", e.what());
        }
    }
    spec.baseline = get_string(doc, "$", "baseline");
    if (auto it = doc.find("samples"); it != doc.end()) {
        spec.samples = get_count(*it, "$.samples");
        if (spec.samples == 0) fail("$.samples", "expected a positive count");
    }
    if (auto it = doc.find("seed"); it != doc.end()) spec.seed = get_count(*it, "$.seed");
    if (auto it = doc.find("prior"); it != doc.end()) spec.prior = parse_prior(*it, "$.prior");

    const auto& variants = member(doc, "$", "variants");
    if (!variants.is_array()) fail("$.variants", "expected an array");
    switch (spec.model) {
        case ModelKind::one_option:
            spec.variants = parse_variants<OneOptionObservations>(variants, parse_one_option);
            break;
        case ModelKind::multi_options:
            spec.variants =
                parse_variants<MultiOptionObservations>(variants, parse_multi_options);
            break;
        case ModelKind::aggregated:
            spec.variants = parse_variants<AggregatedObservations>(variants, parse_aggregated);
            break;
    }

    if (spec.variant_count() < 2) fail("$.variants", "at least two variants are required");
    const auto names = spec.variant_names();
    std::set<std::string> seen;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i].empty())
            fail("variants[" + std::to_string(i) + "].name", "name must be non-empty");
        if (!seen.insert(names[i]).second)
            fail("variants[" + std::to_string(i) + "].name",
                 "duplicate variant name \"" + names[i] + "\"");
    }
    if (std::find(names.begin(), names.end(), spec.baseline) == names.end())
        fail("$.baseline", "baseline \"" + spec.baseline + "\" does not name a variant");

    // Surface prior shape problems at parse time rather than at sampling time.
    build_posteriors(spec);
    return spec;
}

namespace {

ordered_json prior_to_json(const PriorSpec& prior) {
    ordered_json obj = ordered_json::object();
    if (prior.a_vector)
        obj["a"] = *prior.a_vector;
    else if (prior.a)
        obj["a"] = *prior.a;
    if (prior.b) obj["b"] = *prior.b;
    if (prior.shape) obj["shape"] = *prior.shape;
    if (prior.rate) obj["rate"] = *prior.rate;
    return obj;
}

ordered_json variant_to_json(const VariantSpec<OneOptionObservations>& entry) {
    ordered_json obj;
    obj["name"] = entry.observations.name;
    obj["visitors"] = entry.observations.visitors;
    obj["conversions"] = entry.observations.conversions;
    if (entry.observations.value) obj["value"] = *entry.observations.value;
    if (entry.observations.loss != 0.0) obj["loss"] = entry.observations.loss;
    if (entry.prior) obj["prior"] = prior_to_json(*entry.prior);
    return obj;
}

ordered_json variant_to_json(const VariantSpec<MultiOptionObservations>& entry) {
    ordered_json obj;
    obj["name"] = entry.observations.name;
    obj["visitors"] = entry.observations.visitors;
    obj["conversions"] = entry.observations.conversions;
    obj["values"] = entry.observations.values;
    if (entry.observations.cost_per_visitor != 0.0)
        obj["cost_per_visitor"] = entry.observations.cost_per_visitor;
    if (entry.observations.loss != 0.0) obj["loss"] = entry.observations.loss;
    if (entry.prior) obj["prior"] = prior_to_json(*entry.prior);
    return obj;
}

ordered_json variant_to_json(const VariantSpec<AggregatedObservations>& entry) {
    ordered_json obj;
    obj["name"] = entry.observations.name;
    obj["visitors"] = entry.observations.visitors;
    obj["conversions"] = entry.observations.conversions;
    obj["revenue_total"] = entry.observations.revenue_total;
    if (entry.observations.cost_per_visitor != 0.0)
        obj["cost_per_visitor"] = entry.observations.cost_per_visitor;
    if (entry.prior) obj["prior"] = prior_to_json(*entry.prior);
    return obj;
}

} // namespace

std::string serialize_experiment(const ExperimentSpec& spec) {
    ordered_json doc;
    doc["model"] = to_string(spec.model);
    doc["metric"] = to_string(spec.metric);
    doc["baseline"] = spec.baseline;
    doc["samples"] = spec.samples;
    if (spec.seed) doc["seed"] = *spec.seed;
    if (spec.prior) doc["prior"] = prior_to_json(*spec.prior);
    doc["variants"] = ordered_json::array();
    std::visit(
        [&](const auto& variants) {
            for (const auto& entry : variants) doc["variants"].push_back(variant_to_json(entry));
        },
        spec.variants);
    return doc.dump(2) + "\n";
}

PosteriorModel build_posteriors(const ExperimentSpec& spec) {
    PosteriorModel model;
    if (const auto* one =
            std::get_if<std::vector<VariantSpec<OneOptionObservations>>>(&spec.variants)) {
        std::vector<OneOptionPosterior> posts;
        for (const auto& entry : *one) {
            const PriorSpec* prior = effective_prior(spec, entry.prior);
            reject_gamma_fields(prior);
            posts.push_back(posterior_one_option(resolve_beta_prior(prior), entry.observations));
        }
        model.variants = std::move(posts);
    } else if (const auto* multi = std::get_if<std::vector<VariantSpec<MultiOptionObservations>>>(
                   &spec.variants)) {
        std::vector<MultiOptionPosterior> posts;
        for (const auto& entry : *multi) {
            const PriorSpec* prior = effective_prior(spec, entry.prior);
            reject_gamma_fields(prior);
            const std::size_t cells = entry.observations.conversions.size() + 1;
            posts.push_back(posterior_multi_options(
                resolve_dirichlet_prior(prior, cells, entry.observations.name),
                entry.observations));
        }
        model.variants = std::move(posts);
    } else {
        const auto& agg =
            std::get<std::vector<VariantSpec<AggregatedObservations>>>(spec.variants);
        std::vector<AggregatedPosterior> posts;
        for (const auto& entry : agg) {
            const PriorSpec* prior = effective_prior(spec, entry.prior);
            posts.push_back(posterior_aggregated(resolve_beta_prior(prior),
                                                 resolve_gamma_prior(prior),
                                                 entry.observations));
        }
        model.variants = std::move(posts);
    }
    return model;
}

AnalysisResult run_analysis(const ExperimentSpec& spec) {
    if (!spec.seed)
        throw ValidationError("$.seed", "a seed is required to run an analysis");
    const PosteriorModel model = build_posteriors(spec);
    AnalysisResult result;
    result.samples = draw_metric(model, spec.metric, spec.samples, RngStream(*spec.seed));
    result.report = build_report(result.samples, spec.baseline);
    return result;
}

namespace {

BetaParams conversion_posterior_params(const OneOptionPosterior& post) { return post.rate; }

// Aggregate conversion of a Dirichlet posterior is marginally
// Beta(sum of option cells, no-conversion cell).
BetaParams conversion_posterior_params(const MultiOptionPosterior& post) {
    double converting = 0.0;
    for (std::size_t l = 0; l + 1 < post.rate.a.size(); ++l) converting += post.rate.a[l];
    return BetaParams{converting, post.rate.a.back()};
}

BetaParams conversion_posterior_params(const AggregatedPosterior& post) { return post.rate; }

} // namespace

DensityDocument emit_density(const ExperimentSpec& spec, Metric metric,
                             std::size_t bins_or_grid,
                             const std::vector<std::string>& variant_filter) {
    const PosteriorModel model = build_posteriors(spec);
    const auto names = model.names();
    std::vector<std::size_t> selected;
    if (variant_filter.empty()) {
        for (std::size_t i = 0; i < names.size(); ++i) selected.push_back(i);
    } else {
        for (const auto& want : variant_filter) {
            auto it = std::find(names.begin(), names.end(), want);
            if (it == names.end())
                throw ValidationError("variant", "\"" + want + "\" is not a variant");
            selected.push_back(static_cast<std::size_t>(it - names.begin()));
        }
    }

    DensityDocument doc;
    if (metric == Metric::conversion) {
        // Conversion posteriors are Beta in every scenario: use the analytic pdf.
        std::visit(
            [&](const auto& variants) {
                for (std::size_t i : selected)
                    doc.grids.emplace_back(
                        names[i],
                        density_beta_auto(conversion_posterior_params(variants[i]),
                                          bins_or_grid));
            },
            model.variants);
        return doc;
    }
    if (!spec.seed)
        throw ValidationError("$.seed", "a seed is required to sample value/gain densities");
    const MetricSamples samples =
        draw_metric(model, metric, spec.samples, RngStream(*spec.seed));
    for (std::size_t i : selected)
        doc.grids.emplace_back(names[i], empirical_density(samples.samples[i], bins_or_grid));
    return doc;
}

std::string DensityDocument::render(DensityFormat format) const {
    if (format == DensityFormat::csv) {
        std::string out;
        for (const auto& [name, grid] : grids) {
            out += "# variant: " + name + "\n";
            out += grid.to_csv();
        }
        return out;
    }
    std::string out = "{";
    bool first = true;
    for (const auto& [name, grid] : grids) {
        if (!first) out += ",";
        first = false;
        out += ordered_json(name).dump() + ":" + grid.to_json();
    }
    out += "}\n";
    return out;
}

} // namespace bayesab
