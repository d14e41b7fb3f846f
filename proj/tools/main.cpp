#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bayesab/errors.hpp"
#include "bayesab/experiment.hpp"
#include "bayesab/simulation.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_io = 1;
constexpr int exit_validation = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw bayesab::IoError("cannot open input file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw bayesab::IoError("failed reading input file: " + path);
    return buffer.str();
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw bayesab::IoError("cannot open output file: " + path);
    out << content;
    if (!out) throw bayesab::IoError("failed writing output file: " + path);
}

/// Resolve the run seed: flag beats file, file beats entropy. An entropy seed
/// is announced on stderr so the run can be reproduced.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag_seed,
                           const std::optional<std::uint64_t>& file_seed) {
    if (flag_seed) return *flag_seed;
    if (file_seed) return *file_seed;
    std::random_device device;
    const std::uint64_t seed =
        (static_cast<std::uint64_t>(device()) << 32) ^ device();
    std::cerr << "seed: " << seed << "\n";
    return seed;
}

struct AnalyzeOptions {
    std::string input;
    std::string output;
    std::string format = "table";
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> samples;
    std::string metric;
    std::string baseline;
};

int run_analyze(const AnalyzeOptions& opt) {
    bayesab::ExperimentSpec spec = bayesab::parse_experiment(read_file(opt.input));
    if (opt.samples) spec.samples = *opt.samples;
    if (!opt.metric.empty()) spec.metric = bayesab::metric_from_string(opt.metric);
    if (!opt.baseline.empty()) spec.baseline = opt.baseline;
    spec.seed = resolve_seed(opt.seed, spec.seed);

    const bayesab::AnalysisResult result = bayesab::run_analysis(spec);
    write_output(opt.output, opt.format == "json" ? result.report.to_json()
                                                  : result.report.to_table());
    return exit_ok;
}

struct SimulateOptions {
    double true_rate = 0.5;
    std::uint64_t draws = 100;
    std::vector<double> prior{1.0, 1.0};
    std::vector<std::uint64_t> checkpoints;
    std::optional<std::uint64_t> seed;
    std::string output;
    std::size_t grid = bayesab::DensityGrid::default_points;
};

int run_simulate(const SimulateOptions& opt) {
    const std::uint64_t seed = resolve_seed(opt.seed, std::nullopt);
    if (opt.prior.size() != 2)
        throw bayesab::ValidationError("--prior expects two values: a,b");
    const bayesab::UpdatingTrace trace = bayesab::simulate_updating(
        bayesab::BetaParams{opt.prior[0], opt.prior[1]}, opt.true_rate, opt.draws,
        opt.checkpoints, bayesab::RngStream(seed), opt.grid);
    write_output(opt.output, trace.to_json());
    return exit_ok;
}

struct DensityOptions {
    std::string input;
    std::string output;
    std::string format = "csv";
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> samples;
    std::string metric;
    std::vector<std::string> variants;
    std::size_t bins = bayesab::DensityGrid::default_points;
};

int run_density(const DensityOptions& opt) {
    bayesab::ExperimentSpec spec = bayesab::parse_experiment(read_file(opt.input));
    if (opt.samples) spec.samples = *opt.samples;
    const bayesab::Metric metric = opt.metric.empty()
                                       ? spec.metric
                                       : bayesab::metric_from_string(opt.metric);
    if (metric != bayesab::Metric::conversion)
        spec.seed = resolve_seed(opt.seed, spec.seed);
    else if (opt.seed)
        spec.seed = opt.seed;

    const bayesab::DensityDocument doc =
        bayesab::emit_density(spec, metric, opt.bins, opt.variants);
    write_output(opt.output, doc.render(opt.format == "json"
                                            ? bayesab::DensityFormat::json
                                            : bayesab::DensityFormat::csv));
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian split-test analysis: conjugate posteriors and "
                 "Monte-Carlo decision metrics"};
    app.require_subcommand(1);

    AnalyzeOptions analyze_opt;
    CLI::App* analyze = app.add_subcommand(
        "analyze", "Compute the decision report for an experiment file");
    analyze->add_option("--input,-i", analyze_opt.input, "experiment JSON file")->required();
    analyze->add_option("--output,-o", analyze_opt.output, "output path (default stdout)");
    analyze->add_option("--format,-f", analyze_opt.format, "table or json")
        ->check(CLI::IsMember({"table", "json"}));
    analyze->add_option("--seed", analyze_opt.seed, "root seed (overrides the file)");
    analyze->add_option("--samples,-n", analyze_opt.samples, "Monte-Carlo sample count");
    analyze->add_option("--metric,-m", analyze_opt.metric, "conversion, value or gain");
    analyze->add_option("--baseline,-b", analyze_opt.baseline, "baseline variant override");

    SimulateOptions sim_opt;
    CLI::App* simulate = app.add_subcommand(
        "simulate-updating", "Simulate Bayesian updating on synthetic conversions");
    simulate->add_option("--true-rate", sim_opt.true_rate, "true conversion rate")->required();
    simulate->add_option("--n", sim_opt.draws, "number of simulated visitors")->required();
    simulate->add_option("--prior", sim_opt.prior, "Beta prior as a,b")->delimiter(',');
    simulate->add_option("--checkpoints", sim_opt.checkpoints, "posterior checkpoints")
        ->delimiter(',')
        ->required();
    simulate->add_option("--seed", sim_opt.seed, "root seed");
    simulate->add_option("--output,-o", sim_opt.output, "output path (default stdout)");
    simulate->add_option("--grid", sim_opt.grid, "density grid points");

    DensityOptions density_opt;
    CLI::App* density = app.add_subcommand(
        "density", "Emit posterior density curves for plotting");
    density->add_option("--input,-i", density_opt.input, "experiment JSON file")->required();
    density->add_option("--output,-o", density_opt.output, "output path (default stdout)");
    density->add_option("--format,-f", density_opt.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    density->add_option("--seed", density_opt.seed, "root seed (value/gain metrics)");
    density->add_option("--samples,-n", density_opt.samples, "Monte-Carlo sample count");
    density->add_option("--metric,-m", density_opt.metric, "conversion, value or gain");
    density->add_option("--variant", density_opt.variants,
                        "restrict to named variants (repeatable)");
    density->add_option("--bins", density_opt.bins, "histogram bins / grid points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_validation;
    }

    try {
        if (analyze->parsed()) return run_analyze(analyze_opt);
        if (simulate->parsed()) return run_simulate(sim_opt);
        if (density->parsed()) return run_density(density_opt);
        std::cerr << "no command given\n";
        return exit_validation;
    } catch (const bayesab::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_io;
    } catch (const bayesab::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    }
}
