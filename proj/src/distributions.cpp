#include "bayesab/distributions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "bayesab/errors.hpp"

namespace bayesab {

void validate(const BetaParams& params) {
    if (!(params.a > 0.0) || !(params.b > 0.0))
        throw ValidationError("Beta parameters must be positive, got a=" +
                              std::to_string(params.a) + " b=" + std::to_string(params.b));
}

void validate(const DirichletParams& params) {
    if (params.a.size() < 2)
        throw ValidationError("Dirichlet needs at least 2 components, got " +
                              std::to_string(params.a.size()));
    for (std::size_t i = 0; i < params.a.size(); ++i)
        if (!(params.a[i] > 0.0))
            throw ValidationError("Dirichlet component " + std::to_string(i) +
                                  " must be positive, got " + std::to_string(params.a[i]));
}

void validate(const GammaParams& params) {
    if (!(params.shape > 0.0) || !(params.rate > 0.0))
        throw ValidationError("Gamma parameters must be positive, got shape=" +
                              std::to_string(params.shape) +
                              " rate=" + std::to_string(params.rate));
}

double draw_gamma(double shape, double rate, RngStream& rng) {
    // Marsaglia-Tsang squeeze for shape >= 1; shapes below 1 are boosted
    // through Gamma(shape+1) * U^(1/shape).
    if (shape < 1.0) {
        const double u = rng.next_unit();
        return draw_gamma(shape + 1.0, rate, rng) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.next_normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.next_unit();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v / rate;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v / rate;
    }
}

double draw_beta(const BetaParams& params, RngStream& rng) {
    const double x = draw_gamma(params.a, 1.0, rng);
    const double y = draw_gamma(params.b, 1.0, rng);
    return x / (x + y);
}

std::vector<double> sample_beta(const BetaParams& params, std::size_t n, RngStream& rng) {
    validate(params);
    if (n == 0) throw ValidationError("sample count must be >= 1");
    std::vector<double> out(n);
    for (auto& v : out) v = draw_beta(params, rng);
    return out;
}

void sample_dirichlet_into(const DirichletParams& params, RngStream& rng,
                           std::span<double> out) {
    double total = 0.0;
    for (std::size_t i = 0; i < params.a.size(); ++i) {
        out[i] = draw_gamma(params.a[i], 1.0, rng);
        total += out[i];
    }
    for (auto& v : out) v /= total;
}

std::vector<std::vector<double>> sample_dirichlet(const DirichletParams& params,
                                                  std::size_t n, RngStream& rng) {
    validate(params);
    if (n == 0) throw ValidationError("sample count must be >= 1");
    std::vector<std::vector<double>> out(n, std::vector<double>(params.a.size()));
    for (auto& row : out) sample_dirichlet_into(params, rng, row);
    return out;
}

std::vector<double> sample_gamma(const GammaParams& params, std::size_t n, RngStream& rng) {
    validate(params);
    if (n == 0) throw ValidationError("sample count must be >= 1");
    std::vector<double> out(n);
    for (auto& v : out) v = draw_gamma(params.shape, params.rate, rng);
    return out;
}

double beta_pdf(const BetaParams& params, double x) {
    if (x < 0.0 || x > 1.0) return 0.0;
    const double log_norm =
        std::lgamma(params.a + params.b) - std::lgamma(params.a) - std::lgamma(params.b);
    // Endpoint cases: x^(a-1) at x=0 is 1 for a=1, 0 for a>1 (and mirrored at 1).
    double log_px;
    if (x == 0.0)
        log_px = params.a == 1.0 ? 0.0 : (params.a > 1.0 ? -INFINITY : INFINITY);
    else
        log_px = (params.a - 1.0) * std::log(x);
    double log_q;
    if (x == 1.0)
        log_q = params.b == 1.0 ? 0.0 : (params.b > 1.0 ? -INFINITY : INFINITY);
    else
        log_q = (params.b - 1.0) * std::log1p(-x);
    return std::exp(log_norm + log_px + log_q);
}

double gamma_pdf(const GammaParams& params, double x) {
    if (x < 0.0) return 0.0;
    if (x == 0.0) {
        if (params.shape == 1.0) return params.rate;
        return params.shape > 1.0 ? 0.0 : INFINITY;
    }
    const double log_pdf = params.shape * std::log(params.rate) - std::lgamma(params.shape) +
                           (params.shape - 1.0) * std::log(x) - params.rate * x;
    return std::exp(log_pdf);
}

DensityGrid density_beta(const BetaParams& params, std::size_t grid_size,
                         double lo, double hi) {
    validate(params);
    if (grid_size < 2) throw ValidationError("grid size must be >= 2");
    if (!(lo >= 0.0 && lo < hi && hi <= 1.0))
        throw ValidationError("density range must satisfy 0 <= lo < hi <= 1, got [" +
                              std::to_string(lo) + ", " + std::to_string(hi) + "]");
    DensityGrid grid;
    grid.x.resize(grid_size);
    grid.density.resize(grid_size);
    const double step = (hi - lo) / static_cast<double>(grid_size - 1);
    for (std::size_t i = 0; i < grid_size; ++i) {
        grid.x[i] = lo + step * static_cast<double>(i);
        grid.density[i] = beta_pdf(params, grid.x[i]);
    }
    grid.x.back() = hi;  // guard against accumulated rounding
    grid.density.back() = beta_pdf(params, hi);
    return grid;
}

DensityGrid density_beta_auto(const BetaParams& params, std::size_t grid_size) {
    validate(params);
    const double sd = std::sqrt(params.variance());
    const double lo = std::max(0.0, params.mean() - 8.0 * sd);
    const double hi = std::min(1.0, params.mean() + 8.0 * sd);
    return density_beta(params, grid_size, lo, hi);
}

DensityGrid empirical_density(std::span<const double> samples, std::size_t bins) {
    if (samples.empty()) throw ValidationError("empirical_density requires samples");
    if (bins < 2) throw ValidationError("bin count must be >= 2");
    const auto [min_it, max_it] = std::minmax_element(samples.begin(), samples.end());
    double lo = *min_it, hi = *max_it;
    if (lo == hi) {  // constant input: center a unit-wide support on it
        lo -= 0.5;
        hi += 0.5;
    }
    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<double> counts(bins, 0.0);
    for (double s : samples) {
        auto idx = static_cast<std::size_t>((s - lo) / width);
        if (idx >= bins) idx = bins - 1;  // the maximum lands in the last bin
        counts[idx] += 1.0;
    }
    DensityGrid grid;
    grid.x.resize(bins);
    grid.density.resize(bins);
    const double norm = 1.0 / (static_cast<double>(samples.size()) * width);
    for (std::size_t i = 0; i < bins; ++i) {
        grid.x[i] = lo + width * (static_cast<double>(i) + 0.5);
        grid.density[i] = counts[i] * norm;
    }
    return grid;
}

namespace {

// Shortest round-trip representation; keeps emitted documents seed-stable.
std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

} // namespace

std::string DensityGrid::to_csv() const {
    std::string out = "x,density\n";
    for (std::size_t i = 0; i < x.size(); ++i) {
        out += format_double(x[i]);
        out += ',';
        out += format_double(density[i]);
        out += '\n';
    }
    return out;
}

std::string DensityGrid::to_json() const {
    std::string out = "[";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) out += ',';
        out += "{\"x\":" + format_double(x[i]) +
               ",\"density\":" + format_double(density[i]) + "}";
    }
    out += "]";
    return out;
}

} // namespace bayesab
