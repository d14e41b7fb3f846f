#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bayesab/rng.hpp"

namespace bayesab {

/// Beta(a, b) shape parameters; both must be positive.
struct BetaParams {
    double a = 1.0;
    double b = 1.0;

    double mean() const { return a / (a + b); }
    double variance() const { return a * b / ((a + b) * (a + b) * (a + b + 1.0)); }
    /// Mode of a unimodal Beta (requires a > 1, b > 1).
    double mode() const { return (a - 1.0) / (a + b - 2.0); }

    bool operator==(const BetaParams&) const = default;
};

/// Dirichlet concentration vector; length >= 2, all entries positive.
struct DirichletParams {
    std::vector<double> a;

    bool operator==(const DirichletParams&) const = default;
};

/// Gamma(shape, rate). Rate parametrization: mean = shape / rate. This is the
/// parametrization under which the exponential-likelihood update
/// (shape + C, rate + s) holds.
struct GammaParams {
    double shape = 1.0;
    double rate = 1.0;

    double mean() const { return shape / rate; }

    bool operator==(const GammaParams&) const = default;
};

/// A sampled or analytic density curve: strictly increasing x, density >= 0.
struct DensityGrid {
    std::vector<double> x;
    std::vector<double> density;

    static constexpr std::size_t default_points = 512;

    std::string to_csv() const;   // "x,density" header + one row per point
    std::string to_json() const;  // array of {"x": ..., "density": ...}
};

void validate(const BetaParams& params);
void validate(const DirichletParams& params);
void validate(const GammaParams& params);

/// n i.i.d. draws from Beta(a, b), in (0, 1). Deterministic given (params, n, seed).
std::vector<double> sample_beta(const BetaParams& params, std::size_t n, RngStream& rng);

/// n i.i.d. draws from Dir(a); each draw a k-vector summing to 1.
std::vector<std::vector<double>> sample_dirichlet(const DirichletParams& params,
                                                  std::size_t n, RngStream& rng);

/// One Dirichlet draw written into `out` (size k); avoids per-draw allocation
/// in tight sampling loops.
void sample_dirichlet_into(const DirichletParams& params, RngStream& rng,
                           std::span<double> out);

/// n i.i.d. draws from Gamma(shape, rate), all positive.
std::vector<double> sample_gamma(const GammaParams& params, std::size_t n, RngStream& rng);

/// Single draws used by the vector samplers above.
double draw_gamma(double shape, double rate, RngStream& rng);
double draw_beta(const BetaParams& params, RngStream& rng);

/// Beta pdf at x (0 outside [0, 1]).
double beta_pdf(const BetaParams& params, double x);

/// Gamma pdf at x (rate parametrization; 0 for x < 0).
double gamma_pdf(const GammaParams& params, double x);

/// Analytic Beta pdf evaluated on an evenly spaced grid over [lo, hi],
/// 0 <= lo < hi <= 1.
DensityGrid density_beta(const BetaParams& params, std::size_t grid_size,
                         double lo, double hi);

/// density_beta over a range that covers the posterior mass (mean +- 8 sd,
/// clipped to [0, 1]).
DensityGrid density_beta_auto(const BetaParams& params,
                              std::size_t grid_size = DensityGrid::default_points);

/// Normalized histogram of `samples`: bin centers as x, density integrating
/// to 1 over the sample range. Degenerate (constant) samples use a unit-wide
/// range centered on the value.
DensityGrid empirical_density(std::span<const double> samples, std::size_t bins);

} // namespace bayesab
