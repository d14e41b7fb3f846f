#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bayesab/distributions.hpp"
#include "bayesab/rng.hpp"

namespace bayesab {

/// Posterior state after a prefix of the simulated Bernoulli stream.
struct UpdatingCheckpoint {
    std::uint64_t seen = 0;
    std::uint64_t successes = 0;
    BetaParams posterior;
    DensityGrid density;
};

/// Evolution of a Beta posterior over a synthetic conversion stream.
struct UpdatingTrace {
    BetaParams prior;
    double true_rate = 0.0;
    std::uint64_t draws = 0;
    std::uint64_t seed = 0;
    std::vector<UpdatingCheckpoint> checkpoints;

    std::string to_json() const;
};

/// Draw `n` Bernoulli(true_rate) outcomes once, then report the conjugate
/// posterior after each checkpoint prefix. Checkpoints must be strictly
/// increasing and within [1, n].
UpdatingTrace simulate_updating(const BetaParams& prior, double true_rate,
                                std::uint64_t n,
                                const std::vector<std::uint64_t>& checkpoints,
                                RngStream rng,
                                std::size_t density_points = DensityGrid::default_points);

} // namespace bayesab
