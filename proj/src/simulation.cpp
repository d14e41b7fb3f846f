#include "bayesab/simulation.hpp"

#include <json.hpp>

#include "bayesab/errors.hpp"

namespace bayesab {

UpdatingTrace simulate_updating(const BetaParams& prior, double true_rate, std::uint64_t n,
                                const std::vector<std::uint64_t>& checkpoints, RngStream rng,
                                std::size_t density_points) {
    validate(prior);
    if (!(true_rate >= 0.0 && true_rate <= 1.0))
        throw ValidationError("true_rate must be in [0, 1], got " + std::to_string(true_rate));
    if (n == 0) throw ValidationError("draw count must be >= 1");
    if (checkpoints.empty()) throw ValidationError("at least one checkpoint is required");
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (checkpoints[i] < 1 || checkpoints[i] > n)
            throw ValidationError("checkpoint " + std::to_string(checkpoints[i]) +
                                  " is outside [1, " + std::to_string(n) + "]");
        if (i > 0 && checkpoints[i] <= checkpoints[i - 1])
            throw ValidationError("checkpoints must be strictly increasing");
    }

    UpdatingTrace trace;
    trace.prior = prior;
    trace.true_rate = true_rate;
    trace.draws = n;
    trace.seed = rng.seed();

    // One Bernoulli stream; checkpoints summarize prefixes of the same data.
    std::vector<bool> outcomes(n);
    for (std::uint64_t i = 0; i < n; ++i) outcomes[i] = rng.next_unit() < true_rate;

    std::uint64_t successes = 0;
    std::uint64_t consumed = 0;
    for (std::uint64_t checkpoint : checkpoints) {
        for (; consumed < checkpoint; ++consumed)
            if (outcomes[consumed]) ++successes;
        UpdatingCheckpoint point;
        point.seen = checkpoint;
        point.successes = successes;
        point.posterior =
            BetaParams{prior.a + static_cast<double>(successes),
                       prior.b + static_cast<double>(checkpoint - successes)};
        point.density = density_beta(point.posterior, density_points, 0.0, 1.0);
        trace.checkpoints.push_back(std::move(point));
    }
    return trace;
}

std::string UpdatingTrace::to_json() const {
    nlohmann::ordered_json doc;
    doc["prior"] = {{"a", prior.a}, {"b", prior.b}};
    doc["true_rate"] = true_rate;
    doc["draws"] = draws;
    doc["seed"] = seed;
    doc["checkpoints"] = nlohmann::ordered_json::array();
    for (const auto& point : checkpoints) {
        nlohmann::ordered_json c;
        c["seen"] = point.seen;
        c["successes"] = point.successes;
        c["posterior"] = {{"a", point.posterior.a}, {"b", point.posterior.b}};
        c["density"] = nlohmann::ordered_json::parse(point.density.to_json());
        doc["checkpoints"].push_back(std::move(c));
    }
    return doc.dump(2) + "\n";
}

} // namespace bayesab
