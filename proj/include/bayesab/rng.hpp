#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace bayesab {

/// Deterministic random stream: a seeded mt19937_64 plus the transforms the
/// samplers need. The same seed always yields the same sequence; uniform and
/// normal variates are generated from raw engine words (not from
/// std::uniform_real_distribution, whose output is implementation-defined).
///
/// Sub-stream scheme: substream(k) of a stream with seed s is an independent
/// stream with seed splitmix64(s + (k+1) * 0x9E3779B97F4A7C15). Derivation is
/// pure (it does not consume state), so consumers can lay out a fixed
/// index -> purpose map and adding a consumer never perturbs the others.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed)
        : seed_(seed), engine_(scramble(seed)) {}

    /// Derive the k-th child stream from this stream's seed.
    RngStream substream(std::uint64_t index) const {
        return RngStream(scramble(seed_ + (index + 1) * golden));
    }

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform draw on the open interval (0, 1); never returns 0 or 1,
    /// so log()/pow() downstream stay finite.
    double next_unit() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; pairs are generated together and the
    /// spare is cached, keeping the draw order deterministic.
    double next_normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    static constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ull;
    static constexpr double pi = 3.141592653589793238462643383279502884;

    // splitmix64 finalizer; decorrelates nearby seeds.
    static std::uint64_t scramble(std::uint64_t x) {
        x += golden;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

    std::uint64_t seed_;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace bayesab
