#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace evsim {

// splitmix64 finalizer; good avalanche, cheap.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Deterministic counter-based random stream keyed by (seed, domain, entity).
// Every draw is a pure function of the key and the draw index, so results do
// not depend on how draws from different entities interleave.
class EntityRng {
public:
    EntityRng(std::uint64_t seed, std::uint64_t domain, std::uint64_t entity) {
        std::uint64_t s = mix64(seed);
        s = mix64(s ^ (0x9e3779b97f4a7c15ull * (domain + 1)));
        base_ = mix64(s ^ (0xc2b2ae3d27d4eb4full * (entity + 1)));
    }

    std::uint64_t next_key() { return mix64(base_ + 0x9e3779b97f4a7c15ull * ++counter_); }

    // Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next_key() >> 11) * 0x1.0p-53;
    }

    // Uniform in (0, 1]; never zero, safe under log().
    double uniform_pos() {
        return (static_cast<double>(next_key() >> 11) + 1.0) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    // Box-Muller; hand-rolled so the stream is identical across standard
    // library implementations.
    double normal(double mean, double sd) {
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double z = std::sqrt(-2.0 * std::log(u1)) *
                         std::cos(2.0 * std::numbers::pi * u2);
        return mean + sd * z;
    }

private:
    std::uint64_t base_ = 0;
    std::uint64_t counter_ = 0;
};

// Stream domains, so distinct subsystems never share a draw sequence.
namespace rng_domain {
inline constexpr std::uint64_t driver = 1;
inline constexpr std::uint64_t passenger = 2;
inline constexpr std::uint64_t charger_placement = 3;
inline constexpr std::uint64_t demand_gen = 4;
}  // namespace rng_domain

}  // namespace evsim
