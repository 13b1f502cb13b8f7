#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace carla {

// Seeded pseudo-random source. The engine is std::mt19937_64 (its output
// stream is fixed by the standard); the uniform/normal transforms are done
// here so that draw sequences are identical across standard libraries.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer on [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        // Modulo bias is < 2^-40 for the ranges used here.
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(engine_() % span);
    }

    bool coin_flip() { return (engine_() & 1u) != 0; }

    // Standard normal via Box-Muller; one spare value is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 == 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Derives independent child seeds from one root seed (splitmix64 over the
// root and a stream tag), so every module draws from its own stream.
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view tag, std::uint64_t index = 0) {
    std::uint64_t h = root ^ 0x9e3779b97f4a7c15ull;
    auto mix = [&h](std::uint64_t v) {
        h += v + 0x9e3779b97f4a7c15ull;
        std::uint64_t z = h;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        h = z ^ (z >> 31);
    };
    for (char c : tag) mix(static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
    mix(index);
    return h;
}

} // namespace carla
