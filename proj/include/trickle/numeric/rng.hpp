#pragma once

#include <cstdint>
#include <random>

namespace trickle::numeric {

// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Seed of sub-stream `id` under `parent`. Deterministic and order-free, so
// stream i does not depend on how many other streams exist.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t id) {
    return splitmix64(parent ^ splitmix64(id + 0x632BE59BD9B4E019ULL));
}

// A seedable 64-bit stream. uniform() maps the top 53 bits onto [0, 1), so
// the draw sequence is identical across standard library implementations.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed = 0) : seed_(seed), engine_(splitmix64(seed)) {}

    RandomStream split(std::uint64_t id) const { return RandomStream(derive_seed(seed_, id)); }

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform on the open interval (0, 1).
    double uniform_open() {
        double u;
        do {
            u = uniform();
        } while (u == 0.0);
        return u;
    }

    std::uint64_t next_u64() { return engine_(); }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace trickle::numeric
