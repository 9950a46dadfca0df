#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace slotkit {

// FNV-1a over the root seed bytes plus a purpose tag. Every stream of
// randomness in the toolkit is keyed as derive_seed(root, "purpose/...") so
// that runs are reproducible and streams are independent.
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view purpose) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](unsigned char byte) {
        h ^= byte;
        h *= 1099511628211ull;
    };
    for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>(root >> (8 * i)));
    for (char c : purpose) mix(static_cast<unsigned char>(c));
    return h;
}

// Deterministic RNG. The distributions are hand-rolled on top of the raw
// mt19937_64 stream because the std::*_distribution algorithms are
// implementation-defined; this keeps byte-identical artifacts portable
// across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t bits() { return engine_(); }

    // Uniform in [0, 1).
    double canonical() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * canonical(); }

    // Uniform integer in [lo, hi], inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(bounded(span));
    }

    // Box-Muller; one fresh pair per call keeps the stream position
    // independent of caller parity.
    double gaussian(double mean, double sigma) {
        double u1 = canonical();
        while (u1 <= 0.0) u1 = canonical();
        const double u2 = canonical();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        return mean + sigma * mag * std::cos(2.0 * M_PI * u2);
    }

    bool coin() { return (bits() & 1u) != 0; }

    template <typename Container>
    const typename Container::value_type& pick(const Container& c) {
        return c[static_cast<std::size_t>(bounded(c.size()))];
    }

    // Fisher-Yates.
    template <typename Container>
    void shuffle(Container& c) {
        for (std::size_t i = c.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(bounded(i));
            using std::swap;
            swap(c[i - 1], c[j]);
        }
    }

private:
    // Unbiased bounded draw by rejection.
    std::uint64_t bounded(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t x = bits();
        while (x >= limit) x = bits();
        return x % n;
    }

    std::mt19937_64 engine_;
};

}  // namespace slotkit
