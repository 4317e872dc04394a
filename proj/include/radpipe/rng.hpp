#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace radpipe {

// SplitMix64 stream. Chosen over std::mt19937 / std::shuffle /
// std::normal_distribution because their outputs are not pinned by the
// standard; every sample drawn here is a pure function of the seed.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Bounded integer via rejection-free scaling (bias negligible for the
    // small bounds used here, and fully deterministic).
    std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

    // Standard normal via Box-Muller; samples are produced in pairs.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_double();
        double u2 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Documented seed-splitting rule: one SplitMix64 step keyed by the stream
// index. Used to derive per-case and per-class seeds from a master seed.
inline std::uint64_t hash64(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 g(seed ^ (stream * 0xd1b54a32d192ed03ULL + 0x2545f4914f6cdd1dULL));
    return g.next_u64();
}

// Fisher-Yates with an explicit generator, identical on every platform.
template <typename T>
void deterministic_shuffle(std::vector<T>& items, SplitMix64& gen) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(gen.next_below(i));
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace radpipe
