#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace gf {

// SplitMix64 finalizer; used to derive independent stream seeds from a master seed.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
    return mix_seed(mix_seed(master) ^ mix_seed(stream + 0x5bd1e995ULL));
}

enum class Stream : std::uint64_t { Engine = 1, Agent = 2 };

// Portable random stream. std::mt19937_64 output is fixed by the standard; the
// standard distributions are not, so the conversions here are done by hand.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    // Uniform in [0, 1) with 53 bits of resolution.
    double uniform() {
        ++draws_;
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Uniform integer in [lo, hi] (inclusive) by rejection, no modulo bias.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) {
            ++draws_;
            return static_cast<std::int64_t>(engine_());
        }
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
        std::uint64_t x;
        do {
            ++draws_;
            x = engine_();
        } while (x >= limit);
        return lo + static_cast<std::int64_t>(x % span);
    }

    double uniform_range(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t draws() const noexcept { return draws_; }

    bool operator==(const Rng& other) const { return draws_ == other.draws_ && engine_ == other.engine_; }

private:
    std::mt19937_64 engine_;
    std::uint64_t draws_ = 0;
};

} // namespace gf
