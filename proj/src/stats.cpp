#include "gf/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "gf/error.hpp"
#include "gf/rng.hpp"

namespace gf {

double mean(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_sd(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    const double mu = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - mu) * (x - mu);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

namespace {

double resampled_mean(std::span<const double> xs, Rng& rng) {
    const auto n = static_cast<std::int64_t>(xs.size());
    double sum = 0.0;
    for (std::int64_t i = 0; i < n; ++i) sum += xs[static_cast<std::size_t>(rng.uniform_int(0, n - 1))];
    return sum / static_cast<double>(n);
}

} // namespace

ConfidenceInterval bootstrap_diff_ci(std::span<const double> a, std::span<const double> b, std::size_t resamples,
                                     double level, std::uint64_t seed) {
    if (a.size() < 2 || b.size() < 2) {
        throw Error("insufficient-samples", "bootstrap needs at least two samples per side");
    }
    if (!(level > 0.0 && level < 1.0)) throw Error("invalid-argument", "level must be in (0, 1)");
    if (resamples == 0) throw Error("invalid-argument", "resamples must be positive");

    Rng rng(seed);
    std::vector<double> diffs(resamples);
    for (auto& d : diffs) {
        const double ma = resampled_mean(a, rng);
        d = ma - resampled_mean(b, rng);
    }
    std::sort(diffs.begin(), diffs.end());
    const double alpha = (1.0 - level) / 2.0;
    const double last = static_cast<double>(resamples - 1);
    const auto lo = static_cast<std::size_t>(std::floor(alpha * last));
    const auto hi = static_cast<std::size_t>(std::ceil((1.0 - alpha) * last));
    return {diffs[lo], diffs[std::min(hi, resamples - 1)], level};
}

} // namespace gf
