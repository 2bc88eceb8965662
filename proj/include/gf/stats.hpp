#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace gf {

struct ConfidenceInterval {
    double low = 0.0;
    double high = 0.0;
    double level = 0.95;
    bool contains(double x) const noexcept { return low <= x && x <= high; }
    bool excludes_zero() const noexcept { return low > 0.0 || high < 0.0; }
    bool operator==(const ConfidenceInterval&) const = default;
};

double mean(std::span<const double> xs);
// Sample standard deviation (n - 1); 0 for fewer than two values.
double sample_sd(std::span<const double> xs);

// Percentile bootstrap CI for mean(a) - mean(b); a and b are resampled
// independently. Throws "insufficient-samples" when either side has fewer than
// two values and "invalid-argument" for a level outside (0, 1) or zero resamples.
ConfidenceInterval bootstrap_diff_ci(std::span<const double> a, std::span<const double> b, std::size_t resamples,
                                     double level, std::uint64_t seed);

} // namespace gf
