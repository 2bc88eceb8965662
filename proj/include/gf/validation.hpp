#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gf/config.hpp"

namespace gf {

struct ProbabilityCheck {
    std::string name;
    double expected = 0.0;  // nominal rule value, independent of the config under test
    double observed = 0.0;
    double tolerance = 0.01;
    std::int64_t trials = 0;
    bool pass = false;
};

// Monte Carlo frequencies of the monster policy and the miss/crit rolls, each
// from `draws` seeded trials against `config` (condition is set per check).
std::vector<ProbabilityCheck> probability_checks(const GameConfig& config, std::size_t draws, std::uint64_t seed);

} // namespace gf
