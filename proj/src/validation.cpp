#include "gf/validation.hpp"

#include <cmath>

#include "gf/engine.hpp"
#include "gf/rng.hpp"

namespace gf {

namespace {

using Kind = MonsterAction::Kind;

struct Tally {
    std::int64_t walk = 0, real = 0, feint = 0, punch = 0, squat = 0;
};

Tally tally_policy(const GameConfig& config, Condition condition, MoveSet available, std::size_t draws, Rng& rng) {
    Tally t;
    for (std::size_t i = 0; i < draws; ++i) {
        const auto a = monster_decide(available, condition, config, 0, rng);
        switch (a.kind) {
        case Kind::Walk: ++t.walk; break;
        case Kind::RealAttack: ++t.real; break;
        case Kind::FalseAttack: ++t.feint; break;
        }
        if (a.kind != Kind::Walk) ++(a.move == MoveId::MonsterPunch ? t.punch : t.squat);
    }
    return t;
}

ProbabilityCheck check(std::string name, double expected, std::int64_t hits, std::int64_t trials) {
    ProbabilityCheck c;
    c.name = std::move(name);
    c.expected = expected;
    c.trials = trials;
    c.observed = trials > 0 ? static_cast<double>(hits) / static_cast<double>(trials) : 0.0;
    c.pass = trials > 0 && std::abs(c.observed - expected) <= c.tolerance;
    return c;
}

} // namespace

std::vector<ProbabilityCheck> probability_checks(const GameConfig& config, std::size_t draws, std::uint64_t seed) {
    validate(config);
    const MoveSet both{MoveId::MonsterPunch, MoveId::MonsterSquat};
    const MoveSet single{MoveId::MonsterPunch};
    const auto n = static_cast<std::int64_t>(draws);
    std::vector<ProbabilityCheck> out;

    Rng rng(derive_seed(seed, 1));
    const Tally c = tally_policy(config, Condition::Certain, both, draws, rng);
    out.push_back(check("certain.walk", 0.20, c.walk, n));
    out.push_back(check("certain.monster_punch", 0.40, c.punch, n));
    out.push_back(check("certain.monster_squat", 0.40, c.squat, n));
    out.push_back(check("certain.false_attack", 0.0, c.feint, n));

    rng = Rng(derive_seed(seed, 2));
    const Tally u = tally_policy(config, Condition::Uncertain, both, draws, rng);
    out.push_back(check("uncertain.walk", 0.20, u.walk, n));
    out.push_back(check("uncertain.real_attack", 0.64, u.real, n));
    out.push_back(check("uncertain.false_attack", 0.16, u.feint, n));
    out.push_back(check("uncertain.false_fraction_of_attacks", 0.20, u.feint, u.real + u.feint));

    rng = Rng(derive_seed(seed, 3));
    const Tally s = tally_policy(config, Condition::Uncertain, single, draws, rng);
    out.push_back(check("uncertain_single_skill.real_attack", 0.64, s.real, n));
    out.push_back(check("uncertain_single_skill.false_attack", 0.16, s.feint, n));

    rng = Rng(derive_seed(seed, 4));
    std::int64_t missed = 0, crit = 0;
    for (std::size_t i = 0; i < draws; ++i) {
        const auto m = roll_attack_modifiers(Condition::Uncertain, config, rng);
        missed += m.missed;
        crit += m.crit;
    }
    out.push_back(check("uncertain.miss", 0.10, missed, n));
    out.push_back(check("uncertain.crit_of_non_missed", 0.10, crit, n - missed));
    return out;
}

} // namespace gf
