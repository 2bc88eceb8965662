#pragma once

#include <array>
#include <cstdint>

#include "json.hpp"

#include "gf/types.hpp"

namespace gf {

using Json = nlohmann::ordered_json;

struct MoveSpec {
    MoveId id = MoveId::Kick;
    Actor actor = Actor::Player;
    MoveKind kind = MoveKind::MeleeAttack;
    int damage = 0;            // hit points
    double cooldown = 1.0;     // seconds
    double range = 0.0;        // meters, ranged attacks only
    double energy_cost = 0.0;  // arbitrary exertion units

    bool operator==(const MoveSpec&) const = default;
};

using MoveTable = std::array<MoveSpec, kMoveCount>;

// Indexed by MoveId. Damage/cooldown values follow the published move table.
MoveTable default_move_table();

struct GameConfig {
    Condition condition = Condition::Uncertain;
    double p_false_attack = 0.20;
    double p_miss = 0.10;
    double p_crit = 0.10;
    double crit_multiplier = 1.5;
    double monster_action_period = 2.0;
    double p_attack_intent = 0.80;
    int player_max_hp = 100;
    int monster_max_hp = 500;
    int lives_each = 3;
    double shield_duration = 2.0;
    int shield_heal = 20;
    double inter_life_wait = 5.0;
    int revive_defense_count = 5;
    double monster_move_range = 2.0;
    double false_attack_duration = 0.8;
    double real_attack_windup = 1.2;
    double tick = 0.05;
    MoveTable move_table = default_move_table();
    double zoom_energy_cost = 0.3;
    double monster_walk_speed = 1.0;      // m/s
    double directional_dead_zone = 0.25;  // m; melee hits either way inside it

    bool operator==(const GameConfig&) const = default;

    const MoveSpec& move(MoveId id) const noexcept { return move_table[index(id)]; }

    // Uncertainty knobs collapse to zero under the certain condition.
    double effective_p_false_attack() const noexcept { return condition == Condition::Certain ? 0.0 : p_false_attack; }
    double effective_p_miss() const noexcept { return condition == Condition::Certain ? 0.0 : p_miss; }
    double effective_p_crit() const noexcept { return condition == Condition::Certain ? 0.0 : p_crit; }

    double energy_cost(Gesture g) const noexcept;

    // Time inside the engine is integral milliseconds; validate() guarantees the
    // conversions below are exact.
    std::int64_t tick_ms() const noexcept;
    std::int64_t to_ms(double seconds) const noexcept;
};

// Throws gf::Error("invalid-config", <field and reason>).
void validate(const GameConfig& config);

Json to_json(const GameConfig& config);
Json to_json(const MoveSpec& move);

// Starts from `base` and overrides the fields present in `overrides`; unknown
// fields are rejected with "invalid-config". Move entries are matched by "id".
GameConfig apply_overrides(GameConfig base, const Json& overrides);
inline GameConfig config_from_json(const Json& j) { return apply_overrides(GameConfig{}, j); }

} // namespace gf
