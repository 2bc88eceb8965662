#include "gf/config.hpp"

#include <cmath>
#include <set>
#include <string>

#include "gf/error.hpp"

namespace gf {

MoveTable default_move_table() {
    MoveTable t{};
    t[index(MoveId::Kick)] = {MoveId::Kick, Actor::Player, MoveKind::MeleeAttack, 10, 3.0, 0.0, 1.0};
    t[index(MoveId::Punch)] = {MoveId::Punch, Actor::Player, MoveKind::MeleeAttack, 10, 3.0, 0.0, 0.8};
    t[index(MoveId::ZoomKick)] = {MoveId::ZoomKick, Actor::Player, MoveKind::RangedAttack, 30, 5.0, 1.0, 1.5};
    t[index(MoveId::MonsterPunch)] = {MoveId::MonsterPunch, Actor::Monster, MoveKind::MeleeAttack, 10, 3.0, 0.0, 0.0};
    t[index(MoveId::MonsterSquat)] = {MoveId::MonsterSquat, Actor::Monster, MoveKind::RangedAttack, 30, 5.0, 0.0, 0.0};
    t[index(MoveId::ZoomSquat)] = {MoveId::ZoomSquat, Actor::Player, MoveKind::Defense, 0, 3.0, 0.0, 1.8};
    return t;
}

double GameConfig::energy_cost(Gesture g) const noexcept {
    if (auto m = move_for(g)) return move(*m).energy_cost;
    return zoom_energy_cost;
}

std::int64_t GameConfig::tick_ms() const noexcept { return std::llround(tick * 1000.0); }

std::int64_t GameConfig::to_ms(double seconds) const noexcept { return std::llround(seconds * 1000.0); }

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
    throw Error("invalid-config", field + " " + why);
}

void check_probability(double p, const char* field) {
    if (!(p >= 0.0 && p <= 1.0)) invalid(field, "must be a probability in [0,1]");
}

bool is_whole(double x) { return std::abs(x - std::round(x)) < 1e-9; }

void check_duration(const GameConfig& c, double seconds, const std::string& field) {
    if (!(seconds > 0.0)) invalid(field, "must be positive");
    if (!is_whole(seconds / c.tick)) invalid(field, "must be a whole number of ticks");
}

} // namespace

void validate(const GameConfig& c) {
    check_probability(c.p_false_attack, "p_false_attack");
    check_probability(c.p_miss, "p_miss");
    check_probability(c.p_crit, "p_crit");
    check_probability(c.p_attack_intent, "p_attack_intent");
    if (!(c.crit_multiplier >= 1.0)) invalid("crit_multiplier", "must be >= 1");
    if (!(c.tick > 0.0)) invalid("tick", "must be positive");
    if (!is_whole(c.tick * 1000.0)) invalid("tick", "must be a whole number of milliseconds");

    check_duration(c, c.monster_action_period, "monster_action_period");
    check_duration(c, c.shield_duration, "shield_duration");
    check_duration(c, c.inter_life_wait, "inter_life_wait");
    check_duration(c, c.false_attack_duration, "false_attack_duration");
    check_duration(c, c.real_attack_windup, "real_attack_windup");
    if (c.real_attack_windup >= c.monster_action_period || c.false_attack_duration >= c.monster_action_period) {
        invalid("real_attack_windup", "and false_attack_duration must be shorter than monster_action_period");
    }

    if (c.player_max_hp <= 0) invalid("player_max_hp", "must be positive");
    if (c.monster_max_hp <= 0) invalid("monster_max_hp", "must be positive");
    if (c.lives_each <= 0) invalid("lives_each", "must be positive");
    if (c.shield_heal < 0) invalid("shield_heal", "must be >= 0");
    if (c.revive_defense_count <= 0) invalid("revive_defense_count", "must be positive");
    if (!(c.monster_move_range >= 0.0)) invalid("monster_move_range", "must be >= 0");
    if (!(c.monster_walk_speed > 0.0)) invalid("monster_walk_speed", "must be positive");
    if (!(c.directional_dead_zone >= 0.0)) invalid("directional_dead_zone", "must be >= 0");
    if (!(c.zoom_energy_cost >= 0.0)) invalid("zoom_energy_cost", "must be >= 0");

    for (std::size_t i = 0; i < kMoveCount; ++i) {
        const MoveSpec& m = c.move_table[i];
        const std::string field = "move_table." + std::string(to_string(static_cast<MoveId>(i)));
        if (index(m.id) != i) invalid(field, "has mismatched id");
        if (m.damage < 0) invalid(field + ".damage", "must be >= 0");
        check_duration(c, m.cooldown, field + ".cooldown");
        if (!(m.range >= 0.0)) invalid(field + ".range", "must be >= 0");
        if (!(m.energy_cost >= 0.0)) invalid(field + ".energy_cost", "must be >= 0");
    }
}

Json to_json(const MoveSpec& m) {
    Json j;
    j["id"] = to_string(m.id);
    j["actor"] = to_string(m.actor);
    j["kind"] = to_string(m.kind);
    j["damage"] = m.damage;
    j["cooldown"] = m.cooldown;
    j["range"] = m.range;
    j["energy_cost"] = m.energy_cost;
    return j;
}

Json to_json(const GameConfig& c) {
    Json j;
    j["condition"] = to_string(c.condition);
    j["p_false_attack"] = c.p_false_attack;
    j["p_miss"] = c.p_miss;
    j["p_crit"] = c.p_crit;
    j["crit_multiplier"] = c.crit_multiplier;
    j["monster_action_period"] = c.monster_action_period;
    j["p_attack_intent"] = c.p_attack_intent;
    j["player_max_hp"] = c.player_max_hp;
    j["monster_max_hp"] = c.monster_max_hp;
    j["lives_each"] = c.lives_each;
    j["shield_duration"] = c.shield_duration;
    j["shield_heal"] = c.shield_heal;
    j["inter_life_wait"] = c.inter_life_wait;
    j["revive_defense_count"] = c.revive_defense_count;
    j["monster_move_range"] = c.monster_move_range;
    j["false_attack_duration"] = c.false_attack_duration;
    j["real_attack_windup"] = c.real_attack_windup;
    j["tick"] = c.tick;
    Json moves = Json::array();
    for (const auto& m : c.move_table) moves.push_back(to_json(m));
    j["move_table"] = std::move(moves);
    j["zoom_energy_cost"] = c.zoom_energy_cost;
    j["monster_walk_speed"] = c.monster_walk_speed;
    j["directional_dead_zone"] = c.directional_dead_zone;
    return j;
}

namespace {

template <typename T>
T field_value(const Json& v, const std::string& field) {
    try {
        if constexpr (std::is_same_v<T, int>) {
            if (!v.is_number_integer()) invalid(field, "must be an integer");
        } else if constexpr (std::is_same_v<T, double>) {
            if (!v.is_number()) invalid(field, "must be a number");
        } else {
            if (!v.is_string()) invalid(field, "must be a string");
        }
        return v.get<T>();
    } catch (const nlohmann::json::exception& e) {
        invalid(field, e.what());
    }
}

void apply_move_overrides(MoveSpec& m, const Json& j, const std::string& prefix) {
    for (const auto& [key, v] : j.items()) {
        const std::string field = prefix + "." + key;
        if (key == "id") continue;
        if (key == "actor") {
            m.actor = parse_actor(field_value<std::string>(v, field));
        } else if (key == "kind") {
            m.kind = parse_move_kind(field_value<std::string>(v, field));
        } else if (key == "damage") {
            m.damage = field_value<int>(v, field);
        } else if (key == "cooldown") {
            m.cooldown = field_value<double>(v, field);
        } else if (key == "range") {
            m.range = field_value<double>(v, field);
        } else if (key == "energy_cost") {
            m.energy_cost = field_value<double>(v, field);
        } else {
            invalid(field, "is not a known field");
        }
    }
}

} // namespace

GameConfig apply_overrides(GameConfig c, const Json& j) {
    if (!j.is_object()) invalid("config", "must be an object");
    for (const auto& [key, v] : j.items()) {
        try {
            if (key == "condition") c.condition = parse_condition(field_value<std::string>(v, key));
            else if (key == "p_false_attack") c.p_false_attack = field_value<double>(v, key);
            else if (key == "p_miss") c.p_miss = field_value<double>(v, key);
            else if (key == "p_crit") c.p_crit = field_value<double>(v, key);
            else if (key == "crit_multiplier") c.crit_multiplier = field_value<double>(v, key);
            else if (key == "monster_action_period") c.monster_action_period = field_value<double>(v, key);
            else if (key == "p_attack_intent") c.p_attack_intent = field_value<double>(v, key);
            else if (key == "player_max_hp") c.player_max_hp = field_value<int>(v, key);
            else if (key == "monster_max_hp") c.monster_max_hp = field_value<int>(v, key);
            else if (key == "lives_each") c.lives_each = field_value<int>(v, key);
            else if (key == "shield_duration") c.shield_duration = field_value<double>(v, key);
            else if (key == "shield_heal") c.shield_heal = field_value<int>(v, key);
            else if (key == "inter_life_wait") c.inter_life_wait = field_value<double>(v, key);
            else if (key == "revive_defense_count") c.revive_defense_count = field_value<int>(v, key);
            else if (key == "monster_move_range") c.monster_move_range = field_value<double>(v, key);
            else if (key == "false_attack_duration") c.false_attack_duration = field_value<double>(v, key);
            else if (key == "real_attack_windup") c.real_attack_windup = field_value<double>(v, key);
            else if (key == "tick") c.tick = field_value<double>(v, key);
            else if (key == "zoom_energy_cost") c.zoom_energy_cost = field_value<double>(v, key);
            else if (key == "monster_walk_speed") c.monster_walk_speed = field_value<double>(v, key);
            else if (key == "directional_dead_zone") c.directional_dead_zone = field_value<double>(v, key);
            else if (key == "move_table") {
                if (!v.is_array()) invalid(key, "must be an array");
                for (const auto& entry : v) {
                    if (!entry.is_object() || !entry.contains("id")) invalid(key, "entries need an \"id\"");
                    const MoveId id = parse_move(field_value<std::string>(entry["id"], "move_table.id"));
                    apply_move_overrides(c.move_table[index(id)], entry, "move_table." + std::string(to_string(id)));
                }
            } else {
                invalid(key, "is not a known field");
            }
        } catch (const Error& e) {
            if (e.code() == "invalid-config") throw;
            invalid(key, e.detail());
        }
    }
    return c;
}

} // namespace gf
