#include "gf/events.hpp"

#include <cmath>
#include <string>

#include "gf/error.hpp"

namespace gf {

namespace {

constexpr std::array<std::string_view, std::variant_size_v<EventPayload>> kKindNames{
    "gesture_submitted", "attack_launched", "attack_resolved", "shield_activated", "shield_expired",
    "heal_applied",      "life_lost",       "phase_changed",   "monster_walked",   "session_ended"};

double ms_to_seconds(std::int64_t ms) { return static_cast<double>(ms) / 1000.0; }
std::int64_t seconds_to_ms(double s) { return std::llround(s * 1000.0); }

} // namespace

std::string_view kind_name(const EventPayload& p) noexcept { return kKindNames[p.index()]; }

Json to_json(const GameEvent& e) {
    Json j;
    j["seq"] = e.seq;
    j["time"] = ms_to_seconds(e.time_ms);
    j["kind"] = kind_name(e.payload);
    std::visit(
        [&j](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ev::GestureSubmitted>) {
                j["move"] = to_string(v.gesture);
                j["direction"] = to_string(v.direction);
                j["recognized"] = v.recognized;
                j["executed"] = v.executed;
            } else if constexpr (std::is_same_v<T, ev::AttackLaunched>) {
                j["actor"] = to_string(v.actor);
                j["move"] = to_string(v.move);
                j["is_false"] = v.is_false;
            } else if constexpr (std::is_same_v<T, ev::AttackResolved>) {
                j["actor"] = to_string(v.actor);
                j["move"] = to_string(v.move);
                j["missed"] = v.missed;
                j["crit"] = v.crit;
                j["damage_dealt"] = v.damage_dealt;
                j["blocked"] = v.blocked;
            } else if constexpr (std::is_same_v<T, ev::ShieldExpired>) {
                j["blocked_any"] = v.blocked_any;
            } else if constexpr (std::is_same_v<T, ev::HealApplied>) {
                j["amount"] = v.amount;
            } else if constexpr (std::is_same_v<T, ev::LifeLost>) {
                j["actor"] = to_string(v.actor);
            } else if constexpr (std::is_same_v<T, ev::PhaseChanged>) {
                j["from"] = to_json(v.from);
                j["to"] = to_json(v.to);
            } else if constexpr (std::is_same_v<T, ev::MonsterWalked>) {
                j["new_position"] = ms_to_seconds(v.new_position_mm);
            } else if constexpr (std::is_same_v<T, ev::SessionEnded>) {
                j["winner"] = to_string(v.winner);
            }
        },
        e.payload);
    return j;
}

GameEvent event_from_json(const Json& j) {
    try {
        GameEvent e;
        e.seq = j.at("seq").get<std::uint64_t>();
        e.time_ms = seconds_to_ms(j.at("time").get<double>());
        const auto kind = j.at("kind").get<std::string>();
        auto str = [&j](const char* key) { return j.at(key).get<std::string>(); };
        if (kind == "gesture_submitted") {
            e.payload = ev::GestureSubmitted{parse_gesture(str("move")), parse_direction(str("direction")),
                                             j.at("recognized").get<bool>(), j.at("executed").get<bool>()};
        } else if (kind == "attack_launched") {
            e.payload = ev::AttackLaunched{parse_actor(str("actor")), parse_move(str("move")), j.at("is_false").get<bool>()};
        } else if (kind == "attack_resolved") {
            e.payload = ev::AttackResolved{parse_actor(str("actor")),      parse_move(str("move")),
                                           j.at("missed").get<bool>(),     j.at("crit").get<bool>(),
                                           j.at("damage_dealt").get<int>(), j.at("blocked").get<bool>()};
        } else if (kind == "shield_activated") {
            e.payload = ev::ShieldActivated{};
        } else if (kind == "shield_expired") {
            e.payload = ev::ShieldExpired{j.at("blocked_any").get<bool>()};
        } else if (kind == "heal_applied") {
            e.payload = ev::HealApplied{j.at("amount").get<int>()};
        } else if (kind == "life_lost") {
            e.payload = ev::LifeLost{parse_actor(str("actor"))};
        } else if (kind == "phase_changed") {
            e.payload = ev::PhaseChanged{phase_from_json(j.at("from")), phase_from_json(j.at("to"))};
        } else if (kind == "monster_walked") {
            e.payload = ev::MonsterWalked{seconds_to_ms(j.at("new_position").get<double>())};
        } else if (kind == "session_ended") {
            e.payload = ev::SessionEnded{parse_actor(str("winner"))};
        } else {
            throw Error("malformed-log", "unknown event kind '" + kind + "'");
        }
        return e;
    } catch (const nlohmann::json::exception& ex) {
        throw Error("malformed-log", ex.what());
    } catch (const Error& ex) {
        if (ex.code() == "malformed-log") throw;
        throw Error("malformed-log", ex.detail());
    }
}

} // namespace gf
