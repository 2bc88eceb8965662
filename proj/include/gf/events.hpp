#pragma once

#include <cstdint>
#include <variant>

#include "gf/config.hpp"
#include "gf/state.hpp"
#include "gf/types.hpp"

namespace gf {

struct GestureInput {
    Gesture gesture = Gesture::Zoom;
    Direction direction = Direction::Neutral;
    bool recognized = true;
    bool operator==(const GestureInput&) const = default;
};

namespace ev {

// `executed` is true when the gesture took effect (move fired, revive rep
// counted, or a phase transition happened); it drives energy accounting.
struct GestureSubmitted {
    Gesture gesture = Gesture::Zoom;
    Direction direction = Direction::Neutral;
    bool recognized = false;
    bool executed = false;
    bool operator==(const GestureSubmitted&) const = default;
};
struct AttackLaunched {
    Actor actor = Actor::Player;
    MoveId move = MoveId::Kick;
    bool is_false = false;
    bool operator==(const AttackLaunched&) const = default;
};
struct AttackResolved {
    Actor actor = Actor::Player;
    MoveId move = MoveId::Kick;
    bool missed = false;
    bool crit = false;
    int damage_dealt = 0;
    bool blocked = false;
    bool operator==(const AttackResolved&) const = default;
};
struct ShieldActivated {
    bool operator==(const ShieldActivated&) const = default;
};
struct ShieldExpired {
    bool blocked_any = false;
    bool operator==(const ShieldExpired&) const = default;
};
struct HealApplied {
    int amount = 0;
    bool operator==(const HealApplied&) const = default;
};
struct LifeLost {
    Actor actor = Actor::Player;
    bool operator==(const LifeLost&) const = default;
};
struct PhaseChanged {
    GamePhase from;
    GamePhase to;
    bool operator==(const PhaseChanged&) const = default;
};
struct MonsterWalked {
    std::int64_t new_position_mm = 0;  // walk target
    bool operator==(const MonsterWalked&) const = default;
};
struct SessionEnded {
    Actor winner = Actor::Player;
    bool operator==(const SessionEnded&) const = default;
};

} // namespace ev

using EventPayload = std::variant<ev::GestureSubmitted, ev::AttackLaunched, ev::AttackResolved, ev::ShieldActivated,
                                  ev::ShieldExpired, ev::HealApplied, ev::LifeLost, ev::PhaseChanged,
                                  ev::MonsterWalked, ev::SessionEnded>;

struct GameEvent {
    std::uint64_t seq = 0;
    std::int64_t time_ms = 0;
    EventPayload payload;

    double time() const noexcept { return static_cast<double>(time_ms) / 1000.0; }

    template <typename T>
    const T* as() const noexcept {
        return std::get_if<T>(&payload);
    }

    bool operator==(const GameEvent&) const = default;
};

std::string_view kind_name(const EventPayload& p) noexcept;

// Field order is fixed so serialized logs are byte-stable.
Json to_json(const GameEvent& e);
GameEvent event_from_json(const Json& j);

} // namespace gf
