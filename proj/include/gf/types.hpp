#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace gf {

enum class Condition : std::uint8_t { Certain, Uncertain };

enum class Actor : std::uint8_t { Player, Monster };

enum class MoveId : std::uint8_t { Kick, Punch, ZoomKick, MonsterPunch, MonsterSquat, ZoomSquat };
inline constexpr std::size_t kMoveCount = 6;

enum class MoveKind : std::uint8_t { MeleeAttack, RangedAttack, Defense };

enum class Gesture : std::uint8_t { Kick, Punch, ZoomKick, ZoomSquat, Zoom };
inline constexpr std::size_t kGestureCount = 5;
inline constexpr std::array<Gesture, kGestureCount> kAllGestures{
    Gesture::Kick, Gesture::Punch, Gesture::ZoomKick, Gesture::ZoomSquat, Gesture::Zoom};

enum class Direction : std::uint8_t { Left, Right, Neutral };

enum class StartMode : std::uint8_t { WithTraining, GameplayOnly };

constexpr std::size_t index(MoveId m) noexcept { return static_cast<std::size_t>(m); }
constexpr std::size_t index(Gesture g) noexcept { return static_cast<std::size_t>(g); }

// Player move triggered by a gesture; Zoom is a phase gesture with no move.
constexpr std::optional<MoveId> move_for(Gesture g) noexcept {
    switch (g) {
        case Gesture::Kick: return MoveId::Kick;
        case Gesture::Punch: return MoveId::Punch;
        case Gesture::ZoomKick: return MoveId::ZoomKick;
        case Gesture::ZoomSquat: return MoveId::ZoomSquat;
        case Gesture::Zoom: return std::nullopt;
    }
    return std::nullopt;
}

constexpr bool is_attack_gesture(Gesture g) noexcept {
    return g == Gesture::Kick || g == Gesture::Punch || g == Gesture::ZoomKick;
}

std::string_view to_string(Condition c) noexcept;
std::string_view to_string(Actor a) noexcept;
std::string_view to_string(MoveId m) noexcept;
std::string_view to_string(MoveKind k) noexcept;
std::string_view to_string(Gesture g) noexcept;
std::string_view to_string(Direction d) noexcept;
std::string_view to_string(StartMode s) noexcept;

// Parsers throw gf::Error("bad-value", ...) on unknown names.
Condition parse_condition(std::string_view s);
Actor parse_actor(std::string_view s);
MoveId parse_move(std::string_view s);
MoveKind parse_move_kind(std::string_view s);
Gesture parse_gesture(std::string_view s);
Direction parse_direction(std::string_view s);
StartMode parse_start_mode(std::string_view s);

} // namespace gf
