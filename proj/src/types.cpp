#include "gf/types.hpp"

#include <string>

#include "gf/error.hpp"

namespace gf {

namespace {

template <typename Enum, std::size_t N>
Enum parse_named(std::string_view s, const std::array<std::string_view, N>& names, std::string_view what) {
    for (std::size_t i = 0; i < N; ++i) {
        if (names[i] == s) return static_cast<Enum>(i);
    }
    throw Error("bad-value", "unknown " + std::string(what) + " '" + std::string(s) + "'");
}

constexpr std::array<std::string_view, 2> kConditionNames{"certain", "uncertain"};
constexpr std::array<std::string_view, 2> kActorNames{"player", "monster"};
constexpr std::array<std::string_view, kMoveCount> kMoveNames{
    "kick", "punch", "zoom_kick", "monster_punch", "monster_squat", "zoom_squat"};
constexpr std::array<std::string_view, 3> kKindNames{"melee_attack", "ranged_attack", "defense"};
constexpr std::array<std::string_view, kGestureCount> kGestureNames{
    "kick", "punch", "zoom_kick", "zoom_squat", "zoom"};
constexpr std::array<std::string_view, 3> kDirectionNames{"left", "right", "neutral"};
constexpr std::array<std::string_view, 2> kStartNames{"with_training", "gameplay_only"};

} // namespace

std::string_view to_string(Condition c) noexcept { return kConditionNames[static_cast<std::size_t>(c)]; }
std::string_view to_string(Actor a) noexcept { return kActorNames[static_cast<std::size_t>(a)]; }
std::string_view to_string(MoveId m) noexcept { return kMoveNames[index(m)]; }
std::string_view to_string(MoveKind k) noexcept { return kKindNames[static_cast<std::size_t>(k)]; }
std::string_view to_string(Gesture g) noexcept { return kGestureNames[index(g)]; }
std::string_view to_string(Direction d) noexcept { return kDirectionNames[static_cast<std::size_t>(d)]; }
std::string_view to_string(StartMode s) noexcept { return kStartNames[static_cast<std::size_t>(s)]; }

Condition parse_condition(std::string_view s) { return parse_named<Condition>(s, kConditionNames, "condition"); }
Actor parse_actor(std::string_view s) { return parse_named<Actor>(s, kActorNames, "actor"); }
MoveId parse_move(std::string_view s) { return parse_named<MoveId>(s, kMoveNames, "move"); }
MoveKind parse_move_kind(std::string_view s) { return parse_named<MoveKind>(s, kKindNames, "move kind"); }
Gesture parse_gesture(std::string_view s) { return parse_named<Gesture>(s, kGestureNames, "gesture"); }
Direction parse_direction(std::string_view s) { return parse_named<Direction>(s, kDirectionNames, "direction"); }
StartMode parse_start_mode(std::string_view s) { return parse_named<StartMode>(s, kStartNames, "start mode"); }

} // namespace gf
