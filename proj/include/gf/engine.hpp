#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gf/config.hpp"
#include "gf/events.hpp"
#include "gf/rng.hpp"
#include "gf/state.hpp"

namespace gf {

// Small set of move ids (bitmask); iteration order follows MoveId.
class MoveSet {
public:
    constexpr MoveSet() = default;
    constexpr MoveSet(std::initializer_list<MoveId> ids) {
        for (auto id : ids) add(id);
    }
    constexpr void add(MoveId id) noexcept { bits_ |= static_cast<std::uint8_t>(1u << index(id)); }
    constexpr bool contains(MoveId id) const noexcept { return (bits_ >> index(id)) & 1u; }
    constexpr bool empty() const noexcept { return bits_ == 0; }
    constexpr int size() const noexcept { return __builtin_popcount(bits_); }
    // The n-th member in MoveId order.
    constexpr MoveId nth(int n) const noexcept {
        for (std::size_t i = 0; i < kMoveCount; ++i) {
            if ((bits_ >> i) & 1u) {
                if (n-- == 0) return static_cast<MoveId>(i);
            }
        }
        return MoveId::Kick;
    }
    bool operator==(const MoveSet&) const = default;

private:
    std::uint8_t bits_ = 0;
};

struct MonsterAction {
    enum class Kind : std::uint8_t { Walk, RealAttack, FalseAttack };
    Kind kind = Kind::Walk;
    MoveId move = MoveId::MonsterPunch;  // attacks only
    std::int64_t walk_delta_mm = 0;      // walks only
    bool operator==(const MonsterAction&) const = default;
};

struct AttackModifiers {
    bool missed = false;
    bool crit = false;
    bool operator==(const AttackModifiers&) const = default;
};

// Throws gf::Error("invalid-config") when the config fails validation.
GameState new_game(const GameConfig& config, std::uint64_t seed, StartMode start);

// One fixed tick. Order within a tick: timers and cooldowns, monster walk,
// pending monster attack, shield expiry, monster action clock, phase timers,
// then the inputs in order. Throws gf::Error("advance-after-terminal").
std::vector<GameEvent> advance(GameState& state, std::span<const GestureInput> inputs);
// Same as advance() but appends into `out` (hot path for the harness).
void advance_into(GameState& state, std::span<const GestureInput> inputs, std::vector<GameEvent>& out);

std::vector<GameEvent> submit_gesture(GameState& state, const GestureInput& input);

// Monster moves currently off cooldown.
MoveSet available_monster_moves(const GameState& state);

// Pure in (available, condition, rng draws). No intent draw when nothing is
// available; the walk target is always drawn uniformly within range.
MonsterAction monster_decide(MoveSet available, Condition condition, const GameConfig& config,
                             std::int64_t position_mm, Rng& rng);

// Miss is rolled first; a missed attack never crits. No draws under Certain.
AttackModifiers roll_attack_modifiers(Condition condition, const GameConfig& config, Rng& rng);

int attack_damage(const GameConfig& config, MoveId move, bool crit);

std::vector<GameEvent> resolve_attack(GameState& state, Actor actor, MoveId move, AttackModifiers modifiers,
                                      Direction direction = Direction::Neutral);

// Closes the current shield window and reports whether it blocked anything.
std::vector<GameEvent> resolve_defense_window(GameState& state);

// Phase that results from `event` while training; the current phase otherwise.
GamePhase training_transition(const GameState& state, const GameEvent& event);

std::optional<Actor> check_termination(const GameState& state);

// Edges of the phase graph (self edges allowed for Training and Revive, whose
// counters are part of the phase value).
bool phase_edge_allowed(const GamePhase& from, const GamePhase& to);

// Whether a directional melee attack reaches a monster at `position_mm`.
bool melee_reaches(const GameConfig& config, Direction direction, std::int64_t position_mm);

} // namespace gf
