#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <variant>

#include "gf/config.hpp"
#include "gf/rng.hpp"
#include "gf/types.hpp"

namespace gf {

enum class TrainingStage : std::uint8_t { Kick, Punch, ZoomKick, ZoomSquat };

std::string_view to_string(TrainingStage s) noexcept;
TrainingStage parse_training_stage(std::string_view s);

constexpr MoveId trained_move(TrainingStage s) noexcept {
    switch (s) {
        case TrainingStage::Kick: return MoveId::Kick;
        case TrainingStage::Punch: return MoveId::Punch;
        case TrainingStage::ZoomKick: return MoveId::ZoomKick;
        case TrainingStage::ZoomSquat: return MoveId::ZoomSquat;
    }
    return MoveId::Kick;
}

struct TrainingPhase {
    TrainingStage stage = TrainingStage::Kick;
    int progress = 0;  // 0..2
    bool awaiting_zoom = false;
    bool operator==(const TrainingPhase&) const = default;
};
struct GameplayPhase {
    bool operator==(const GameplayPhase&) const = default;
};
struct RevivePhase {
    int defenses_done = 0;
    bool awaiting_zoom = false;
    bool operator==(const RevivePhase&) const = default;
};
struct InterLifeWaitPhase {
    std::int64_t remaining_ms = 0;
    bool operator==(const InterLifeWaitPhase&) const = default;
};
struct TerminalPhase {
    Actor winner = Actor::Player;
    bool operator==(const TerminalPhase&) const = default;
};

using GamePhase = std::variant<TrainingPhase, GameplayPhase, RevivePhase, InterLifeWaitPhase, TerminalPhase>;

std::string_view phase_name(const GamePhase& p) noexcept;

Json to_json(const GamePhase& p);
GamePhase phase_from_json(const Json& j);

struct PendingAttack {
    MoveId move = MoveId::MonsterPunch;
    std::int64_t elapsed_ms = 0;
    bool is_false = false;
    bool operator==(const PendingAttack&) const = default;
};

struct CombatantState {
    int hp = 0;
    int lives_remaining = 0;
    std::int64_t position_mm = 0;  // lateral offset from start; the player stays at 0
    std::array<std::int64_t, kMoveCount> cooldown_ms{};
    std::optional<PendingAttack> pending_attack;
    std::optional<std::int64_t> walk_target_mm;

    std::int64_t cooldown(MoveId m) const noexcept { return cooldown_ms[index(m)]; }
    double position() const noexcept { return static_cast<double>(position_mm) / 1000.0; }
    bool operator==(const CombatantState&) const = default;
};

struct ShieldState {
    bool active = false;
    std::int64_t remaining_ms = 0;
    bool blocked_this_activation = false;
    bool operator==(const ShieldState&) const = default;
};

struct GameState {
    GameConfig config;
    std::int64_t time_ms = 0;
    std::int64_t ticks = 0;
    GamePhase phase;
    CombatantState player;
    CombatantState monster;
    ShieldState shield;
    std::int64_t monster_action_clock_ms = 0;
    Rng engine_rng;
    std::uint64_t event_seq = 0;

    double time() const noexcept { return static_cast<double>(time_ms) / 1000.0; }
    bool terminal() const noexcept { return std::holds_alternative<TerminalPhase>(phase); }
    bool operator==(const GameState&) const = default;
};

} // namespace gf
