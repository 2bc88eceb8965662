#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gf/config.hpp"
#include "gf/events.hpp"
#include "gf/rng.hpp"
#include "gf/state.hpp"

namespace gf {

enum class DefenseKind : std::uint8_t { Gullible, Discerning, NoDefense };

struct DefensePolicy {
    DefenseKind kind = DefenseKind::Gullible;
    double reveal_wait = 0.0;  // seconds, Discerning only
    bool operator==(const DefensePolicy&) const = default;
};

struct ReactionLatency {
    double mean = 0.0;    // seconds
    double jitter = 0.0;  // half-width of the uniform jitter
    bool operator==(const ReactionLatency&) const = default;
};

struct AgentProfile {
    std::string name;
    ReactionLatency reaction_latency;
    std::array<double, kGestureCount> recognition_prob{1.0, 1.0, 1.0, 1.0, 1.0};
    DefensePolicy defense_policy;
    std::vector<Gesture> attack_priority{Gesture::ZoomKick, Gesture::Kick, Gesture::Punch};
    double inter_gesture_gap = 0.0;  // seconds between consecutive gestures
    double age = 30.0;

    double recognition(Gesture g) const noexcept { return recognition_prob[index(g)]; }
    bool operator==(const AgentProfile&) const = default;
};

// Throws gf::Error("invalid-profile").
void validate(const AgentProfile& profile, const GameConfig& config);

// young_gullible, middle_gullible, young_discerning, middle_discerning, relentless.
// Throws gf::Error("unknown-profile").
AgentProfile builtin_profile(std::string_view name);
const std::vector<std::string>& builtin_profile_names();

Json to_json(const AgentProfile& profile);
// Starts from `base` (or an empty profile) and overrides present fields;
// unknown fields are rejected with "invalid-profile".
AgentProfile profile_from_json(const Json& j, const AgentProfile& base = AgentProfile{});

struct MonsterView {
    std::int64_t position_mm = 0;
    bool attack_in_progress = false;
    std::int64_t attack_elapsed_ms = 0;
    std::optional<bool> attack_is_false;  // revealed only at or past the false-attack duration
    int hp = 0;
    int lives = 0;
    bool operator==(const MonsterView&) const = default;
};

// What the player can see. Never carries engine RNG state or an unrevealed feint flag.
struct Observation {
    std::int64_t time_ms = 0;
    std::int64_t tick_ms = 50;
    GamePhase phase;
    std::array<std::int64_t, kMoveCount> cooldown_ms{};  // player moves only; monster entries are 0
    int hp = 0;
    int lives = 0;
    bool shield_active = false;
    std::int64_t shield_remaining_ms = 0;
    MonsterView monster;

    std::int64_t cooldown(MoveId m) const noexcept { return cooldown_ms[index(m)]; }
    bool operator==(const Observation&) const = default;
};

Observation observe(const GameState& state);

struct GestureIntent {
    Gesture gesture = Gesture::Zoom;
    Direction direction = Direction::Neutral;
    std::int64_t issue_time_ms = 0;
    bool recognized = true;

    GestureInput input() const noexcept { return {gesture, direction, recognized}; }
    bool operator==(const GestureIntent&) const = default;
};

// A defense committed at attack onset. Discerning commitments are cancelled
// when the attack is no longer in progress at issue time (cancel-on-reveal).
struct CommittedDefense {
    std::int64_t onset_ms = 0;
    std::int64_t issue_time_ms = 0;
    bool cancel_if_attack_ends = false;
    bool operator==(const CommittedDefense&) const = default;
};

struct AgentMemory {
    std::int64_t last_onset_ms = -1;
    std::int64_t last_gesture_ms = std::numeric_limits<std::int64_t>::min() / 2;
    std::optional<CommittedDefense> committed;
    bool operator==(const AgentMemory&) const = default;
};

// Called once per tick with the observation taken before the tick is advanced.
// Returns the intent to submit on the next tick, if one is due by then.
std::optional<GestureIntent> decide(const AgentProfile& profile, const Observation& obs, AgentMemory& memory,
                                    Rng& agent_rng);

// Convenience bundle used by the harness.
class Agent {
public:
    Agent(AgentProfile profile, std::uint64_t agent_seed)
        : profile_(std::move(profile)), rng_(derive_seed(agent_seed, static_cast<std::uint64_t>(Stream::Agent))) {}

    std::optional<GestureIntent> act(const Observation& obs) { return decide(profile_, obs, memory_, rng_); }

    const AgentProfile& profile() const noexcept { return profile_; }
    const AgentMemory& memory() const noexcept { return memory_; }

private:
    AgentProfile profile_;
    AgentMemory memory_;
    Rng rng_;
};

} // namespace gf
