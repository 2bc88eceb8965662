#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "gf/config.hpp"
#include "gf/events.hpp"
#include "gf/metrics.hpp"
#include "gf/state.hpp"

namespace gf {

namespace msg {

// client -> server
struct Hello {
    std::string client_version;
    bool operator==(const Hello&) const = default;
};
struct Start {
    Condition condition = Condition::Uncertain;
    bool with_training = false;
    std::optional<std::uint64_t> seed;
    bool operator==(const Start&) const = default;
};
struct Gesture {
    gf::Gesture gesture = gf::Gesture::Zoom;
    Direction direction = Direction::Neutral;
    bool operator==(const Gesture&) const = default;
};
struct Pause {
    bool operator==(const Pause&) const = default;
};
struct Resume {
    bool operator==(const Resume&) const = default;
};

// server -> client
struct Welcome {
    std::string schema_version;
    GameConfig config;
    bool operator==(const Welcome&) const = default;
};

struct PlayerView {
    int hp = 0;
    int lives = 0;
    std::array<std::int64_t, kMoveCount> cooldown_ms{};  // player moves only; monster entries stay 0
    bool operator==(const PlayerView&) const = default;
};
struct MonsterHud {
    int hp = 0;
    int lives = 0;
    std::int64_t position_mm = 0;
    bool attack_in_progress = false;
    std::int64_t attack_elapsed_ms = 0;  // never says whether the attack is a feint
    bool operator==(const MonsterHud&) const = default;
};
struct ShieldView {
    bool active = false;
    std::int64_t remaining_ms = 0;
    bool operator==(const ShieldView&) const = default;
};
struct Snapshot {
    std::int64_t time_ms = 0;
    GamePhase phase;
    PlayerView player;
    MonsterHud monster;
    ShieldView shield;
    bool operator==(const Snapshot&) const = default;
};

struct Event {
    GameEvent event;
    bool operator==(const Event&) const = default;
};
struct Ended {
    std::optional<Actor> winner;
    Metrics metrics;
    bool operator==(const Ended&) const = default;
};
struct ProtocolError {
    std::string code;
    std::string message;
    bool operator==(const ProtocolError&) const = default;
};

} // namespace msg

using ProtocolMessage = std::variant<msg::Hello, msg::Start, msg::Gesture, msg::Pause, msg::Resume, msg::Welcome,
                                     msg::Snapshot, msg::Event, msg::Ended, msg::ProtocolError>;

std::string_view type_name(const ProtocolMessage& m) noexcept;
bool is_client_message(const ProtocolMessage& m) noexcept;

// One JSON object per frame with "type" as the first field. Times are seconds,
// positions metres; both are decoded back to whole milliseconds / millimetres.
std::string encode(const ProtocolMessage& m);
// Throws gf::Error with code "bad-message" (unparsable or missing fields) or
// "unknown-type".
ProtocolMessage decode(std::string_view frame);

msg::Snapshot make_snapshot(const GameState& state);

} // namespace gf
