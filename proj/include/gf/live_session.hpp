#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "gf/protocol.hpp"
#include "gf/session.hpp"

namespace gf {

inline constexpr std::int64_t kSnapshotPeriodMs = 100;

// One connection's session, independent of the transport. Client messages are
// handled immediately; gestures are queued and applied on the next tick with
// recognized = true. The owner calls tick() once per engine tick.
class LiveSession {
public:
    explicit LiveSession(GameConfig defaults, double time_cap = 1800.0);

    std::vector<ProtocolMessage> handle(const ProtocolMessage& m);
    // Decode failures become a ProtocolError reply; the session carries on.
    std::vector<ProtocolMessage> handle_frame(std::string_view frame);
    std::vector<ProtocolMessage> tick();

    bool running() const noexcept { return state_.has_value(); }
    bool paused() const noexcept { return paused_; }
    std::int64_t tick_ms() const noexcept { return defaults_.tick_ms(); }

    // Log of the current or most recently finished session.
    const SessionLog& log() const noexcept { return log_; }

    static AgentProfile human_profile();

private:
    std::vector<ProtocolMessage> start(const msg::Start& s);
    std::vector<ProtocolMessage> finish();

    GameConfig defaults_;
    std::int64_t cap_ms_;
    std::optional<GameState> state_;
    bool paused_ = false;
    std::vector<GestureInput> queued_;
    SessionLog log_;
    std::size_t flushed_ = 0;
};

struct TimedMessage {
    double at = 0.0;  // wall seconds from stream start
    ProtocolMessage message;
};

// Re-drives the logged session and yields Snapshots (every 100 ms of simulated
// time) and Events, then Ended with compute_metrics of the log. `speed` scales
// simulated time to wall time; infinity puts every message at 0. Throws
// "malformed-log" if the log does not reproduce.
std::vector<TimedMessage> replay_stream(const SessionLog& log, double speed);

// Profile used for exertion metrics of a log: embedded, built-in by name, or a default human.
AgentProfile profile_for_log(const SessionLog& log);

} // namespace gf
