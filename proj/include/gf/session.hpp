#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gf/agents.hpp"
#include "gf/config.hpp"
#include "gf/events.hpp"

namespace gf {

inline constexpr std::string_view kSchemaVersion = "gf/1";

struct SeedPair {
    std::uint64_t engine = 0;
    std::uint64_t agent = 0;
    bool operator==(const SeedPair&) const = default;
};

struct SessionHeader {
    std::string schema_version{kSchemaVersion};
    GameConfig config;
    std::uint64_t seed = 0;
    StartMode start = StartMode::GameplayOnly;
    std::string profile_name;
    std::uint64_t agent_seed = 0;
    std::optional<AgentProfile> profile;  // full profile when produced by an agent run
    bool operator==(const SessionHeader&) const = default;
};

struct SessionLog {
    SessionHeader header;
    std::vector<GameEvent> events;
    bool time_cap_exceeded = false;  // derived on read: no SessionEnded event
    bool operator==(const SessionLog&) const = default;
};

Json to_json(const SessionHeader& h);
SessionHeader header_from_json(const Json& j);

// Header line followed by one line per event, newline terminated.
std::string to_ndjson(const SessionLog& log);
SessionLog parse_ndjson(std::string_view text);  // throws "malformed-log"

void write_log(const SessionLog& log, const std::filesystem::path& path);  // throws "io-failure"
SessionLog read_log(const std::filesystem::path& path);                    // "io-failure" / "malformed-log"

// Seq strictly increasing, time nondecreasing; throws "malformed-log".
void check_log_well_formed(const SessionLog& log);

struct SessionOptions {
    StartMode start = StartMode::GameplayOnly;
    double time_cap = 1800.0;  // simulated seconds
};

SessionLog run_session(const GameConfig& config, const AgentProfile& profile, SeedPair seeds,
                       const SessionOptions& options = {});

// Re-drives the engine with the gestures recorded in `log` (at their logged
// ticks) and returns the regenerated log.
SessionLog replay_session(const SessionLog& log);

// Gestures grouped by the tick they were applied on.
struct TimedInput {
    std::int64_t time_ms = 0;
    GestureInput input;
};
std::vector<TimedInput> recorded_inputs(const SessionLog& log);

} // namespace gf
