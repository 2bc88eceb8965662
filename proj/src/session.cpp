#include "gf/session.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "gf/engine.hpp"
#include "gf/error.hpp"

namespace gf {

Json to_json(const SessionHeader& h) {
    Json j;
    j["schema_version"] = h.schema_version;
    j["config"] = to_json(h.config);
    j["seed"] = h.seed;
    j["start"] = to_string(h.start);
    j["profile"] = h.profile_name;
    j["agent_seed"] = h.agent_seed;
    if (h.profile) j["agent_profile"] = to_json(*h.profile);
    return j;
}

SessionHeader header_from_json(const Json& j) {
    try {
        SessionHeader h;
        h.schema_version = j.at("schema_version").get<std::string>();
        if (h.schema_version != kSchemaVersion) {
            throw Error("malformed-log", "unsupported schema_version '" + h.schema_version + "'");
        }
        h.config = config_from_json(j.at("config"));
        h.seed = j.at("seed").get<std::uint64_t>();
        h.start = parse_start_mode(j.at("start").get<std::string>());
        h.profile_name = j.at("profile").get<std::string>();
        h.agent_seed = j.at("agent_seed").get<std::uint64_t>();
        if (auto it = j.find("agent_profile"); it != j.end()) h.profile = profile_from_json(*it);
        return h;
    } catch (const nlohmann::json::exception& e) {
        throw Error("malformed-log", e.what());
    } catch (const Error& e) {
        if (e.code() == "malformed-log") throw;
        throw Error("malformed-log", e.what());
    }
}

namespace {

bool has_session_end(const std::vector<GameEvent>& events) {
    return !events.empty() && events.back().as<ev::SessionEnded>() != nullptr;
}

} // namespace

std::string to_ndjson(const SessionLog& log) {
    std::string out = to_json(log.header).dump();
    out += '\n';
    for (const auto& e : log.events) {
        out += to_json(e).dump();
        out += '\n';
    }
    return out;
}

SessionLog parse_ndjson(std::string_view text) {
    SessionLog log;
    bool have_header = false;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        const std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.empty()) continue;
        Json j;
        try {
            j = Json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error("malformed-log", "line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!have_header) {
            log.header = header_from_json(j);
            have_header = true;
        } else {
            log.events.push_back(event_from_json(j));
        }
    }
    if (!have_header) throw Error("malformed-log", "missing header record");
    check_log_well_formed(log);
    log.time_cap_exceeded = !has_session_end(log.events);
    return log;
}

void write_log(const SessionLog& log, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("io-failure", "cannot open '" + path.string() + "' for writing");
    f << to_ndjson(log);
    if (!f) throw Error("io-failure", "write failed for '" + path.string() + "'");
}

SessionLog read_log(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("io-failure", "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_ndjson(ss.str());
}

void check_log_well_formed(const SessionLog& log) {
    for (std::size_t i = 1; i < log.events.size(); ++i) {
        const auto& prev = log.events[i - 1];
        const auto& cur = log.events[i];
        if (cur.seq <= prev.seq) throw Error("malformed-log", "seq not strictly increasing at event " + std::to_string(cur.seq));
        if (cur.time_ms < prev.time_ms) throw Error("malformed-log", "time decreases at event " + std::to_string(cur.seq));
    }
}

SessionLog run_session(const GameConfig& config, const AgentProfile& profile, SeedPair seeds,
                       const SessionOptions& options) {
    validate(profile, config);
    SessionLog log;
    log.header.config = config;
    log.header.seed = seeds.engine;
    log.header.start = options.start;
    log.header.profile_name = profile.name;
    log.header.agent_seed = seeds.agent;
    log.header.profile = profile;

    GameState state = new_game(config, seeds.engine, options.start);
    Agent agent(profile, seeds.agent);
    const std::int64_t cap_ms = std::llround(options.time_cap * 1000.0);
    log.events.reserve(4096);

    while (!state.terminal() && state.time_ms < cap_ms) {
        const auto intent = agent.act(observe(state));
        if (intent) {
            const GestureInput in = intent->input();
            advance_into(state, std::span<const GestureInput>(&in, 1), log.events);
        } else {
            advance_into(state, {}, log.events);
        }
    }
    log.time_cap_exceeded = !state.terminal();
    return log;
}

std::vector<TimedInput> recorded_inputs(const SessionLog& log) {
    std::vector<TimedInput> inputs;
    for (const auto& e : log.events) {
        if (const auto* g = e.as<ev::GestureSubmitted>()) {
            inputs.push_back({e.time_ms, GestureInput{g->gesture, g->direction, g->recognized}});
        }
    }
    return inputs;
}

SessionLog replay_session(const SessionLog& log) {
    check_log_well_formed(log);
    SessionLog out;
    out.header = log.header;
    GameState state = new_game(log.header.config, log.header.seed, log.header.start);
    const auto inputs = recorded_inputs(log);
    const std::int64_t end_ms = log.events.empty() ? 0 : log.events.back().time_ms;
    const std::int64_t dt = state.config.tick_ms();

    std::size_t next_input = 0;
    std::vector<GestureInput> batch;
    while (!state.terminal() && state.time_ms < end_ms) {
        const std::int64_t t = state.time_ms + dt;
        batch.clear();
        while (next_input < inputs.size() && inputs[next_input].time_ms == t) batch.push_back(inputs[next_input++].input);
        if (next_input < inputs.size() && inputs[next_input].time_ms < t) {
            throw Error("malformed-log", "gesture at t=" + std::to_string(inputs[next_input].time_ms) + "ms is not on a tick");
        }
        advance_into(state, batch, out.events);
    }
    out.time_cap_exceeded = !state.terminal();
    return out;
}

} // namespace gf
