#include "gf/live_session.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "gf/engine.hpp"
#include "gf/error.hpp"

namespace gf {

LiveSession::LiveSession(GameConfig defaults, double time_cap)
    : defaults_(std::move(defaults)), cap_ms_(std::llround(time_cap * 1000.0)) {
    validate(defaults_);
}

AgentProfile LiveSession::human_profile() {
    AgentProfile p;
    p.name = "human";
    return p;
}

std::vector<ProtocolMessage> LiveSession::handle_frame(std::string_view frame) {
    try {
        return handle(decode(frame));
    } catch (const Error& e) {
        return {msg::ProtocolError{e.code(), e.detail()}};
    }
}

std::vector<ProtocolMessage> LiveSession::handle(const ProtocolMessage& m) {
    if (!is_client_message(m)) {
        return {msg::ProtocolError{"bad-message", "'" + std::string(type_name(m)) + "' is a server message"}};
    }
    if (std::holds_alternative<msg::Hello>(m)) return {msg::Welcome{std::string(kSchemaVersion), defaults_}};
    if (const auto* s = std::get_if<msg::Start>(&m)) {
        if (running()) return {msg::ProtocolError{"already-running", "a session is already in progress"}};
        return start(*s);
    }
    if (!running()) return {msg::ProtocolError{"not-running", "no session in progress"}};
    if (const auto* g = std::get_if<msg::Gesture>(&m)) {
        if (paused_) return {msg::ProtocolError{"paused", "session is paused"}};
        queued_.push_back({g->gesture, g->direction, true});
        return {};  // acknowledged by the GestureSubmitted event on the next tick
    }
    paused_ = std::holds_alternative<msg::Pause>(m);
    return {make_snapshot(*state_)};
}

std::vector<ProtocolMessage> LiveSession::start(const msg::Start& s) {
    GameConfig cfg = defaults_;
    cfg.condition = s.condition;
    std::uint64_t seed = 0;
    if (s.seed) {
        seed = *s.seed;
    } else {
        std::random_device rd;
        seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
    const StartMode mode = s.with_training ? StartMode::WithTraining : StartMode::GameplayOnly;

    log_ = SessionLog{};
    log_.header.config = cfg;
    log_.header.seed = seed;
    log_.header.start = mode;
    log_.header.profile_name = "human";
    flushed_ = 0;
    paused_ = false;
    queued_.clear();
    state_ = new_game(cfg, seed, mode);
    return {msg::Welcome{std::string(kSchemaVersion), cfg}, make_snapshot(*state_)};
}

std::vector<ProtocolMessage> LiveSession::tick() {
    std::vector<ProtocolMessage> out;
    if (!running() || paused_) return out;
    advance_into(*state_, queued_, log_.events);
    queued_.clear();
    for (; flushed_ < log_.events.size(); ++flushed_) out.emplace_back(msg::Event{log_.events[flushed_]});
    if (state_->time_ms % kSnapshotPeriodMs == 0) out.emplace_back(make_snapshot(*state_));
    if (state_->terminal() || state_->time_ms >= cap_ms_) {
        auto end = finish();
        out.insert(out.end(), std::make_move_iterator(end.begin()), std::make_move_iterator(end.end()));
    }
    return out;
}

std::vector<ProtocolMessage> LiveSession::finish() {
    log_.time_cap_exceeded = !state_->terminal();
    msg::Ended e;
    if (const auto* t = std::get_if<TerminalPhase>(&state_->phase)) e.winner = t->winner;
    e.metrics = compute_metrics(log_, human_profile());
    state_.reset();
    paused_ = false;
    return {std::move(e)};
}

AgentProfile profile_for_log(const SessionLog& log) {
    if (log.header.profile) return *log.header.profile;
    const auto& names = builtin_profile_names();
    if (std::find(names.begin(), names.end(), log.header.profile_name) != names.end()) {
        return builtin_profile(log.header.profile_name);
    }
    return LiveSession::human_profile();
}

std::vector<TimedMessage> replay_stream(const SessionLog& log, double speed) {
    if (!(speed > 0.0)) throw Error("invalid-argument", "replay speed must be positive");
    const SessionLog regenerated = replay_session(log);
    if (regenerated.events != log.events) {
        throw Error("malformed-log", "log does not reproduce under replay");
    }
    const bool batch = std::isinf(speed);
    auto wall = [&](std::int64_t t_ms) { return batch ? 0.0 : static_cast<double>(t_ms) / 1000.0 / speed; };

    std::vector<TimedMessage> out;
    GameState state = new_game(log.header.config, log.header.seed, log.header.start);
    const auto inputs = recorded_inputs(log);
    const std::int64_t end_ms = log.events.empty() ? 0 : log.events.back().time_ms;
    std::size_t next_input = 0;
    std::vector<GestureInput> batch_inputs;
    std::vector<GameEvent> events;

    out.push_back({wall(0), make_snapshot(state)});
    while (!state.terminal() && state.time_ms < end_ms) {
        const std::int64_t t = state.time_ms + state.config.tick_ms();
        batch_inputs.clear();
        while (next_input < inputs.size() && inputs[next_input].time_ms == t) batch_inputs.push_back(inputs[next_input++].input);
        events.clear();
        advance_into(state, batch_inputs, events);
        for (auto& e : events) out.push_back({wall(state.time_ms), msg::Event{std::move(e)}});
        if (state.time_ms % kSnapshotPeriodMs == 0) out.push_back({wall(state.time_ms), make_snapshot(state)});
    }
    msg::Ended ended;
    ended.metrics = compute_metrics(log, profile_for_log(log));
    ended.winner = ended.metrics.winner;
    out.push_back({wall(end_ms), std::move(ended)});
    return out;
}

} // namespace gf
