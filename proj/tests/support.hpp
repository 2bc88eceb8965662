#pragma once

// Test-side oracles. Nothing here calls engine helpers that it is meant to
// check (phase_edge_allowed, check_termination, ...); rules are restated.

#include <cstdint>
#include <cstdlib>
#include <unistd.h>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "gf/agents.hpp"
#include "gf/engine.hpp"
#include "gf/session.hpp"

namespace gf::test {

inline std::filesystem::path temp_dir() {
    auto base = std::filesystem::temp_directory_path() / ("gf-test-" + std::to_string(::getpid()));
    std::filesystem::create_directories(base);
    return base;
}

inline GameEvent make_event(std::uint64_t seq, std::int64_t t_ms, EventPayload p) { return {seq, t_ms, std::move(p)}; }

// Small builder for synthetic logs: events get consecutive seq numbers.
struct LogBuilder {
    SessionLog log;
    std::uint64_t seq = 0;

    explicit LogBuilder(StartMode start = StartMode::GameplayOnly, Condition cond = Condition::Uncertain) {
        log.header.config.condition = cond;
        log.header.start = start;
        log.header.profile_name = "synthetic";
    }
    LogBuilder& add(std::int64_t t_ms, EventPayload p) {
        log.events.push_back(make_event(++seq, t_ms, std::move(p)));
        return *this;
    }
    LogBuilder& gesture(std::int64_t t_ms, Gesture g, bool executed, bool recognized = true) {
        return add(t_ms, ev::GestureSubmitted{g, Direction::Right, recognized, executed});
    }
};

inline bool edge_ok(const GamePhase& from, const GamePhase& to) {
    const std::string f{phase_name(from)};
    const std::string t{phase_name(to)};
    static const std::map<std::string, std::vector<std::string>> graph{
        {"training", {"training", "gameplay"}},
        {"gameplay", {"revive", "inter_life_wait", "terminal"}},
        {"revive", {"revive", "gameplay"}},
        {"inter_life_wait", {"gameplay"}},
        {"terminal", {}},
    };
    const auto it = graph.find(f);
    if (it == graph.end()) return false;
    for (const auto& s : it->second) {
        if (s == t) return true;
    }
    return false;
}

// Event-level invariants of a finished log. Returns a list of violations.
inline std::vector<std::string> log_violations(const SessionLog& log) {
    std::vector<std::string> bad;
    const GameConfig& cfg = log.header.config;
    const std::int64_t tick = std::llround(cfg.tick * 1000.0);
    const std::int64_t period = std::llround(cfg.monster_action_period * 1000.0);
    auto cd_ms = [&](MoveId m) { return std::llround(cfg.move(m).cooldown * 1000.0); };
    auto fail = [&](const GameEvent& e, const std::string& what) {
        bad.push_back("seq " + std::to_string(e.seq) + " t=" + std::to_string(e.time_ms) + ": " + what);
    };

    GamePhase phase = log.header.start == StartMode::WithTraining ? GamePhase{TrainingPhase{}} : GamePhase{GameplayPhase{}};
    std::int64_t segment_start = log.header.start == StartMode::WithTraining ? -1 : 0;
    std::map<std::pair<int, int>, std::int64_t> last_use;  // (actor, move) -> time
    std::int64_t last_monster_decision = -1;
    struct Launch {
        std::int64_t t;
        bool is_false;
    };
    std::optional<Launch> monster_launch;
    bool ended = false;

    for (std::size_t i = 0; i < log.events.size(); ++i) {
        const auto& e = log.events[i];
        if (ended) fail(e, "event after SessionEnded");
        if (e.seq != i + 1) fail(e, "seq is not consecutive from 1");
        if (i > 0 && e.time_ms < log.events[i - 1].time_ms) fail(e, "time decreases");
        if (e.time_ms % tick != 0) fail(e, "time not on a tick");

        const bool gameplay = std::holds_alternative<GameplayPhase>(phase);
        const bool zoom_squat_training =
            std::holds_alternative<TrainingPhase>(phase) && std::get<TrainingPhase>(phase).stage == TrainingStage::ZoomSquat;

        if (const auto* pc = e.as<ev::PhaseChanged>()) {
            if (phase_name(pc->from) != phase_name(phase)) fail(e, "PhaseChanged.from does not match current phase");
            if (!edge_ok(pc->from, pc->to)) {
                fail(e, "illegal edge " + std::string(phase_name(pc->from)) + " -> " + std::string(phase_name(pc->to)));
            }
            const bool into_monster_clock =
                std::holds_alternative<GameplayPhase>(pc->to) ||
                (std::holds_alternative<TrainingPhase>(pc->to) && std::get<TrainingPhase>(pc->to).stage == TrainingStage::ZoomSquat &&
                 !(std::holds_alternative<TrainingPhase>(pc->from) &&
                   std::get<TrainingPhase>(pc->from).stage == TrainingStage::ZoomSquat));
            if (into_monster_clock) {
                segment_start = e.time_ms;
                last_monster_decision = -1;
            }
            phase = pc->to;
        } else if (e.as<ev::MonsterWalked>() || (e.as<ev::AttackLaunched>() && e.as<ev::AttackLaunched>()->actor == Actor::Monster)) {
            if (!gameplay && !zoom_squat_training) fail(e, "monster acted outside gameplay");
            if (segment_start < 0 || (e.time_ms - segment_start) % period != 0 || e.time_ms == segment_start) {
                fail(e, "monster decision off the action cadence");
            }
            if (last_monster_decision >= 0 && e.time_ms - last_monster_decision != period) {
                fail(e, "monster decisions not exactly one period apart");
            }
            last_monster_decision = e.time_ms;
            if (const auto* w = e.as<ev::MonsterWalked>()) {
                if (std::abs(w->new_position_mm) > std::llround(cfg.monster_move_range * 1000.0)) fail(e, "walk target out of range");
            }
        }

        if (const auto* l = e.as<ev::AttackLaunched>()) {
            const auto key = std::make_pair(static_cast<int>(l->actor), static_cast<int>(l->move));
            if (auto it = last_use.find(key); it != last_use.end() && e.time_ms - it->second < cd_ms(l->move)) {
                fail(e, "cooldown violated for " + std::string(to_string(l->move)));
            }
            last_use[key] = e.time_ms;
            if (l->is_false && log.header.config.condition == Condition::Certain) fail(e, "false attack under certain");
            if (l->actor == Actor::Monster) monster_launch = Launch{e.time_ms, l->is_false};
        }
        if (e.as<ev::ShieldActivated>()) {
            const auto key = std::make_pair(static_cast<int>(Actor::Player), static_cast<int>(MoveId::ZoomSquat));
            if (auto it = last_use.find(key); it != last_use.end() && e.time_ms - it->second < cd_ms(MoveId::ZoomSquat)) {
                fail(e, "shield cooldown violated");
            }
            last_use[key] = e.time_ms;
        }
        if (const auto* r = e.as<ev::AttackResolved>()) {
            if (r->crit && r->missed) fail(e, "missed attack marked crit");
            if (r->crit && r->damage_dealt != 15 && r->damage_dealt != 45) fail(e, "crit damage not in {15,45}");
            if (!r->crit && r->damage_dealt != 0 && r->damage_dealt != 10 && r->damage_dealt != 30) fail(e, "bad base damage");
            if (log.header.config.condition == Condition::Certain && (r->crit || r->missed)) fail(e, "miss/crit under certain");
            if (r->actor == Actor::Monster) {
                if (!monster_launch) fail(e, "monster attack resolved without a launch");
                else if (monster_launch->is_false) fail(e, "false attack dealt a resolution");
                else if (e.time_ms - monster_launch->t != std::llround(cfg.real_attack_windup * 1000.0)) fail(e, "windup length wrong");
                monster_launch.reset();
            }
        }
        if (e.as<ev::LifeLost>()) monster_launch.reset();
        if (e.as<ev::SessionEnded>()) ended = true;
    }
    if (!log.time_cap_exceeded && !ended) bad.push_back("log neither ended nor capped");
    return bad;
}

// Steps a session like run_session, checking state bounds after every tick.
struct CheckedRun {
    SessionLog log;
    std::vector<std::string> violations;
};

inline CheckedRun run_checked(const GameConfig& config, const AgentProfile& profile, SeedPair seeds,
                              const SessionOptions& opts = {}) {
    CheckedRun r;
    r.log.header.config = config;
    r.log.header.seed = seeds.engine;
    r.log.header.start = opts.start;
    r.log.header.profile_name = profile.name;
    r.log.header.agent_seed = seeds.agent;
    r.log.header.profile = profile;
    GameState s = new_game(config, seeds.engine, opts.start);
    Agent agent(profile, seeds.agent);
    const std::int64_t cap = std::llround(opts.time_cap * 1000.0);
    const std::int64_t range = std::llround(config.monster_move_range * 1000.0);
    auto fail = [&](const std::string& what) {
        if (r.violations.size() < 20) r.violations.push_back("t=" + std::to_string(s.time_ms) + ": " + what);
    };
    while (!s.terminal() && s.time_ms < cap) {
        const auto intent = agent.act(observe(s));
        std::vector<GestureInput> in;
        if (intent) in.push_back(intent->input());
        advance_into(s, in, r.log.events);
        if (s.player.hp < 0 || s.player.hp > config.player_max_hp) fail("player hp out of bounds");
        if (s.monster.hp < 0 || s.monster.hp > config.monster_max_hp) fail("monster hp out of bounds");
        if (s.player.lives_remaining < 0 || s.monster.lives_remaining < 0) fail("negative lives");
        if (std::abs(s.monster.position_mm) > range) fail("monster out of range");
        for (std::size_t m = 0; m < kMoveCount; ++m) {
            const auto cap_cd = std::llround(config.move_table[m].cooldown * 1000.0);
            if (s.player.cooldown_ms[m] < 0 || s.player.cooldown_ms[m] > cap_cd) fail("player cooldown out of range");
            if (s.monster.cooldown_ms[m] < 0 || s.monster.cooldown_ms[m] > cap_cd) fail("monster cooldown out of range");
        }
        if (s.shield.active && (s.shield.remaining_ms <= 0 || s.shield.remaining_ms > std::llround(config.shield_duration * 1000.0))) {
            fail("shield timer out of range");
        }
    }
    r.log.time_cap_exceeded = !s.terminal();
    for (auto& v : log_violations(r.log)) {
        if (r.violations.size() < 20) r.violations.push_back(v);
    }
    return r;
}

template <class T>
std::size_t count_events(const SessionLog& log) {
    std::size_t n = 0;
    for (const auto& e : log.events) n += e.as<T>() != nullptr;
    return n;
}

} // namespace gf::test
