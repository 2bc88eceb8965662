#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "gf/error.hpp"
#include "gf/live_session.hpp"
#include "gf/metrics.hpp"
#include "support.hpp"

using namespace gf;

namespace {

template <class T>
std::vector<T> of_type(const std::vector<ProtocolMessage>& msgs) {
    std::vector<T> out;
    for (const auto& m : msgs) {
        if (const auto* p = std::get_if<T>(&m)) out.push_back(*p);
    }
    return out;
}

std::string error_code(const std::vector<ProtocolMessage>& msgs) {
    const auto e = of_type<msg::ProtocolError>(msgs);
    return e.size() == 1 ? e.front().code : std::string{};
}

// Plays a session with random gestures at random ticks until it ends.
SessionLog random_live_log(std::uint64_t seed, double cap, bool training) {
    LiveSession live(GameConfig{}, cap);
    std::mt19937_64 r(seed);
    live.handle(msg::Start{Condition::Uncertain, training, seed});
    while (live.running()) {
        if (r() % 6 == 0) {
            const auto g = kAllGestures[r() % kAllGestures.size()];
            const auto d = static_cast<Direction>(r() % 3);
            live.handle(msg::Gesture{g, d});
        }
        live.tick();
    }
    return live.log();
}

} // namespace

TEST_SUITE("live_session") {
    TEST_CASE("hello, start, and the running guard") {
        LiveSession live(GameConfig{});
        auto out = live.handle(msg::Hello{"test"});
        REQUIRE(out.size() == 1);
        const auto w = std::get<msg::Welcome>(out[0]);
        CHECK(w.schema_version == "gf/1");
        CHECK(w.config == GameConfig{});

        CHECK(error_code(live.handle(msg::Gesture{Gesture::Kick, Direction::Neutral})) == "not-running");
        CHECK(error_code(live.handle(msg::Pause{})) == "not-running");

        out = live.handle(msg::Start{Condition::Certain, false, 5});
        REQUIRE(out.size() == 2);
        CHECK(std::get<msg::Welcome>(out[0]).config.condition == Condition::Certain);
        const auto snap = std::get<msg::Snapshot>(out[1]);
        CHECK(snap.time_ms == 0);
        CHECK(std::holds_alternative<GameplayPhase>(snap.phase));
        CHECK(live.running());
        CHECK(live.log().header.seed == 5);
        CHECK(live.log().header.profile_name == "human");

        CHECK(error_code(live.handle(msg::Start{Condition::Uncertain, false, 6})) == "already-running");
        CHECK(live.log().header.seed == 5);
    }

    TEST_CASE("a start without a seed records the one it picked") {
        LiveSession a(GameConfig{}), b(GameConfig{});
        a.handle(msg::Start{});
        b.handle(msg::Start{});
        CHECK(a.log().header.seed != b.log().header.seed);
    }

    TEST_CASE("gestures apply on the next tick; cooldown is respected") {
        LiveSession live(GameConfig{});
        live.handle(msg::Start{Condition::Certain, false, 1});
        CHECK(live.handle(msg::Gesture{Gesture::Kick, Direction::Neutral}).empty());
        auto events = of_type<msg::Event>(live.tick());
        REQUIRE(events.size() == 3);
        const auto* g = events[0].event.as<ev::GestureSubmitted>();
        REQUIRE(g);
        CHECK(g->recognized);
        CHECK(g->executed);
        CHECK(events[1].event.as<ev::AttackLaunched>());

        live.handle(msg::Gesture{Gesture::Kick, Direction::Neutral});
        events = of_type<msg::Event>(live.tick());
        REQUIRE(events.size() == 1);
        CHECK_FALSE(events[0].event.as<ev::GestureSubmitted>()->executed);
    }

    TEST_CASE("bad frames get an error and the session carries on") {
        LiveSession live(GameConfig{});
        live.handle(msg::Start{Condition::Uncertain, false, 2});
        CHECK(error_code(live.handle_frame("{{{")) == "bad-message");
        CHECK(error_code(live.handle_frame("{\"type\":\"moonwalk\"}")) == "unknown-type");
        CHECK(error_code(live.handle(msg::Snapshot{})) == "bad-message");
        CHECK(live.running());
        CHECK(live.handle_frame(R"({"type":"gesture","gesture":"punch","direction":"left"})").empty());
        const auto events = of_type<msg::Event>(live.tick());
        REQUIRE_FALSE(events.empty());
        CHECK(events[0].event.as<ev::GestureSubmitted>()->gesture == Gesture::Punch);
    }

    TEST_CASE("snapshots ten times a second, pause freezes time") {
        LiveSession live(GameConfig{});
        live.handle(msg::Start{Condition::Uncertain, false, 3});
        std::vector<std::int64_t> times;
        for (int i = 0; i < 40; ++i) {
            for (const auto& s : of_type<msg::Snapshot>(live.tick())) times.push_back(s.time_ms);
        }
        REQUIRE(times.size() == 20);
        for (std::size_t i = 0; i < times.size(); ++i) CHECK(times[i] == 100 * static_cast<std::int64_t>(i + 1));

        auto out = live.handle(msg::Pause{});
        CHECK(live.paused());
        CHECK(std::get<msg::Snapshot>(out.at(0)).time_ms == 2000);
        CHECK(live.tick().empty());
        CHECK(error_code(live.handle(msg::Gesture{Gesture::Kick, Direction::Neutral})) == "paused");
        live.handle(msg::Resume{});
        CHECK_FALSE(live.paused());
        live.tick();
        live.tick();
        CHECK((live.log().events.empty() || live.log().events.back().time_ms <= 2100));
    }

    TEST_CASE("a live session ends with metrics and replays headless") {
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            LiveSession live(GameConfig{}, 60.0);
            std::mt19937_64 r(seed);
            live.handle(msg::Start{Condition::Uncertain, seed == 2, seed});
            std::vector<msg::Ended> ended;
            while (live.running()) {
                if (r() % 6 == 0) live.handle(msg::Gesture{kAllGestures[r() % 5], static_cast<Direction>(r() % 3)});
                for (auto& e : of_type<msg::Ended>(live.tick())) ended.push_back(e);
            }
            REQUIRE(ended.size() == 1);
            const auto& log = live.log();
            CHECK(ended[0].metrics == compute_metrics(log, LiveSession::human_profile()));
            CHECK(replay_session(log).events == log.events);
            CHECK(parse_ndjson(to_ndjson(log)) == log);
            CHECK(test::log_violations(log).empty());
        }
        // Random play under a long cap hits the terminal phase or the cap; either way the log replays.
        const auto log = random_live_log(9, 600.0, true);
        CHECK(replay_session(log).events == log.events);
    }

    TEST_CASE("replay stream: snapshots, events, and final metrics") {
        const auto p = builtin_profile("young_gullible");
        const auto log = run_session(GameConfig{}, p, {12, 12});
        const auto stream = replay_stream(log, std::numeric_limits<double>::infinity());
        std::vector<GameEvent> events;
        std::size_t snapshots = 0;
        for (const auto& tm : stream) {
            CHECK(tm.at == 0.0);
            if (const auto* e = std::get_if<msg::Event>(&tm.message)) events.push_back(e->event);
            if (const auto* s = std::get_if<msg::Snapshot>(&tm.message)) {
                CHECK(s->time_ms % kSnapshotPeriodMs == 0);
                ++snapshots;
            }
        }
        CHECK(events == log.events);
        CHECK(snapshots == static_cast<std::size_t>(log.events.back().time_ms / kSnapshotPeriodMs) + 1);
        const auto& ended = std::get<msg::Ended>(stream.back().message);
        CHECK(ended.metrics == compute_metrics(log, p));
        CHECK(ended.winner == log.events.back().as<ev::SessionEnded>()->winner);
    }

    TEST_CASE("replay stream pacing follows simulated time") {
        const auto log = run_session(GameConfig{}, builtin_profile("relentless"), {4, 4});
        const double duration = log.events.back().time();
        for (double speed : {1.0, 4.0}) {
            const auto stream = replay_stream(log, speed);
            double prev = 0.0;
            for (const auto& tm : stream) {
                CHECK(tm.at >= prev);
                prev = tm.at;
                if (const auto* s = std::get_if<msg::Snapshot>(&tm.message)) {
                    CHECK(tm.at == doctest::Approx(static_cast<double>(s->time_ms) / 1000.0 / speed));
                }
            }
            CHECK(std::abs(stream.back().at - duration / speed) <= kSnapshotPeriodMs / 1000.0);
        }
    }

    TEST_CASE("replay stream rejects a tampered log") {
        auto log = run_session(GameConfig{}, builtin_profile("middle_gullible"), {5, 5});
        for (auto& e : log.events) {
            if (auto* r = std::get_if<ev::AttackResolved>(&e.payload)) {
                r->damage_dealt += 1;
                break;
            }
        }
        try {
            replay_stream(log, 1.0);
            FAIL("expected malformed-log");
        } catch (const Error& e) {
            CHECK(e.code() == "malformed-log");
        }
        CHECK_THROWS_AS(replay_stream(run_session(GameConfig{}, builtin_profile("relentless"), {1, 1}), 0.0), Error);
    }

    TEST_CASE("profile for a log") {
        SessionLog log;
        log.header.profile_name = "middle_discerning";
        CHECK(profile_for_log(log) == builtin_profile("middle_discerning"));
        log.header.profile_name = "somebody";
        CHECK(profile_for_log(log).name == "human");
    }
}
