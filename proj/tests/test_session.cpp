#include <doctest.h>

#include <fstream>

#include "gf/error.hpp"
#include "gf/metrics.hpp"
#include "gf/session.hpp"
#include "support.hpp"

using namespace gf;

namespace {

GameConfig with_condition(Condition c) {
    GameConfig g;
    g.condition = c;
    return g;
}

std::string code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

} // namespace

TEST_SUITE("session") {
    TEST_CASE("same seeds give the same log") {
        const auto p = builtin_profile("young_gullible");
        const auto a = run_session(with_condition(Condition::Uncertain), p, {7, 7});
        const auto b = run_session(with_condition(Condition::Uncertain), p, {7, 7});
        CHECK(a == b);
        CHECK(to_ndjson(a) == to_ndjson(b));
        const auto c = run_session(with_condition(Condition::Uncertain), p, {8, 7});
        CHECK(to_ndjson(a) != to_ndjson(c));
    }

    TEST_CASE("relentless wins the certain game without any uncertainty events") {
        const auto log = run_session(with_condition(Condition::Certain), builtin_profile("relentless"), {1, 1});
        REQUIRE_FALSE(log.time_cap_exceeded);
        CHECK(log.events.back().as<ev::SessionEnded>()->winner == Actor::Player);
        for (const auto& e : log.events) {
            if (const auto* l = e.as<ev::AttackLaunched>()) CHECK_FALSE(l->is_false);
            if (const auto* r = e.as<ev::AttackResolved>()) {
                CHECK_FALSE(r->missed);
                CHECK_FALSE(r->crit);
            }
        }
    }

    TEST_CASE("no-defense relentless against a 50 hp monster matches the damage-rate oracle") {
        GameConfig c = with_condition(Condition::Certain);
        c.monster_max_hp = 50;
        auto p = builtin_profile("relentless");
        p.defense_policy = {DefenseKind::NoDefense, 0.0};

        // One gesture per tick in priority order: 30 + 10 + 10 takes a 50 hp life
        // in k ticks. Each later life starts after the inter-life wait; all
        // cooldowns (<= 5 s) have expired by then, and the monster's first
        // action comes a full period after each life starts, so it never lands.
        const std::array<int, 3> dmg{30, 10, 10};
        int hp = c.monster_max_hp, k = 0;
        while (hp > 0) hp -= dmg[static_cast<std::size_t>(k++ % 3)];
        const std::int64_t tick = 50, wait = 5000;
        REQUIRE(k * tick < 2000);
        const std::int64_t end_ms = c.lives_each * k * tick + (c.lives_each - 1) * wait;

        const auto log = run_session(c, p, {1, 1});
        REQUIRE_FALSE(log.time_cap_exceeded);
        CHECK(log.events.back().as<ev::SessionEnded>()->winner == Actor::Player);
        CHECK(log.events.back().time_ms == end_ms);
        const auto m = compute_metrics(log, p);
        for (const auto& t : m.completion_time_per_life) CHECK(t == doctest::Approx(k * tick / 1000.0));
        CHECK(test::count_events<ev::LifeLost>(log) == 3);
    }

    TEST_CASE("ndjson round trip, files, and errors") {
        const auto p = builtin_profile("middle_discerning");
        const auto log = run_session(with_condition(Condition::Uncertain), p, {3, 4});
        const auto back = parse_ndjson(to_ndjson(log));
        CHECK(back == log);

        const auto dir = test::temp_dir();
        write_log(log, dir / "s.jsonl");
        CHECK(read_log(dir / "s.jsonl") == log);

        try {
            read_log(dir / "missing" / "x.jsonl");
            FAIL("expected io-failure");
        } catch (const Error& e) {
            CHECK(e.code() == "io-failure");
            CHECK(e.detail().find("missing") != std::string::npos);
        }
        CHECK(code_of([&] { write_log(log, dir / "missing" / "x.jsonl"); }) == "io-failure");
        CHECK(code_of([] { parse_ndjson("{\"schema_version\":\"gf/1\"}\n"); }) == "malformed-log");
        CHECK(code_of([] { parse_ndjson("not json\n"); }) == "malformed-log");
        CHECK(code_of([] { parse_ndjson(""); }) == "malformed-log");

        auto text = to_ndjson(log);
        text += "{\"seq\":1,\"time\":0.0,\"kind\":\"heal_applied\",\"amount\":1}\n";
        CHECK(code_of([&] { parse_ndjson(text); }) == "malformed-log");
    }

    TEST_CASE("replay regenerates the log exactly") {
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            for (StartMode start : {StartMode::GameplayOnly, StartMode::WithTraining}) {
                SessionOptions o;
                o.start = start;
                const auto log = run_session(with_condition(Condition::Uncertain), builtin_profile("young_gullible"), {seed, seed + 10}, o);
                const auto again = replay_session(log);
                CHECK(again.events == log.events);
                CHECK(to_ndjson(again) == to_ndjson(log));
            }
        }
    }

    TEST_CASE("time cap returns a flagged log") {
        SessionOptions o;
        o.time_cap = 10.0;
        const auto log = run_session(with_condition(Condition::Uncertain), builtin_profile("middle_gullible"), {1, 1}, o);
        CHECK(log.time_cap_exceeded);
        CHECK(log.events.back().time_ms <= 10000);
        CHECK(parse_ndjson(to_ndjson(log)).time_cap_exceeded);
    }

    TEST_CASE("training sessions pass every invariant") {
        SessionOptions o;
        o.start = StartMode::WithTraining;
        for (const auto& name : builtin_profile_names()) {
            const auto r = test::run_checked(with_condition(Condition::Uncertain), builtin_profile(name), {5, 5}, o);
            CAPTURE(name);
            CHECK(r.violations.empty());
            if (!r.violations.empty()) MESSAGE(r.violations.front());
            CHECK_FALSE(r.log.time_cap_exceeded);
        }
    }
}
