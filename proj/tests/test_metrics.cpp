#include <doctest.h>

#include <cmath>

#include "gf/error.hpp"
#include "gf/metrics.hpp"
#include "support.hpp"

using namespace gf;
using test::LogBuilder;

namespace {

AgentProfile aged(double age) {
    AgentProfile p;
    p.name = "p";
    p.age = age;
    return p;
}

// Brute-force restatement of the exertion model: every step rescans the log.
double brute_avg_hr_pct(const SessionLog& log, double age) {
    const ExertionModelParams d;
    const double max_hr = 211.0 - 0.64 * age;
    const std::int64_t end = log.events.empty() ? 0 : log.events.back().time_ms;
    const std::int64_t steps = end / 50;
    if (steps == 0) return d.rest_hr / max_hr * 100.0;
    const double a = 1.0 - std::exp(-0.05 / d.hr_time_constant);
    double hr = d.rest_hr, sum = 0.0;
    for (std::int64_t k = 1; k <= steps; ++k) {
        const std::int64_t t = k * 50;
        double e = 0.0;
        for (const auto& ev : log.events) {
            const auto* g = ev.as<ev::GestureSubmitted>();
            if (g && g->executed && ev.time_ms <= t && ev.time_ms > t - 30000) e += log.header.config.energy_cost(g->gesture);
        }
        const double frac = std::min(1.0, e / d.intensity_window * d.intensity_scale);
        hr += a * (d.rest_hr + frac * (max_hr - d.rest_hr) - hr);
        sum += hr;
    }
    return sum / static_cast<double>(steps) / max_hr * 100.0;
}

} // namespace

TEST_SUITE("metrics") {
    TEST_CASE("max heart rate formula") {
        CHECK(max_heart_rate(20) == doctest::Approx(198.2).epsilon(1e-12));
        CHECK(max_heart_rate(48) == doctest::Approx(180.28).epsilon(1e-12));
        CHECK(max_heart_rate(0.0001) == doctest::Approx(211.0).epsilon(1e-6));
        for (double bad : {0.0, -1.0}) {
            try {
                max_heart_rate(bad);
                FAIL("expected nonpositive-age");
            } catch (const Error& e) {
                CHECK(e.code() == "nonpositive-age");
            }
        }
    }

    TEST_CASE("kick success counts executed over submitted") {
        LogBuilder b;
        for (int i = 0; i < 10; ++i) b.gesture(100 + 3000 * i, Gesture::Kick, i < 8, i < 8);
        const auto m = compute_metrics(b.log, aged(30));
        CHECK(m.success_rate[index(Gesture::Kick)] == doctest::Approx(0.80));
        CHECK(m.gesture_count[index(Gesture::Kick)] == 10);
        CHECK_FALSE(m.success_rate[index(Gesture::Punch)].has_value());
        CHECK(m.total_energy == doctest::Approx(8.0));
    }

    TEST_CASE("shield success is blocked activations over activations") {
        LogBuilder b;
        for (int i = 0; i < 4; ++i) {
            b.gesture(3000 * i + 50, Gesture::ZoomSquat, true);
            b.add(3000 * i + 50, ev::ShieldActivated{});
            b.add(3000 * i + 2050, ev::ShieldExpired{i == 2});
        }
        const auto m = compute_metrics(b.log, aged(30));
        CHECK(m.success_rate[index(Gesture::ZoomSquat)] == doctest::Approx(0.25));
        CHECK(m.gesture_count[index(Gesture::ZoomSquat)] == 4);
    }

    TEST_CASE("empty log: zero counts, absent rates, resting heart rate") {
        LogBuilder b;
        const auto m = compute_metrics(b.log, aged(20));
        for (auto c : m.gesture_count) CHECK(c == 0);
        for (const auto& r : m.success_rate) CHECK_FALSE(r.has_value());
        for (const auto& t : m.completion_time_per_life) CHECK_FALSE(t.has_value());
        CHECK(m.calories_proxy == 0.0);
        CHECK(m.avg_hr_pct == doctest::Approx(70.0 / 198.2 * 100.0));
        CHECK_FALSE(m.winner.has_value());
    }

    TEST_CASE("calories are linear in executed energy") {
        LogBuilder a;
        a.gesture(50, Gesture::Punch, true).gesture(100, Gesture::ZoomKick, true).add(60000, ev::MonsterWalked{0});
        LogBuilder b = a;
        for (int i = 0; i < 10; ++i) b.gesture(60000, Gesture::Kick, true);
        const auto ca = simulate_exertion(a.log, aged(30)).calories_proxy;
        const auto cb = simulate_exertion(b.log, aged(30)).calories_proxy;
        CHECK(cb == doctest::Approx(ca + 10 * 1.0 * 0.5));
        CHECK(simulate_exertion(b.log, aged(30)).avg_hr_pct >= simulate_exertion(a.log, aged(30)).avg_hr_pct);
    }

    TEST_CASE("older players sit higher on their own heart-rate scale") {
        LogBuilder b;
        for (int i = 0; i < 30; ++i) b.gesture(1000 * i + 50, Gesture::Kick, true);
        b.add(120000, ev::MonsterWalked{0});
        CHECK(simulate_exertion(b.log, aged(48)).avg_hr_pct > simulate_exertion(b.log, aged(21)).avg_hr_pct);
    }

    TEST_CASE("exertion matches a brute-force rescan") {
        LogBuilder b;
        b.gesture(1000, Gesture::Kick, true).gesture(1000, Gesture::ZoomSquat, true).gesture(5000, Gesture::Punch, false);
        for (int i = 0; i < 40; ++i) b.gesture(20000 + 500 * i, Gesture::ZoomKick, true);
        b.add(90000, ev::MonsterWalked{0});
        CHECK(simulate_exertion(b.log, aged(33)).avg_hr_pct == doctest::Approx(brute_avg_hr_pct(b.log, 33)).epsilon(1e-12));

        const auto real = run_session(GameConfig{}, builtin_profile("young_gullible"), {4, 4});
        CHECK(simulate_exertion(real, aged(21)).avg_hr_pct == doctest::Approx(brute_avg_hr_pct(real, 21)).epsilon(1e-10));
    }

    TEST_CASE("completion time starts at gameplay entry, after training") {
        LogBuilder b(StartMode::WithTraining);
        b.gesture(500, Gesture::Kick, true);  // training, not counted
        b.add(40000, ev::PhaseChanged{TrainingPhase{TrainingStage::ZoomSquat, 2, true}, GameplayPhase{}});
        b.gesture(40050, Gesture::Kick, true);
        b.add(70000, ev::LifeLost{Actor::Monster});
        b.add(70000, ev::PhaseChanged{GameplayPhase{}, InterLifeWaitPhase{5000}});
        b.add(75000, ev::PhaseChanged{InterLifeWaitPhase{0}, GameplayPhase{}});
        b.add(75000, ev::LifeLost{Actor::Player});
        b.add(75000, ev::PhaseChanged{GameplayPhase{}, RevivePhase{0, false}});
        b.add(80000, ev::PhaseChanged{RevivePhase{5, true}, GameplayPhase{}});
        b.add(95000, ev::LifeLost{Actor::Monster});
        const auto m = compute_metrics(b.log, aged(30));
        CHECK(m.completion_time_per_life[0] == doctest::Approx(30.0));
        // A revive does not restart the monster's life clock.
        CHECK(m.completion_time_per_life[1] == doctest::Approx(20.0));
        CHECK_FALSE(m.completion_time_per_life[2].has_value());
        CHECK(m.gesture_count[index(Gesture::Kick)] == 1);
        CHECK(m.total_energy == doctest::Approx(2.0));
        CHECK(m.session_duration == doctest::Approx(95.0));
    }

    TEST_CASE("metrics agree between a log and its replay; energy is the brute sum") {
        const auto p = builtin_profile("middle_gullible");
        const auto log = run_session(GameConfig{}, p, {21, 22});
        const auto m = compute_metrics(log, p);
        CHECK(compute_metrics(replay_session(log), p) == m);
        double energy = 0.0;
        for (const auto& e : log.events) {
            if (const auto* g = e.as<ev::GestureSubmitted>(); g && g->executed) energy += log.header.config.energy_cost(g->gesture);
        }
        CHECK(m.total_energy == doctest::Approx(energy));
        double lives = 0;
        for (const auto& t : m.completion_time_per_life) lives += t.value_or(0.0);
        CHECK(lives <= m.session_duration);
        for (const auto& r : m.success_rate) {
            if (r) CHECK((*r >= 0.0 && *r <= 1.0));
        }
    }

    TEST_CASE("metrics json round trip and flat names") {
        const auto p = builtin_profile("young_gullible");
        const auto m = compute_metrics(run_session(GameConfig{}, p, {2, 2}), p);
        CHECK(metrics_from_json(to_json(m)) == m);
        const auto flat = flatten(m);
        REQUIRE(flat.size() == metric_names().size());
        CHECK(metric_names().front() == "completion_time_life1");
        CHECK(std::find(metric_names().begin(), metric_names().end(), "calories_proxy_au") != metric_names().end());
    }

    TEST_CASE("monster life lost with no life in progress is malformed") {
        LogBuilder b(StartMode::WithTraining);
        b.add(1000, ev::LifeLost{Actor::Monster});
        CHECK_THROWS_AS(compute_metrics(b.log, aged(30)), Error);
    }
}
