// gf: command-line entry point (simulate, experiment, validate, serve, replay).

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include "gf/error.hpp"
#include "gf/experiment.hpp"
#include "gf/live_session.hpp"
#include "gf/server.hpp"
#include "gf/validation.hpp"

namespace {

using gf::Json;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

bool g_quiet = false;
std::atomic<bool> g_interrupted{false};

void info(const std::string& line) {
    if (!g_quiet) std::cerr << line << '\n';
}

void summary(const Json& j) { std::cout << j.dump() << std::endl; }

bool is_usage_error(const std::string& code) {
    static const std::vector<std::string> usage{"unknown-profile", "invalid-profile",   "invalid-config", "insufficient-samples",
                                                "bad-value",       "invalid-argument", "nonpositive-age"};
    return std::find(usage.begin(), usage.end(), code) != usage.end();
}

Json read_json_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw gf::Error("io-failure", "cannot open '" + path + "'");
    try {
        return Json::parse(f);
    } catch (const nlohmann::json::exception& e) {
        throw gf::Error("invalid-config", "'" + path + "' is not valid JSON: " + e.what());
    }
}

gf::GameConfig load_config(const std::string& path) {
    gf::GameConfig cfg;
    if (!path.empty()) cfg = gf::apply_overrides(cfg, read_json_file(path));
    gf::validate(cfg);
    return cfg;
}

Json flat_metrics(const gf::Metrics& m) {
    Json j = Json::object();
    for (const auto& [name, v] : gf::flatten(m)) j[name] = v ? Json(*v) : Json(nullptr);
    return j;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

struct SimulateArgs {
    std::string condition = "uncertain";
    std::string profile = "young_gullible";
    std::string profile_file;
    std::uint64_t seed = 1;
    std::optional<std::uint64_t> agent_seed;
    bool with_training = false;
    double time_cap = 1800.0;
    std::string out;
    std::string config;
};

int run_simulate(const SimulateArgs& a) {
    gf::GameConfig cfg = load_config(a.config);
    cfg.condition = gf::parse_condition(a.condition);
    gf::AgentProfile profile = gf::builtin_profile(a.profile);
    if (!a.profile_file.empty()) profile = gf::profile_from_json(read_json_file(a.profile_file), profile);
    gf::SessionOptions opts;
    opts.start = a.with_training ? gf::StartMode::WithTraining : gf::StartMode::GameplayOnly;
    opts.time_cap = a.time_cap;

    const auto log = gf::run_session(cfg, profile, {a.seed, a.agent_seed.value_or(a.seed)}, opts);
    if (!a.out.empty()) gf::write_log(log, a.out);
    const auto m = gf::compute_metrics(log, profile);
    info("simulated " + std::to_string(log.events.size()) + " events over " + std::to_string(m.session_duration) + " s");
    Json s;
    s["command"] = "simulate";
    s["status"] = "ok";
    s["seed"] = a.seed;
    s["condition"] = a.condition;
    s["profile"] = profile.name;
    s["winner"] = m.winner ? Json(gf::to_string(*m.winner)) : Json(nullptr);
    s["time_cap_exceeded"] = log.time_cap_exceeded;
    s["metrics"] = flat_metrics(m);
    if (!a.out.empty()) s["out"] = a.out;
    summary(s);
    return kExitOk;
}

struct ExperimentArgs {
    std::string matrix;
    std::optional<std::size_t> n;
    std::uint64_t seed = 1;
    std::string profiles = "young_gullible";
    std::string conditions = "certain,uncertain";
    std::string out;
    std::string format;
    unsigned jobs = 0;
    std::size_t resamples = 10000;
    double level = 0.95;
    bool with_training = false;
    double time_cap = 1800.0;
    std::string config;
};

int run_experiment_cmd(const ExperimentArgs& a) {
    const gf::GameConfig base = load_config(a.config);
    gf::ExperimentMatrix mx;
    if (!a.matrix.empty()) {
        mx = gf::matrix_from_json(read_json_file(a.matrix), base);
        if (a.n) mx.seeds = gf::seeds_from_master(a.seed, *a.n);
    } else {
        mx.base_config = base;
        mx.conditions.clear();
        for (const auto& c : split_list(a.conditions)) mx.conditions.push_back(gf::parse_condition(c));
        for (const auto& p : split_list(a.profiles)) mx.profiles.push_back(gf::builtin_profile(p));
        mx.seeds = gf::seeds_from_master(a.seed, a.n.value_or(200));
        mx.session.start = a.with_training ? gf::StartMode::WithTraining : gf::StartMode::GameplayOnly;
        mx.session.time_cap = a.time_cap;
        mx.resamples = a.resamples;
        mx.level = a.level;
    }
    mx.bootstrap_seed = a.seed;
    if (mx.seeds.size() < 2) {
        throw gf::Error("insufficient-samples", "--n must be at least 2, got " + std::to_string(mx.seeds.size()));
    }

    std::string format = a.format;
    if (format.empty()) format = a.out.size() >= 6 && a.out.ends_with(".jsonl") ? "jsonl" : "csv";
    const auto fmt = gf::parse_table_format(format);
    const unsigned jobs = a.jobs ? a.jobs : std::max(1u, std::thread::hardware_concurrency());

    const auto t0 = std::chrono::steady_clock::now();
    const auto table = gf::run_experiment(mx, jobs);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    gf::export_table(table, fmt, a.out);
    const std::size_t sessions = mx.conditions.size() * mx.profiles.size() * mx.seeds.size();
    info("ran " + std::to_string(sessions) + " sessions in " + std::to_string(secs) + " s");

    Json s;
    s["command"] = "experiment";
    s["status"] = "ok";
    s["sessions"] = sessions;
    s["rows"] = table.rows.size();
    s["format"] = format;
    s["out"] = a.out;
    Json diffs = Json::object();
    for (const auto& r : table.rows) {
        if (r.kind != gf::RowKind::Difference || r.metric != "gesture_count_zoom_squat") continue;
        diffs[r.profile] = {{"mean", r.mean}, {"ci_low", r.ci->low}, {"ci_high", r.ci->high}};
    }
    if (!diffs.empty()) s["zoom_squat_count_difference"] = diffs;
    summary(s);
    return kExitOk;
}

int run_validate(std::size_t draws, std::uint64_t seed, const std::string& config) {
    const gf::GameConfig cfg = load_config(config);
    if (draws < 10000) {
        std::cerr << "warning: " << draws << " draws is below 10^4; the 0.01 tolerance is not guaranteed\n";
    }
    const auto checks = gf::probability_checks(cfg, draws, seed);
    bool all = true;
    Json arr = Json::array();
    for (const auto& c : checks) {
        all = all && c.pass;
        info((c.pass ? "pass " : "FAIL ") + c.name + " expected=" + std::to_string(c.expected) +
             " observed=" + std::to_string(c.observed));
        arr.push_back({{"name", c.name}, {"expected", c.expected}, {"observed", c.observed}, {"pass", c.pass}});
    }
    summary({{"command", "validate"}, {"status", all ? "pass" : "fail"}, {"draws", draws}, {"seed", seed}, {"checks", arr}});
    return all ? kExitOk : kExitRuntime;
}

int run_serve(const std::string& address, std::uint16_t port, double time_scale, const std::string& out_dir,
              const std::string& config) {
    gf::ServerOptions opts;
    opts.address = address;
    opts.port = port;
    opts.defaults = load_config(config);
    opts.time_scale = time_scale;
    if (!out_dir.empty()) {
        opts.on_session_end = [out_dir](const gf::SessionLog& log) {
            const auto path = std::filesystem::path(out_dir) / ("session-" + std::to_string(log.header.seed) + ".jsonl");
            try {
                gf::write_log(log, path);
            } catch (const gf::Error& e) {
                std::cerr << "error: " << e.what() << '\n';
            }
        };
    }
    auto server = gf::serve(std::move(opts));
    summary({{"command", "serve"}, {"status", "listening"}, {"address", address}, {"port", server->port()}});
    std::signal(SIGINT, [](int) { g_interrupted = true; });
    std::signal(SIGTERM, [](int) { g_interrupted = true; });
    while (!g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server->stop();
    info("stopped");
    return kExitOk;
}

int run_replay(const std::string& log_path, double speed, const std::string& out) {
    const auto log = gf::read_log(log_path);
    const auto stream = gf::replay_stream(log, speed);
    std::ofstream file;
    if (!out.empty()) {
        file.open(out, std::ios::binary | std::ios::trunc);
        if (!file) throw gf::Error("io-failure", "cannot open '" + out + "' for writing");
    }
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& tm : stream) {
        if (std::isfinite(speed)) std::this_thread::sleep_until(t0 + std::chrono::duration<double>(tm.at));
        const std::string frame = gf::encode(tm.message);
        if (file.is_open()) file << frame << '\n';
        else if (!g_quiet) std::cerr << frame << '\n';
    }
    if (file.is_open() && !file) throw gf::Error("io-failure", "write failed for '" + out + "'");
    const auto& ended = std::get<gf::msg::Ended>(stream.back().message);
    summary({{"command", "replay"},
             {"status", "ok"},
             {"messages", stream.size()},
             {"winner", ended.winner ? Json(gf::to_string(*ended.winner)) : Json(nullptr)},
             {"metrics", flat_metrics(ended.metrics)}});
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gf: exergame combat simulator, experiment harness and live session service"};
    app.require_subcommand(1);
    app.add_flag("-q,--quiet", g_quiet, "Only print the JSON summary line");
    app.fallthrough();

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Run one seeded agent session");
    simulate->add_option("--condition", sim.condition, "certain | uncertain")->check(CLI::IsMember({"certain", "uncertain"}));
    simulate->add_option("--profile", sim.profile, "Built-in agent profile");
    simulate->add_option("--profile-file", sim.profile_file, "JSON overrides applied on top of --profile");
    simulate->add_option("--seed", sim.seed, "Engine seed");
    simulate->add_option("--agent-seed", sim.agent_seed, "Agent seed (defaults to --seed)");
    simulate->add_flag("--with-training", sim.with_training, "Start with the training phase");
    simulate->add_option("--time-cap", sim.time_cap, "Simulated seconds before giving up");
    simulate->add_option("--out", sim.out, "Event log path (NDJSON)");
    simulate->add_option("--config", sim.config, "Game config JSON overriding defaults field by field");

    ExperimentArgs exp;
    auto* experiment = app.add_subcommand("experiment", "Run a condition x profile x seed matrix");
    experiment->add_option("--matrix", exp.matrix, "Matrix JSON file");
    experiment->add_option("--n", exp.n, "Seeds per cell");
    experiment->add_option("--seed", exp.seed, "Master seed for seeds and bootstrap");
    experiment->add_option("--profiles", exp.profiles, "Comma-separated built-in profiles");
    experiment->add_option("--conditions", exp.conditions, "Comma-separated conditions");
    experiment->add_option("--out", exp.out, "Summary table path")->required();
    experiment->add_option("--format", exp.format, "csv | jsonl (default from --out extension)")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    experiment->add_option("--jobs", exp.jobs, "Parallel sessions (default: hardware threads)");
    experiment->add_option("--resamples", exp.resamples, "Bootstrap resamples");
    experiment->add_option("--level", exp.level, "CI level");
    experiment->add_flag("--with-training", exp.with_training, "Start sessions with the training phase");
    experiment->add_option("--time-cap", exp.time_cap, "Simulated seconds per session cap");
    experiment->add_option("--config", exp.config, "Game config JSON overriding defaults field by field");

    std::size_t draws = 100000;
    std::uint64_t vseed = 1;
    std::string vconfig;
    auto* validate = app.add_subcommand("validate", "Monte Carlo check of monster policy and miss/crit rates");
    validate->add_option("--draws", draws, "Draws per check");
    validate->add_option("--seed", vseed, "Seed");
    validate->add_option("--config", vconfig, "Game config JSON to test");

    std::string address = "127.0.0.1";
    std::uint16_t port = 7777;
    double time_scale = 1.0;
    std::string serve_out;
    std::string sconfig;
    auto* serve = app.add_subcommand("serve", "Serve live sessions over WebSocket");
    serve->add_option("--address", address, "Bind address");
    serve->add_option("--port", port, "Port (0 picks a free one)");
    serve->add_option("--time-scale", time_scale, "Simulated seconds per wall second");
    serve->add_option("--out", serve_out, "Directory for finished session logs");
    serve->add_option("--config", sconfig, "Game config JSON overriding defaults field by field");

    std::string log_path;
    double speed = std::numeric_limits<double>::infinity();
    std::string replay_out;
    auto* replay = app.add_subcommand("replay", "Re-stream a session log as protocol messages");
    replay->add_option("log", log_path, "Session log (NDJSON)")->required();
    replay->add_option("--speed", speed, "Playback speed multiplier (default: batch)");
    replay->add_option("--out", replay_out, "Write frames here instead of stderr");

    std::string command = "gf";
    try {
        app.parse(argc, argv);
        command = app.get_subcommands().front()->get_name();
        if (*simulate) return run_simulate(sim);
        if (*experiment) return run_experiment_cmd(exp);
        if (*validate) return run_validate(draws, vseed, vconfig);
        if (*serve) return run_serve(address, port, time_scale, serve_out, sconfig);
        return run_replay(log_path, speed, replay_out);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        summary({{"command", command}, {"status", "error"}, {"code", "usage"}, {"message", e.what()}});
        return kExitUsage;
    } catch (const gf::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        summary({{"command", command}, {"status", "error"}, {"code", e.code()}, {"message", e.detail()}});
        return is_usage_error(e.code()) ? kExitUsage : kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        summary({{"command", command}, {"status", "error"}, {"code", "internal"}, {"message", e.what()}});
        return kExitRuntime;
    }
}
