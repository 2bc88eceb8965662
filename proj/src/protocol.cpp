#include "gf/protocol.hpp"

#include <cmath>

#include "gf/error.hpp"

namespace gf {

namespace {

constexpr std::array<MoveId, 4> kPlayerMoves{MoveId::Kick, MoveId::Punch, MoveId::ZoomKick, MoveId::ZoomSquat};

double seconds(std::int64_t ms) { return static_cast<double>(ms) / 1000.0; }
std::int64_t millis(const Json& j) { return std::llround(j.get<double>() * 1000.0); }

template <class> inline constexpr bool kAlwaysFalse = false;

} // namespace

std::string_view type_name(const ProtocolMessage& m) noexcept {
    static constexpr std::array<std::string_view, std::variant_size_v<ProtocolMessage>> names{
        "hello", "start", "gesture", "pause", "resume", "welcome", "snapshot", "event", "ended", "error"};
    return names[m.index()];
}

bool is_client_message(const ProtocolMessage& m) noexcept { return m.index() <= 4; }

std::string encode(const ProtocolMessage& m) {
    Json j;
    j["type"] = type_name(m);
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, msg::Hello>) {
                j["client_version"] = v.client_version;
            } else if constexpr (std::is_same_v<T, msg::Start>) {
                j["condition"] = to_string(v.condition);
                j["with_training"] = v.with_training;
                j["seed"] = v.seed ? Json(*v.seed) : Json(nullptr);
            } else if constexpr (std::is_same_v<T, msg::Gesture>) {
                j["gesture"] = to_string(v.gesture);
                j["direction"] = to_string(v.direction);
            } else if constexpr (std::is_same_v<T, msg::Pause> || std::is_same_v<T, msg::Resume>) {
            } else if constexpr (std::is_same_v<T, msg::Welcome>) {
                j["schema_version"] = v.schema_version;
                j["config"] = to_json(v.config);
            } else if constexpr (std::is_same_v<T, msg::Snapshot>) {
                j["time"] = seconds(v.time_ms);
                j["phase"] = to_json(v.phase);
                Json cds = Json::object();
                for (MoveId mv : kPlayerMoves) cds[std::string(to_string(mv))] = seconds(v.player.cooldown_ms[index(mv)]);
                j["player"] = {{"hp", v.player.hp}, {"lives", v.player.lives}, {"cooldowns", std::move(cds)}};
                j["monster"] = {{"hp", v.monster.hp},
                                {"lives", v.monster.lives},
                                {"position", seconds(v.monster.position_mm)},
                                {"attack_in_progress", v.monster.attack_in_progress},
                                {"attack_elapsed", seconds(v.monster.attack_elapsed_ms)}};
                j["shield"] = {{"active", v.shield.active}, {"remaining", seconds(v.shield.remaining_ms)}};
            } else if constexpr (std::is_same_v<T, msg::Event>) {
                j["event"] = to_json(v.event);
            } else if constexpr (std::is_same_v<T, msg::Ended>) {
                j["winner"] = v.winner ? Json(to_string(*v.winner)) : Json(nullptr);
                j["metrics"] = to_json(v.metrics);
            } else if constexpr (std::is_same_v<T, msg::ProtocolError>) {
                j["code"] = v.code;
                j["message"] = v.message;
            } else {
                static_assert(kAlwaysFalse<T>);
            }
        },
        m);
    return j.dump();
}

ProtocolMessage decode(std::string_view frame) {
    Json j;
    try {
        j = Json::parse(frame);
    } catch (const nlohmann::json::exception& e) {
        throw Error("bad-message", std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error("bad-message", "frame must be a JSON object");
    const auto it = j.find("type");
    if (it == j.end() || !it->is_string()) throw Error("bad-message", "missing string field 'type'");
    const std::string type = it->get<std::string>();

    try {
        if (type == "hello") return msg::Hello{j.value("client_version", std::string{})};
        if (type == "start") {
            msg::Start s;
            s.condition = parse_condition(j.at("condition").get<std::string>());
            s.with_training = j.value("with_training", false);
            if (auto sd = j.find("seed"); sd != j.end() && !sd->is_null()) s.seed = sd->get<std::uint64_t>();
            return s;
        }
        if (type == "gesture") {
            msg::Gesture g;
            g.gesture = parse_gesture(j.at("gesture").get<std::string>());
            if (auto d = j.find("direction"); d != j.end()) g.direction = parse_direction(d->get<std::string>());
            return g;
        }
        if (type == "pause") return msg::Pause{};
        if (type == "resume") return msg::Resume{};
        if (type == "welcome") return msg::Welcome{j.at("schema_version").get<std::string>(), config_from_json(j.at("config"))};
        if (type == "snapshot") {
            msg::Snapshot s;
            s.time_ms = millis(j.at("time"));
            s.phase = phase_from_json(j.at("phase"));
            const auto& p = j.at("player");
            s.player.hp = p.at("hp").get<int>();
            s.player.lives = p.at("lives").get<int>();
            for (const auto& [k, v] : p.at("cooldowns").items()) s.player.cooldown_ms[index(parse_move(k))] = millis(v);
            const auto& mo = j.at("monster");
            s.monster.hp = mo.at("hp").get<int>();
            s.monster.lives = mo.at("lives").get<int>();
            s.monster.position_mm = millis(mo.at("position"));
            s.monster.attack_in_progress = mo.at("attack_in_progress").get<bool>();
            s.monster.attack_elapsed_ms = millis(mo.at("attack_elapsed"));
            const auto& sh = j.at("shield");
            s.shield.active = sh.at("active").get<bool>();
            s.shield.remaining_ms = millis(sh.at("remaining"));
            return s;
        }
        if (type == "event") return msg::Event{event_from_json(j.at("event"))};
        if (type == "ended") {
            msg::Ended e;
            if (const auto& w = j.at("winner"); !w.is_null()) e.winner = parse_actor(w.get<std::string>());
            e.metrics = metrics_from_json(j.at("metrics"));
            return e;
        }
        if (type == "error") return msg::ProtocolError{j.at("code").get<std::string>(), j.at("message").get<std::string>()};
    } catch (const nlohmann::json::exception& e) {
        throw Error("bad-message", "'" + type + "' message: " + e.what());
    } catch (const Error& e) {
        throw Error("bad-message", "'" + type + "' message: " + e.detail());
    }
    throw Error("unknown-type", "unknown message type '" + type + "'");
}

msg::Snapshot make_snapshot(const GameState& state) {
    msg::Snapshot s;
    s.time_ms = state.time_ms;
    s.phase = state.phase;
    s.player.hp = state.player.hp;
    s.player.lives = state.player.lives_remaining;
    for (MoveId mv : kPlayerMoves) s.player.cooldown_ms[index(mv)] = state.player.cooldown_ms[index(mv)];
    s.monster.hp = state.monster.hp;
    s.monster.lives = state.monster.lives_remaining;
    s.monster.position_mm = state.monster.position_mm;
    if (state.monster.pending_attack) {
        s.monster.attack_in_progress = true;
        s.monster.attack_elapsed_ms = state.monster.pending_attack->elapsed_ms;
    }
    s.shield.active = state.shield.active;
    s.shield.remaining_ms = state.shield.remaining_ms;
    return s;
}

} // namespace gf
