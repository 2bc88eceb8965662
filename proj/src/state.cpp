#include "gf/state.hpp"

#include <cmath>
#include <string>

#include "gf/error.hpp"

namespace gf {

namespace {
constexpr std::array<std::string_view, 4> kStageNames{"kick", "punch", "zoom_kick", "zoom_squat"};
}

std::string_view to_string(TrainingStage s) noexcept { return kStageNames[static_cast<std::size_t>(s)]; }

TrainingStage parse_training_stage(std::string_view s) {
    for (std::size_t i = 0; i < kStageNames.size(); ++i) {
        if (kStageNames[i] == s) return static_cast<TrainingStage>(i);
    }
    throw Error("bad-value", "unknown training stage '" + std::string(s) + "'");
}

std::string_view phase_name(const GamePhase& p) noexcept {
    constexpr std::array<std::string_view, 5> names{"training", "gameplay", "revive", "inter_life_wait", "terminal"};
    return names[p.index()];
}

Json to_json(const GamePhase& p) {
    Json j;
    j["name"] = phase_name(p);
    std::visit(
        [&j](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, TrainingPhase>) {
                j["stage"] = to_string(v.stage);
                j["progress"] = v.progress;
                j["awaiting_zoom"] = v.awaiting_zoom;
            } else if constexpr (std::is_same_v<T, RevivePhase>) {
                j["defenses_done"] = v.defenses_done;
                j["awaiting_zoom"] = v.awaiting_zoom;
            } else if constexpr (std::is_same_v<T, InterLifeWaitPhase>) {
                j["remaining"] = static_cast<double>(v.remaining_ms) / 1000.0;
            } else if constexpr (std::is_same_v<T, TerminalPhase>) {
                j["winner"] = to_string(v.winner);
            }
        },
        p);
    return j;
}

GamePhase phase_from_json(const Json& j) {
    const auto name = j.at("name").get<std::string>();
    if (name == "training") {
        return TrainingPhase{parse_training_stage(j.at("stage").get<std::string>()), j.at("progress").get<int>(),
                             j.at("awaiting_zoom").get<bool>()};
    }
    if (name == "gameplay") return GameplayPhase{};
    if (name == "revive") return RevivePhase{j.at("defenses_done").get<int>(), j.at("awaiting_zoom").get<bool>()};
    if (name == "inter_life_wait") return InterLifeWaitPhase{std::llround(j.at("remaining").get<double>() * 1000.0)};
    if (name == "terminal") return TerminalPhase{parse_actor(j.at("winner").get<std::string>())};
    throw Error("bad-value", "unknown phase '" + name + "'");
}

} // namespace gf
