#include "gf/engine.hpp"

#include <algorithm>
#include <cmath>

#include "gf/error.hpp"

namespace gf {

namespace {

class Sim {
public:
    Sim(GameState& s, std::vector<GameEvent>& out) : s_(s), out_(out), cfg_(s.config) {}

    std::size_t emit(EventPayload p) {
        out_.push_back(GameEvent{++s_.event_seq, s_.time_ms, std::move(p)});
        return out_.size() - 1;
    }

    void set_phase(GamePhase to) {
        if (to == s_.phase) return;
        emit(ev::PhaseChanged{s_.phase, to});
        s_.phase = std::move(to);
    }

    bool training() const { return std::holds_alternative<TrainingPhase>(s_.phase); }

    bool monster_acts() const {
        if (std::holds_alternative<GameplayPhase>(s_.phase)) return true;
        const auto* t = std::get_if<TrainingPhase>(&s_.phase);
        return t != nullptr && t->stage == TrainingStage::ZoomSquat;
    }

    void tick(std::span<const GestureInput> inputs) {
        const std::int64_t dt = cfg_.tick_ms();
        ++s_.ticks;
        s_.time_ms += dt;

        for (auto& c : s_.player.cooldown_ms) c = std::max<std::int64_t>(0, c - dt);
        for (auto& c : s_.monster.cooldown_ms) c = std::max<std::int64_t>(0, c - dt);

        step_walk();
        step_pending_attack(dt);
        if (s_.terminal()) return;

        if (s_.shield.active) {
            s_.shield.remaining_ms -= dt;
            if (s_.shield.remaining_ms <= 0) close_shield();
        }

        if (monster_acts()) {
            s_.monster_action_clock_ms -= dt;
            if (s_.monster_action_clock_ms <= 0) {
                s_.monster_action_clock_ms = cfg_.to_ms(cfg_.monster_action_period);
                monster_act();
            }
        }

        if (auto* wait = std::get_if<InterLifeWaitPhase>(&s_.phase)) {
            wait->remaining_ms -= dt;
            if (wait->remaining_ms <= 0) {
                auto& m = s_.monster;
                m.hp = cfg_.monster_max_hp;
                m.position_mm = 0;
                m.walk_target_mm.reset();
                m.pending_attack.reset();
                enter_gameplay();
            }
        }

        for (const auto& in : inputs) {
            if (s_.terminal()) break;
            submit(in);
        }
    }

    void submit(const GestureInput& in) {
        const std::size_t idx = emit(ev::GestureSubmitted{in.gesture, in.direction, in.recognized, false});
        auto mark_executed = [&] { std::get<ev::GestureSubmitted>(out_[idx].payload).executed = true; };
        if (!in.recognized) return;

        const auto move = move_for(in.gesture);
        if (std::holds_alternative<GameplayPhase>(s_.phase)) {
            if (!move || s_.player.cooldown(*move) > 0) return;
            mark_executed();
            execute_move(*move, in.direction);
        } else if (auto* t = std::get_if<TrainingPhase>(&s_.phase)) {
            if (in.gesture == Gesture::Zoom) {
                if (!t->awaiting_zoom) return;
                mark_executed();
                apply_training(out_[idx]);
                return;
            }
            if (*move != trained_move(t->stage) || s_.player.cooldown(*move) > 0) return;
            mark_executed();
            execute_move(*move, in.direction);
        } else if (auto* r = std::get_if<RevivePhase>(&s_.phase)) {
            if (in.gesture == Gesture::ZoomSquat && !r->awaiting_zoom) {
                mark_executed();
                RevivePhase next = *r;
                ++next.defenses_done;
                next.awaiting_zoom = next.defenses_done >= cfg_.revive_defense_count;
                set_phase(next);
            } else if (in.gesture == Gesture::Zoom && r->awaiting_zoom) {
                mark_executed();
                s_.player.hp = cfg_.player_max_hp;
                enter_gameplay();
            }
        }
    }

    void resolve(Actor actor, MoveId move, AttackModifiers mods, Direction dir) {
        ev::AttackResolved r{actor, move, mods.missed, false, 0, false};
        if (mods.missed) {
            emit(r);
            return;
        }
        if (actor == Actor::Monster) {
            if (s_.shield.active) {
                r.blocked = true;
                const std::size_t idx = emit(r);
                s_.shield.blocked_this_activation = true;
                const int heal = std::min(cfg_.shield_heal, cfg_.player_max_hp - s_.player.hp);
                s_.player.hp += heal;
                emit(ev::HealApplied{heal});
                if (training()) apply_training(out_[idx]);
                return;
            }
            r.crit = mods.crit;
            r.damage_dealt = attack_damage(cfg_, move, mods.crit);
            emit(r);
            take_damage(Actor::Player, r.damage_dealt);
            return;
        }

        const bool reaches = cfg_.move(move).kind != MoveKind::MeleeAttack || melee_reaches(cfg_, dir, s_.monster.position_mm);
        if (reaches) {
            r.crit = mods.crit;
            r.damage_dealt = attack_damage(cfg_, move, mods.crit);
        }
        const std::size_t idx = emit(r);
        if (training()) apply_training(out_[idx]);
        if (r.damage_dealt > 0) take_damage(Actor::Monster, r.damage_dealt);
    }

    void close_shield() {
        const bool blocked = s_.shield.blocked_this_activation;
        s_.shield = ShieldState{};
        emit(ev::ShieldExpired{blocked});
    }

private:
    void step_walk() {
        auto& m = s_.monster;
        if (!m.walk_target_mm) return;
        const std::int64_t step = std::max<std::int64_t>(1, std::llround(cfg_.monster_walk_speed * static_cast<double>(cfg_.tick_ms())));
        const std::int64_t delta = *m.walk_target_mm - m.position_mm;
        if (std::abs(delta) <= step) {
            m.position_mm = *m.walk_target_mm;
            m.walk_target_mm.reset();
        } else {
            m.position_mm += delta > 0 ? step : -step;
        }
    }

    void step_pending_attack(std::int64_t dt) {
        auto& pending = s_.monster.pending_attack;
        if (!pending) return;
        pending->elapsed_ms += dt;
        if (pending->is_false) {
            if (pending->elapsed_ms >= cfg_.to_ms(cfg_.false_attack_duration)) pending.reset();
            return;
        }
        if (pending->elapsed_ms >= cfg_.to_ms(cfg_.real_attack_windup)) {
            const MoveId move = pending->move;
            pending.reset();
            const Condition cond = training() ? Condition::Certain : cfg_.condition;
            resolve(Actor::Monster, move, roll_attack_modifiers(cond, cfg_, s_.engine_rng), Direction::Neutral);
        }
    }

    void monster_act() {
        const Condition cond = training() ? Condition::Certain : cfg_.condition;
        const MonsterAction a = monster_decide(available_monster_moves(s_), cond, cfg_, s_.monster.position_mm, s_.engine_rng);
        auto& m = s_.monster;
        if (a.kind == MonsterAction::Kind::Walk) {
            const std::int64_t target = m.position_mm + a.walk_delta_mm;
            if (target == m.position_mm) {
                m.walk_target_mm.reset();
            } else {
                m.walk_target_mm = target;
            }
            emit(ev::MonsterWalked{target});
            return;
        }
        const bool is_false = a.kind == MonsterAction::Kind::FalseAttack;
        m.pending_attack = PendingAttack{a.move, 0, is_false};
        m.cooldown_ms[index(a.move)] = cfg_.to_ms(cfg_.move(a.move).cooldown);
        emit(ev::AttackLaunched{Actor::Monster, a.move, is_false});
    }

    void execute_move(MoveId move, Direction dir) {
        s_.player.cooldown_ms[index(move)] = cfg_.to_ms(cfg_.move(move).cooldown);
        if (cfg_.move(move).kind == MoveKind::Defense) {
            s_.shield = ShieldState{true, cfg_.to_ms(cfg_.shield_duration), false};
            emit(ev::ShieldActivated{});
            return;
        }
        emit(ev::AttackLaunched{Actor::Player, move, false});
        const Condition cond = cfg_.condition;
        resolve(Actor::Player, move, roll_attack_modifiers(cond, cfg_, s_.engine_rng), dir);
    }

    void take_damage(Actor target, int damage) {
        CombatantState& c = target == Actor::Player ? s_.player : s_.monster;
        // Nobody dies during the warm-up.
        const int floor = training() ? 1 : 0;
        c.hp = std::max(floor, c.hp - damage);
        if (c.hp == 0) lose_life(target);
    }

    void lose_life(Actor who) {
        CombatantState& c = who == Actor::Player ? s_.player : s_.monster;
        --c.lives_remaining;
        emit(ev::LifeLost{who});
        s_.monster.pending_attack.reset();
        if (auto winner = check_termination(s_)) {
            set_phase(TerminalPhase{*winner});
            emit(ev::SessionEnded{*winner});
            return;
        }
        if (who == Actor::Player) {
            set_phase(RevivePhase{0, false});
        } else {
            s_.monster.walk_target_mm.reset();
            set_phase(InterLifeWaitPhase{cfg_.to_ms(cfg_.inter_life_wait)});
        }
    }

    void apply_training(const GameEvent& trigger) {
        GamePhase next = training_transition(s_, trigger);
        if (std::holds_alternative<GameplayPhase>(next)) {
            if (s_.shield.active) close_shield();
            s_.player.hp = cfg_.player_max_hp;
            auto& m = s_.monster;
            m.hp = cfg_.monster_max_hp;
            m.position_mm = 0;
            m.walk_target_mm.reset();
            m.pending_attack.reset();
            enter_gameplay();
            return;
        }
        const auto* before = std::get_if<TrainingPhase>(&s_.phase);
        const auto* after = std::get_if<TrainingPhase>(&next);
        if (before && after && after->stage == TrainingStage::ZoomSquat && before->stage != TrainingStage::ZoomSquat) {
            s_.monster_action_clock_ms = cfg_.to_ms(cfg_.monster_action_period);
        }
        set_phase(std::move(next));
    }

    void enter_gameplay() {
        s_.monster_action_clock_ms = cfg_.to_ms(cfg_.monster_action_period);
        set_phase(GameplayPhase{});
    }

    GameState& s_;
    std::vector<GameEvent>& out_;
    const GameConfig& cfg_;
};

} // namespace

GameState new_game(const GameConfig& config, std::uint64_t seed, StartMode start) {
    validate(config);
    GameState s;
    s.config = config;
    s.player.hp = config.player_max_hp;
    s.player.lives_remaining = config.lives_each;
    s.monster.hp = config.monster_max_hp;
    s.monster.lives_remaining = config.lives_each;
    if (start == StartMode::WithTraining) {
        s.phase = TrainingPhase{};
    } else {
        s.phase = GameplayPhase{};
        s.monster_action_clock_ms = config.to_ms(config.monster_action_period);
    }
    s.engine_rng = Rng(derive_seed(seed, static_cast<std::uint64_t>(Stream::Engine)));
    return s;
}

void advance_into(GameState& state, std::span<const GestureInput> inputs, std::vector<GameEvent>& out) {
    if (state.terminal()) throw Error("advance-after-terminal", "session already ended");
    Sim(state, out).tick(inputs);
}

std::vector<GameEvent> advance(GameState& state, std::span<const GestureInput> inputs) {
    std::vector<GameEvent> out;
    advance_into(state, inputs, out);
    return out;
}

std::vector<GameEvent> submit_gesture(GameState& state, const GestureInput& input) {
    std::vector<GameEvent> out;
    if (!state.terminal()) Sim(state, out).submit(input);
    return out;
}

MoveSet available_monster_moves(const GameState& state) {
    MoveSet set;
    for (MoveId m : {MoveId::MonsterPunch, MoveId::MonsterSquat}) {
        if (state.monster.cooldown(m) == 0) set.add(m);
    }
    return set;
}

MonsterAction monster_decide(MoveSet available, Condition condition, const GameConfig& config,
                             std::int64_t position_mm, Rng& rng) {
    if (!available.empty() && rng.uniform() < config.p_attack_intent) {
        MonsterAction a;
        const int n = available.size();
        a.move = n == 1 ? available.nth(0) : available.nth(static_cast<int>(rng.uniform_int(0, n - 1)));
        const bool is_false = condition == Condition::Uncertain && rng.bernoulli(config.p_false_attack);
        a.kind = is_false ? MonsterAction::Kind::FalseAttack : MonsterAction::Kind::RealAttack;
        return a;
    }
    const std::int64_t range_mm = std::llround(config.monster_move_range * 1000.0);
    const std::int64_t target = rng.uniform_int(-range_mm, range_mm);
    return MonsterAction{MonsterAction::Kind::Walk, MoveId::MonsterPunch, target - position_mm};
}

AttackModifiers roll_attack_modifiers(Condition condition, const GameConfig& config, Rng& rng) {
    if (condition == Condition::Certain) return {};
    AttackModifiers m;
    m.missed = rng.bernoulli(config.p_miss);
    if (!m.missed) m.crit = rng.bernoulli(config.p_crit);
    return m;
}

int attack_damage(const GameConfig& config, MoveId move, bool crit) {
    const int base = config.move(move).damage;
    if (!crit) return base;
    return static_cast<int>(std::lround(static_cast<double>(base) * config.crit_multiplier));
}

bool melee_reaches(const GameConfig& config, Direction direction, std::int64_t position_mm) {
    const std::int64_t dead_zone = std::llround(config.directional_dead_zone * 1000.0);
    if (std::abs(position_mm) <= dead_zone) return true;
    if (direction == Direction::Right) return position_mm > 0;
    if (direction == Direction::Left) return position_mm < 0;
    return false;
}

std::vector<GameEvent> resolve_attack(GameState& state, Actor actor, MoveId move, AttackModifiers modifiers,
                                      Direction direction) {
    std::vector<GameEvent> out;
    if (!state.terminal()) Sim(state, out).resolve(actor, move, modifiers, direction);
    return out;
}

std::vector<GameEvent> resolve_defense_window(GameState& state) {
    std::vector<GameEvent> out;
    if (state.shield.active) Sim(state, out).close_shield();
    return out;
}

GamePhase training_transition(const GameState& state, const GameEvent& event) {
    const auto* t = std::get_if<TrainingPhase>(&state.phase);
    if (t == nullptr) return state.phase;
    TrainingPhase next = *t;
    auto bump = [&next] {
        if (next.awaiting_zoom) return;
        ++next.progress;
        if (next.progress >= 2) next.awaiting_zoom = true;
    };

    if (const auto* g = event.as<ev::GestureSubmitted>()) {
        if (g->gesture != Gesture::Zoom || !g->recognized || !t->awaiting_zoom) return next;
        if (t->stage == TrainingStage::ZoomSquat) return GameplayPhase{};
        return TrainingPhase{static_cast<TrainingStage>(static_cast<int>(t->stage) + 1), 0, false};
    }
    if (const auto* r = event.as<ev::AttackResolved>()) {
        if (t->stage == TrainingStage::ZoomSquat) {
            if (r->actor == Actor::Monster && r->blocked) bump();
        } else if (r->actor == Actor::Player && r->move == trained_move(t->stage) && r->damage_dealt > 0) {
            bump();
        }
    }
    return next;
}

std::optional<Actor> check_termination(const GameState& state) {
    if (state.monster.lives_remaining <= 0 && state.monster.hp == 0) return Actor::Player;
    if (state.player.lives_remaining <= 0 && state.player.hp == 0) return Actor::Monster;
    return std::nullopt;
}

bool phase_edge_allowed(const GamePhase& from, const GamePhase& to) {
    const bool to_training = std::holds_alternative<TrainingPhase>(to);
    const bool to_gameplay = std::holds_alternative<GameplayPhase>(to);
    const bool to_revive = std::holds_alternative<RevivePhase>(to);
    const bool to_wait = std::holds_alternative<InterLifeWaitPhase>(to);
    const bool to_terminal = std::holds_alternative<TerminalPhase>(to);
    switch (from.index()) {
        case 0: return to_training || to_gameplay;
        case 1: return to_revive || to_wait || to_terminal;
        case 2: return to_revive || to_gameplay;
        case 3: return to_gameplay;
        default: return false;
    }
}

} // namespace gf
