#include "chaincatch/sim.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "chaincatch/error.hpp"

namespace chaincatch {

GameConfig GameConfig::defaults() {
    GameConfig c;
    c.arena = Arena::with_size(75, 75);
    c.params = StrategyParams::defaults_for(c.arena);
    return c;
}

void GameConfig::validate() const {
    arena.validate();
    params.validate(arena);
    if (n_agents < 3) throw InvariantError("n_agents must be >= 3 (got " + std::to_string(n_agents) + ")");
    if (catcher_id < 0 || catcher_id >= n_agents)
        throw InvariantError("catcher_id must name one of the " + std::to_string(n_agents) + " agents");
    for (int id : frozen_ids)
        if (id < 0 || id >= n_agents) throw InvariantError("frozen id " + std::to_string(id) + " out of range");
    if (initial_positions.empty()) return;
    if (static_cast<int>(initial_positions.size()) != n_agents)
        throw InvariantError("initial_positions must list exactly n_agents cells");
    for (std::size_t i = 0; i < initial_positions.size(); ++i) {
        const Cell a = initial_positions[i];
        if (!arena.in_bounds(a))
            throw InvariantError("initial position of agent " + std::to_string(i) + " is out of bounds");
        for (std::size_t j = i + 1; j < initial_positions.size(); ++j)
            if (euclidean_distance(a, initial_positions[j]) <= arena.agent_diameter)
                throw InvariantError("initial positions of agents " + std::to_string(i) + " and " +
                                     std::to_string(j) + " must be more than agent_diameter apart");
    }
}

std::vector<Cell> GameState::positions() const {
    std::vector<Cell> out;
    out.reserve(agents.size());
    for (const auto& a : agents) out.push_back(a.pos);
    return out;
}

std::vector<Cell> GameState::chain_positions() const {
    std::vector<Cell> out;
    out.reserve(chain.members.size());
    for (int id : chain.members) out.push_back(agents[id].pos);
    return out;
}

std::vector<Cell> place_agents_random(const Arena& arena, int n, std::uint64_t seed) {
    Rng rng(hash_seed({seed, 0x706c616365ULL}));
    std::vector<Cell> cells;
    cells.reserve(n);
    int rejections = 0;
    while (static_cast<int>(cells.size()) < n) {
        const Cell c{rng.uniform_int(0, arena.width - 1), rng.uniform_int(0, arena.height - 1)};
        const bool ok = std::all_of(cells.begin(), cells.end(), [&](Cell o) {
            return euclidean_distance(c, o) > arena.agent_diameter;
        });
        if (ok) {
            cells.push_back(c);
            rejections = 0;
        } else if (++rejections >= 10000) {
            throw InvariantError("over-dense configuration: could not place " + std::to_string(n) +
                                 " agents more than agent_diameter apart");
        }
    }
    return cells;
}

GameState initial_state(const GameConfig& config) {
    config.validate();
    const auto cells = config.initial_positions.empty()
                           ? place_agents_random(config.arena, config.n_agents, config.seed)
                           : config.initial_positions;
    GameState s;
    s.chain.mode = catch_mode_of(config.chain_strategy);
    for (int i = 0; i < config.n_agents; ++i)
        s.agents.push_back({i, cells[i], i == config.catcher_id ? Role::Catcher : Role::Escapee});
    return s;
}

Game::Game(GameConfig config) : Game(config, initial_state(config)) {}

Game::Game(GameConfig config, GameState state)
    : config_(std::move(config)), state_(std::move(state)), slopes_(config_.arena) {
    const int n = static_cast<int>(state_.agents.size());
    for (int i = 0; i < n; ++i) {
        if (state_.agents[i].id != i) throw ContractError("agent ids must equal their index");
        rngs_.emplace_back(hash_seed({config_.seed, 0x6d6f7665ULL, static_cast<std::uint64_t>(i)}));
    }
    frozen_.assign(n, false);
    for (int id : config_.frozen_ids)
        if (id >= 0 && id < n) frozen_[id] = true;
}

Cell Game::catcher_move(int id, const std::vector<Cell>& candidates) {
    if (config_.chain_strategy == ChainStrategy::Random) return cost_random(candidates, rngs_[id]);
    const auto target = nearest_escapee(state_.agents, state_.agents[id].pos);
    const Cell prey = state_.agents[target.id].pos;
    return select_move(candidates, [&](Cell c) { return cost_catcher(c, prey); });
}

void Game::chain_moves(std::vector<Cell>& out, const Occupancy& occ) {
    const auto& members = state_.chain.members;
    const int m = static_cast<int>(members.size());
    const auto pos = state_.chain_positions();
    const auto& params = config_.params;
    const auto strategy = config_.chain_strategy;

    if (strategy == ChainStrategy::Random) {
        for (int i = 0; i < m; ++i) {
            const auto cands = candidate_cells(config_.arena, occ, pos[i]);
            out[members[i]] = cost_random(cands, rngs_[members[i]]);
        }
        return;
    }

    const CatchMode mode = state_.chain.mode;
    const auto fresh = select_leader_and_target(pos, state_.agents, mode);
    const auto lead = retain_chase(fresh, state_.chase, state_.chain, pos, state_.agents, params.switch_margin);
    state_.chase = ChaseLock{members[lead.leader_index], lead.escapee_id};
    const Cell prey = state_.agents[lead.escapee_id].pos;

    // The chasing end may close to touching; the other end keeps more than r2 away.
    auto candidates = [&](int i) {
        auto cands = candidate_cells(config_.arena, occ, pos[i]);
        if (m < 3 || !state_.chain.is_end(i)) return cands;
        const double gap = i == lead.leader_index ? params.r1 : params.r2;
        return keep_ends_apart(std::move(cands), pos[i == 0 ? m - 1 : 0], gap);
    };

    if (strategy == ChainStrategy::TaggingC1 || strategy == ChainStrategy::TaggingC2) {
        const auto tags = assign_tags(m, lead.leader_index);
        for (int i = 0; i < m; ++i) {
            const bool leads = tags[i] < 0;
            const Cell followed = leads ? prey : pos[tags[i]];
            const double spacing = leads ? params.r_touch : params.r_safe;
            out[members[i]] = select_move(candidates(i), [&](Cell c) { return cost_tagging(c, followed, spacing); });
        }
        return;
    }

    auto targets = variance_vector(m, lead.leader_index, mode, params.r_safe, params.radius);
    targets[lead.leader_index] = params.r_touch;

    // Members move outward from the leader (or the middle) and see the cells
    // already chosen by the neighbours processed before them.
    const double anchor = mode == CatchMode::AnyMember ? lead.leader_index : (m - 1) / 2.0;
    std::vector<int> order(m);
    for (int i = 0; i < m; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return std::abs(a - anchor) < std::abs(b - anchor); });
    std::vector<Cell> plan = pos;
    for (int i : order) {
        std::optional<Cell> inner, outer;
        if (i != lead.leader_index) {
            const auto nb = variance_neighbor(m, i, lead.leader_index, mode);
            if (nb) inner = plan[*nb];
            for (int j : {i - 1, i + 1})
                if (j >= 0 && j < m && (!nb || j != *nb)) outer = plan[j];
        }
        plan[i] = select_move(candidates(i), [&](Cell c) {
            const double cost = cost_variance(c, prey, inner, targets[i], params);
            return outer ? cost + link_penalty(c, *outer, params) : cost;
        });
        out[members[i]] = plan[i];
    }
}

Cell Game::escapee_move(int id, const Occupancy& occ, std::span<const Cell> chain_pos,
                        std::vector<Cell>& others) {
    const Cell self = state_.agents[id].pos;
    const auto cands = candidate_cells(config_.arena, occ, self);
    const auto& params = config_.params;

    if (config_.escapee_strategy == EscapeeStrategy::Random) return cost_random(cands, rngs_[id]);

    const Cell chaser = chain_pos.empty() ? state_.agents[config_.catcher_id].pos
                                          : representation_point(chain_pos, self);
    others.clear();
    for (const auto& a : state_.agents)
        if (a.role == Role::Escapee && a.id != id) others.push_back(a.pos);

    switch (config_.escapee_strategy) {
    case EscapeeStrategy::Naive:
        return select_move(cands, [&](Cell c) { return cost_naive(c, chaser, params); });
    case EscapeeStrategy::KCircle:
        return select_move(cands, [&](Cell c) { return cost_kcircle(c, chaser, others, params); });
    case EscapeeStrategy::KCircleRotation: {
        const KCircleRotationCost cost(chaser, self, others, params);
        return select_move(cands, cost);
    }
    case EscapeeStrategy::SlidingSlope: {
        const auto plan = plan_sliding_slope(slopes_, cands, self, chaser);
        return select_move(plan.candidates,
                           [&](Cell c) { return cost_sliding_slope(c, plan, chaser, others, params); });
    }
    case EscapeeStrategy::Random: break;
    }
    return self;
}

std::vector<Cell> Game::desired_moves() {
    if (state_.over()) throw ContractError("desired_moves: game is over");
    const Occupancy occ(config_.arena, state_.agents);
    std::vector<Cell> out = state_.positions();
    const auto chain_pos = state_.chain_positions();

    if (state_.chain.exists()) {
        chain_moves(out, occ);
    } else {
        const int c = config_.catcher_id;
        out[c] = catcher_move(c, candidate_cells(config_.arena, occ, state_.agents[c].pos));
    }
    std::vector<Cell> others;
    others.reserve(state_.agents.size());
    for (const auto& a : state_.agents)
        if (a.role == Role::Escapee) out[a.id] = escapee_move(a.id, occ, chain_pos, others);

    for (std::size_t i = 0; i < out.size(); ++i)
        if (frozen_[i]) out[i] = state_.agents[i].pos;
    return out;
}

std::vector<Event> Game::apply_moves(std::span<const Cell> desired) {
    if (state_.over()) throw ContractError("step: game is over");
    if (desired.size() != state_.agents.size()) throw ContractError("apply_moves: one move per agent required");
    const auto& arena = config_.arena;
    std::vector<Event> events;

    Occupancy occ(arena, state_.agents);
    for (auto& a : state_.agents) {
        const Cell to = desired[a.id];
        if (to == a.pos) continue;
        const bool step_ok = std::abs(to.x - a.pos.x) <= 1 && std::abs(to.y - a.pos.y) <= 1;
        if (!step_ok || !arena.in_bounds(to) || occ.contains(to)) continue;
        occ.set(a.pos, false);
        occ.set(to);
        a.pos = to;
    }

    // Chain constraints on post-move positions.
    verdict_ = ConstraintVerdict{};
    if (state_.chain.exists()) {
        verdict_ = check_chain_constraints(state_.chain_positions(), config_.params, state_.fresh_link);
        if (!verdict_.intact) events.push_back(ChainBrokenEvent{verdict_.broken_links, verdict_.ends_meet});
    }
    state_.fresh_link.reset();

    // Contacts between eligible pursuers and escapees.
    struct Contact {
        int rank; // chain index, 0 for the lone catcher
        int pursuer;
        int escapee;
        double distance;
    };
    std::vector<Contact> contacts;
    auto scan = [&](int rank, int pursuer) {
        const Cell p = state_.agents[pursuer].pos;
        for (const auto& a : state_.agents) {
            if (a.role != Role::Escapee) continue;
            const double d = euclidean_distance(p, a.pos);
            if (d <= arena.agent_diameter) contacts.push_back({rank, pursuer, a.id, d});
        }
    };
    if (!state_.chain.exists()) {
        scan(0, config_.catcher_id);
    } else {
        const int m = state_.chain.size();
        for (int i = 0; i < m; ++i)
            if (state_.chain.mode == CatchMode::AnyMember || state_.chain.is_end(i)) scan(i, state_.chain.members[i]);
    }

    if (!contacts.empty()) {
        if (verdict_.intact) {
            const auto best = std::min_element(contacts.begin(), contacts.end(), [](const Contact& a, const Contact& b) {
                if (a.distance != b.distance) return a.distance < b.distance;
                if (a.rank != b.rank) return a.rank < b.rank;
                return a.escapee < b.escapee;
            });
            state_.fresh_link = extend_chain(state_.chain, best->escapee, best->pursuer, state_.agents);
            events.push_back(CatchEvent{best->pursuer, best->escapee});
        } else {
            for (const auto& c : contacts) events.push_back(CatchRejectedEvent{c.pursuer, c.escapee});
        }
    }

    ++state_.cycle;
    if (state_.chain.size() == static_cast<int>(state_.agents.size())) {
        state_.outcome = Outcome{OutcomeKind::Complete, state_.cycle};
        events.push_back(GameOverEvent{OutcomeKind::Complete});
    } else if (state_.cycle >= arena.max_steps) {
        state_.outcome = Outcome{OutcomeKind::Timeout, arena.max_steps};
        events.push_back(GameOverEvent{OutcomeKind::Timeout});
    }
    return events;
}

namespace {

CycleRecord snapshot(const GameState& s, std::vector<Event> events) {
    return CycleRecord{s.cycle, s.positions(), s.chain.members, std::move(events)};
}

} // namespace

GameTrace run_game(const GameConfig& config) {
    Game game(config);
    GameTrace trace;
    trace.config = config;
    trace.records.push_back(snapshot(game.state(), {}));
    while (!game.state().over()) {
        auto events = game.step();
        trace.records.push_back(snapshot(game.state(), std::move(events)));
    }
    trace.outcome = *game.state().outcome;
    return trace;
}

Outcome play_game(const GameConfig& config) {
    Game game(config);
    while (!game.state().over()) game.step();
    return *game.state().outcome;
}

} // namespace chaincatch
