#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "chaincatch/sim.hpp"

namespace fixtures {

using namespace chaincatch;

// A mid-game state on cfg.arena: distinct cells, and a chain of 0 or 2..n-1 members.
// Chains are laid out as a rough walk so links are often near their working length.
inline GameState random_state(const GameConfig& cfg, std::mt19937_64& rng) {
    const Arena& a = cfg.arena;
    const int n = cfg.n_agents;
    std::uniform_int_distribution<int> ux(0, a.width - 1), uy(0, a.height - 1);
    std::uniform_int_distribution<int> chain_len(0, n - 1);
    int m = chain_len(rng);
    if (m == 1) m = 2;

    GameState s;
    s.chain.mode = (cfg.chain_strategy == ChainStrategy::TaggingC2 || cfg.chain_strategy == ChainStrategy::VarianceC2)
                       ? CatchMode::AnyMember
                       : CatchMode::EndsOnly;
    std::set<Cell> used;
    std::vector<Cell> cells;
    std::uniform_real_distribution<double> angle(0.0, 6.283185307179586), len(3.0, 11.0);
    Cell cur{ux(rng), uy(rng)};
    for (int i = 0; i < n; ++i) {
        Cell c;
        for (int tries = 0;; ++tries) {
            if (i < m && i > 0 && tries < 50) {
                const double t = angle(rng), l = len(rng);
                c = {std::clamp(int(std::lround(cur.x + l * std::cos(t))), 0, a.width - 1),
                     std::clamp(int(std::lround(cur.y + l * std::sin(t))), 0, a.height - 1)};
            } else {
                c = {ux(rng), uy(rng)};
            }
            if (!used.count(c)) break;
        }
        used.insert(c);
        cells.push_back(c);
        cur = c;
    }
    // Shuffle ids so chain order and catcher identity vary.
    std::vector<int> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    std::shuffle(ids.begin(), ids.end(), rng);
    s.agents.resize(n);
    for (int i = 0; i < n; ++i) s.agents[i] = {i, Cell{}, Role::Escapee};
    for (int k = 0; k < n; ++k) s.agents[ids[k]].pos = cells[k];
    if (m == 0) {
        s.agents[cfg.catcher_id].role = Role::Catcher;
    } else {
        for (int k = 0; k < m; ++k) {
            s.chain.members.push_back(ids[k]);
            s.agents[ids[k]].role = Role::ChainMember;
        }
    }
    return s;
}

} // namespace fixtures

namespace fixtures {

// Counts violations of the per-cycle trace invariants; `first` receives the first one.
inline long check_trace_invariants(const GameTrace& t, std::string* first = nullptr) {
    long bad = 0;
    auto fail = [&](const std::string& what, int cycle) {
        if (bad++ == 0 && first) *first = "cycle " + std::to_string(cycle) + ": " + what;
    };
    const auto& cfg = t.config;
    const int n = cfg.n_agents;
    const double diameter = cfg.arena.agent_diameter;
    const auto mode = (cfg.chain_strategy == ChainStrategy::TaggingC2 || cfg.chain_strategy == ChainStrategy::VarianceC2)
                          ? CatchMode::AnyMember
                          : CatchMode::EndsOnly;
    if (t.records.empty()) {
        fail("no records", 0);
        return bad;
    }
    for (std::size_t r = 0; r < t.records.size(); ++r) {
        const auto& rec = t.records[r];
        if (rec.cycle != int(r)) fail("cycle index out of sequence", rec.cycle);
        if (int(rec.positions.size()) != n) fail("agent count changed", rec.cycle);
        std::set<Cell> seen;
        for (const Cell& c : rec.positions) {
            if (!cfg.arena.in_bounds(c)) fail("agent out of bounds", rec.cycle);
            if (!seen.insert(c).second) fail("two agents share a cell", rec.cycle);
        }
        std::set<int> ids(rec.chain.begin(), rec.chain.end());
        if (ids.size() != rec.chain.size()) fail("chain lists an agent twice", rec.cycle);
        for (int id : rec.chain)
            if (id < 0 || id >= n) fail("chain names an unknown agent", rec.cycle);
        if (r == 0) continue;

        const auto& prev = t.records[r - 1];
        for (int i = 0; i < n && i < int(prev.positions.size()); ++i) {
            const int dx = std::abs(rec.positions[i].x - prev.positions[i].x);
            const int dy = std::abs(rec.positions[i].y - prev.positions[i].y);
            if (dx > 1 || dy > 1) fail("agent moved more than one cell", rec.cycle);
        }
        bool broken = false;
        std::vector<CatchEvent> catches;
        for (const auto& e : rec.events) {
            if (std::holds_alternative<ChainBrokenEvent>(e)) broken = true;
            if (const auto* c = std::get_if<CatchEvent>(&e)) catches.push_back(*c);
        }
        if (catches.size() > 1) fail("more than one catch in a cycle", rec.cycle);
        const std::size_t expect = prev.chain.size() + catches.size() + (prev.chain.empty() && !catches.empty() ? 1 : 0);
        if (rec.chain.size() != expect) fail("chain length changed without a catch", rec.cycle);
        // Prior members keep their order.
        if (!prev.chain.empty() && !catches.empty()) {
            const bool front = rec.chain.front() == catches[0].caught;
            const std::vector<int> rest(rec.chain.begin() + (front ? 1 : 0), rec.chain.end() - (front ? 0 : 1));
            if (rest != prev.chain) fail("catch reordered the chain", rec.cycle);
        } else if (catches.empty() && rec.chain != prev.chain) {
            fail("chain changed without a catch", rec.cycle);
        }
        for (const auto& c : catches) {
            if (broken) fail("catch accepted on a broken chain", rec.cycle);
            if (euclidean_distance(rec.positions[c.catcher], rec.positions[c.caught]) > diameter)
                fail("catch beyond agent diameter", rec.cycle);
            if (std::find(prev.chain.begin(), prev.chain.end(), c.caught) != prev.chain.end())
                fail("caught agent was already in the chain", rec.cycle);
            if (prev.chain.empty()) {
                if (c.catcher != cfg.catcher_id) fail("first catch not made by the catcher", rec.cycle);
            } else {
                const auto it = std::find(prev.chain.begin(), prev.chain.end(), c.catcher);
                if (it == prev.chain.end()) fail("catcher not in the chain", rec.cycle);
                const auto idx = it - prev.chain.begin();
                if (mode == CatchMode::EndsOnly && idx != 0 && idx != std::ptrdiff_t(prev.chain.size()) - 1)
                    fail("interior member caught under EndsOnly", rec.cycle);
            }
        }
    }
    const auto& last = t.records.back();
    const bool full = int(last.chain.size()) == n;
    if (full != (t.outcome.kind == OutcomeKind::Complete)) fail("outcome disagrees with the final chain", last.cycle);
    if (t.outcome.kind == OutcomeKind::Complete && t.outcome.cycles != last.cycle)
        fail("T_c differs from the final cycle", last.cycle);
    if (t.outcome.kind == OutcomeKind::Timeout && last.cycle != cfg.arena.max_steps)
        fail("timeout before the step budget", last.cycle);
    return bad;
}

} // namespace fixtures
