#include "chaincatch/chain.hpp"

#include <algorithm>
#include <cmath>

#include "chaincatch/error.hpp"

namespace chaincatch {

CatchMode catch_mode_of(ChainStrategy s) noexcept {
    switch (s) {
    case ChainStrategy::TaggingC2:
    case ChainStrategy::VarianceC2: return CatchMode::AnyMember;
    default: return CatchMode::EndsOnly;
    }
}

LeaderChoice select_leader_and_target(std::span<const Cell> member_positions,
                                      std::span<const AgentState> agents, CatchMode mode) {
    const int m = static_cast<int>(member_positions.size());
    if (m == 0) throw ContractError("select_leader_and_target: empty chain");
    std::optional<LeaderChoice> best;
    auto consider = [&](int i) {
        for (const auto& a : agents) {
            if (a.role != Role::Escapee) continue;
            const double d = euclidean_distance(member_positions[i], a.pos);
            // Members are visited in ascending index, escapees in ascending id.
            if (!best || d < best->distance ||
                (d == best->distance && i == best->leader_index && a.id < best->escapee_id))
                best = LeaderChoice{i, a.id, d};
        }
    };
    if (mode == CatchMode::EndsOnly) {
        consider(0);
        if (m > 1) consider(m - 1);
    } else {
        for (int i = 0; i < m; ++i) consider(i);
    }
    if (!best) throw GameOverError("no escapees remain");
    return *best;
}

std::vector<int> assign_tags(int m, int leader_index) {
    if (leader_index < 0 || leader_index >= m) throw ContractError("assign_tags: leader out of range");
    std::vector<int> tags(m);
    for (int i = 0; i < m; ++i) {
        if (i < leader_index) tags[i] = i + 1;
        else if (i > leader_index) tags[i] = i - 1;
        else tags[i] = -1;
    }
    return tags;
}

double cost_tagging(Cell cell, Cell leader_agent, double spacing) noexcept {
    return std::abs(spacing - euclidean_distance(cell, leader_agent));
}

std::vector<double> variance_vector(int m, int leader_index, CatchMode mode, double base, double step) {
    if (m < 1) throw ContractError("variance_vector: empty chain");
    std::vector<double> v(m);
    for (int i = 0; i < m; ++i) {
        const int rank = mode == CatchMode::EndsOnly ? std::min(i, m - 1 - i) : std::abs(leader_index - i);
        v[i] = base + step * rank;
    }
    return v;
}

std::optional<int> variance_neighbor(int m, int index, int leader_index, CatchMode mode) {
    if (m < 2) return std::nullopt;
    if (mode == CatchMode::AnyMember) {
        if (index < leader_index) return index + 1;
        if (index > leader_index) return index - 1;
        return std::nullopt;
    }
    // Twice the index against m-1 keeps the comparison integral.
    const int twice = 2 * index;
    if (twice < m - 1) return index + 1;
    if (twice > m - 1) return index - 1;
    // Odd-length middle member leans towards the leading end.
    return leader_index < index ? index - 1 : index + 1;
}

double link_penalty(Cell cell, Cell neighbor, const StrategyParams& params) noexcept {
    const double dc = euclidean_distance(cell, neighbor);
    if (params.r1 < dc && dc < params.r2) return 0.0;
    return std::abs(params.r_c - dc);
}

double cost_variance(Cell cell, Cell escapee, std::optional<Cell> neighbor, double target_distance,
                     const StrategyParams& params) noexcept {
    const double spread = std::abs(target_distance - euclidean_distance(cell, escapee));
    return neighbor ? spread + link_penalty(cell, *neighbor, params) : spread;
}

LeaderChoice retain_chase(const LeaderChoice& fresh, std::optional<ChaseLock> previous, const ChainState& chain,
                          std::span<const Cell> member_positions, std::span<const AgentState> agents,
                          double margin) {
    if (!previous) return fresh;
    const auto it = std::find(chain.members.begin(), chain.members.end(), previous->member_id);
    if (it == chain.members.end()) return fresh;
    const int index = static_cast<int>(it - chain.members.begin());
    if (chain.mode == CatchMode::EndsOnly && !chain.is_end(index)) return fresh;
    const auto prey = std::find_if(agents.begin(), agents.end(),
                                   [&](const AgentState& a) { return a.id == previous->escapee_id; });
    if (prey == agents.end() || prey->role != Role::Escapee) return fresh;
    const double held = euclidean_distance(member_positions[index], prey->pos);
    if (fresh.distance < held - margin) return fresh;
    return LeaderChoice{index, previous->escapee_id, held};
}

std::vector<Cell> keep_ends_apart(std::vector<Cell> candidates, Cell other_end, double min_gap) {
    std::vector<Cell> kept;
    for (const Cell& c : candidates)
        if (euclidean_distance(c, other_end) > min_gap) kept.push_back(c);
    return kept.empty() ? candidates : kept;
}

ConstraintVerdict check_chain_constraints(std::span<const Cell> member_positions,
                                          const StrategyParams& params, std::optional<int> fresh_link) {
    ConstraintVerdict verdict;
    const int m = static_cast<int>(member_positions.size());
    for (int i = 0; i + 1 < m; ++i) {
        if (fresh_link && *fresh_link == i) continue;
        const double d = euclidean_distance(member_positions[i], member_positions[i + 1]);
        if (d < params.r1 || d > params.r2) verdict.broken_links.push_back(i);
    }
    if (m >= 3 && !fresh_link &&
        euclidean_distance(member_positions.front(), member_positions.back()) <= params.r1)
        verdict.ends_meet = true;
    verdict.intact = verdict.broken_links.empty() && !verdict.ends_meet;
    return verdict;
}

int extend_chain(ChainState& chain, int caught_id, int catcher_id, std::span<AgentState> agents) {
    auto find = [&](int id) -> AgentState& {
        for (auto& a : agents)
            if (a.id == id) return a;
        throw ContractError("extend_chain: unknown agent id " + std::to_string(id));
    };
    AgentState& caught = find(caught_id);
    if (caught.role != Role::Escapee)
        throw ContractError("extend_chain: agent " + std::to_string(caught_id) + " is not an escapee");

    int link;
    if (!chain.exists()) {
        AgentState& catcher = find(catcher_id);
        catcher.role = Role::ChainMember;
        chain.members = {catcher_id, caught_id};
        link = 0;
    } else {
        const auto it = std::find(chain.members.begin(), chain.members.end(), catcher_id);
        if (it == chain.members.end())
            throw ContractError("extend_chain: catcher " + std::to_string(catcher_id) + " is not in the chain");
        const int idx = static_cast<int>(it - chain.members.begin());
        const int m = chain.size();
        bool at_front;
        if (idx == 0) at_front = true;
        else if (idx == m - 1) at_front = false;
        else {
            const double d_front = euclidean_distance(find(chain.members.front()).pos, caught.pos);
            const double d_back = euclidean_distance(find(chain.members.back()).pos, caught.pos);
            at_front = d_front < d_back;
        }
        if (at_front) {
            chain.members.insert(chain.members.begin(), caught_id);
            link = 0;
        } else {
            chain.members.push_back(caught_id);
            link = chain.size() - 2;
        }
    }
    caught.role = Role::ChainMember;
    return link;
}

} // namespace chaincatch
