#include "chaincatch/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "chaincatch/error.hpp"

namespace chaincatch {

StrategyParams StrategyParams::defaults_for(const Arena& arena) {
    StrategyParams p;
    p.k = arena.height / 4.0;
    p.k2 = 1.0;
    p.nsd = 2.0 * arena.agent_diameter;
    p.d_theta = 0.2;
    const double diagonal = std::hypot(double(arena.width), double(arena.height));
    p.max_constant = 10.0 * (std::floor(diagonal / 10.0) + 1.0);
    p.r_safe = 1.5 * arena.agent_diameter;
    p.sync_geometry(arena);
    return p;
}

void StrategyParams::sync_geometry(const Arena& arena) {
    r1 = arena.agent_diameter;
    r2 = 2.0 * arena.agent_diameter;
    r_c = (r1 + r2) / 2.0;
    radius = arena.agent_diameter / 2.0;
    switch_margin = radius;
}

void StrategyParams::validate(const Arena& arena) const {
    const double diagonal = std::hypot(double(arena.width), double(arena.height));
    if (!(max_constant > diagonal))
        throw InvariantError("max_constant must exceed the arena diagonal (" + std::to_string(diagonal) + ")");
    if (!(k2 >= 1.0)) throw InvariantError("k2 must be >= 1");
    if (!(k > 0.0)) throw InvariantError("k must be > 0");
    if (!(nsd >= 0.0)) throw InvariantError("nsd must be >= 0");
    if (!(d_theta > 0.0 && d_theta < std::numbers::pi / 2))
        throw InvariantError("d_theta must lie in (0, pi/2)");
    if (!(r_safe > 0.0)) throw InvariantError("r_safe must be > 0");
    if (!(r_touch >= 0.0 && r_touch <= arena.agent_diameter))
        throw InvariantError("r_touch must lie in [0, agent_diameter]");
    if (r1 != arena.agent_diameter || r2 != 2.0 * arena.agent_diameter)
        throw InvariantError("r1 and r2 must equal one and two agent diameters");
    if (r_c != (r1 + r2) / 2.0) throw InvariantError("r_c must be the mean of r1 and r2");
    if (!(switch_margin >= 0.0)) throw InvariantError("switch_margin must be >= 0");
}

std::string_view to_string(EscapeeStrategy s) {
    switch (s) {
    case EscapeeStrategy::Random: return "random";
    case EscapeeStrategy::Naive: return "naive";
    case EscapeeStrategy::KCircle: return "kcircle";
    case EscapeeStrategy::KCircleRotation: return "kcircle-rot";
    case EscapeeStrategy::SlidingSlope: return "slope";
    }
    return "?";
}

std::string_view to_string(ChainStrategy s) {
    switch (s) {
    case ChainStrategy::TaggingC1: return "tag1";
    case ChainStrategy::TaggingC2: return "tag2";
    case ChainStrategy::VarianceC1: return "var1";
    case ChainStrategy::VarianceC2: return "var2";
    case ChainStrategy::Random: return "random";
    }
    return "?";
}

std::optional<EscapeeStrategy> parse_escapee_strategy(std::string_view name) {
    for (auto s : kAllEscapeeStrategies)
        if (to_string(s) == name) return s;
    return std::nullopt;
}

std::optional<ChainStrategy> parse_chain_strategy(std::string_view name) {
    for (auto s : kAllChainStrategies)
        if (to_string(s) == name) return s;
    return std::nullopt;
}

double cost_catcher(Cell cell, Cell target) noexcept { return euclidean_distance(cell, target); }

double cost_naive(Cell cell, Cell chaser, const StrategyParams& params) noexcept {
    return params.max_constant - euclidean_distance(cell, chaser);
}

double nearest_neighbor_distance(Cell cell, std::span<const Cell> others) noexcept {
    double best = std::numeric_limits<double>::infinity();
    for (const Cell& o : others) best = std::min(best, euclidean_distance(cell, o));
    return best;
}

double cost_kcircle(Cell cell, Cell chaser, std::span<const Cell> other_escapees,
                    const StrategyParams& params) noexcept {
    const double ring = std::abs(params.k - euclidean_distance(cell, chaser));
    const double nnd = nearest_neighbor_distance(cell, other_escapees);
    return nnd < params.nsd ? ring + (params.nsd - nnd) : ring;
}

std::optional<Point> rotation_point(Cell chaser, Cell escapee, const StrategyParams& params) noexcept {
    if (chaser == escapee) return std::nullopt;
    const double theta = std::atan2(double(escapee.y - chaser.y), double(escapee.x - chaser.x));
    const double a = theta + params.d_theta;
    return Point{chaser.x + params.k * std::cos(a), chaser.y + params.k * std::sin(a)};
}

KCircleRotationCost::KCircleRotationCost(Cell chaser, Cell escapee_pos,
                                         std::span<const Cell> other_escapees,
                                         const StrategyParams& params)
    : chaser_(chaser), others_(other_escapees), params_(&params) {
    const double cd_now = euclidean_distance(escapee_pos, chaser);
    if (params.k - params.k2 <= cd_now && cd_now < params.k + params.k2)
        target_ = rotation_point(chaser, escapee_pos, params);
}

double KCircleRotationCost::operator()(Cell cell) const noexcept {
    if (target_) return euclidean_distance(cell, *target_);
    return cost_kcircle(cell, chaser_, others_, *params_);
}

double cost_kcircle_rotation(Cell cell, Cell chaser, Cell escapee_pos,
                             std::span<const Cell> other_escapees, const StrategyParams& params) {
    return KCircleRotationCost(chaser, escapee_pos, other_escapees, params)(cell);
}

SlopePlan plan_sliding_slope(const SlopeMap& slopes, std::span<const Cell> candidates,
                             Cell moving_agent, Cell chaser) {
    SlopePlan plan;
    const auto group = slopes.group_of(moving_agent);
    if (!group) {
        plan.candidates.assign(candidates.begin(), candidates.end());
        return plan;
    }
    plan.on_slope = true;
    for (const Cell& c : candidates) {
        const bool adjacent = std::abs(c.x - moving_agent.x) <= 1 && std::abs(c.y - moving_agent.y) <= 1;
        if (c == moving_agent || (adjacent && slopes.group_of(c) == group)) plan.candidates.push_back(c);
    }
    if (plan.candidates.empty() || plan.candidates.front() != moving_agent)
        plan.candidates.insert(plan.candidates.begin(), moving_agent);
    const auto& ends = slopes.groups()[*group].endpoints;
    plan.target = euclidean_distance(ends[1], chaser) > euclidean_distance(ends[0], chaser) ? ends[1] : ends[0];
    return plan;
}

double cost_sliding_slope(Cell cell, const SlopePlan& plan, Cell chaser,
                          std::span<const Cell> other_escapees, const StrategyParams& params) noexcept {
    if (plan.on_slope) return euclidean_distance(cell, plan.target);
    return cost_kcircle(cell, chaser, other_escapees, params);
}

Cell cost_random(std::span<const Cell> candidates, Rng& rng) {
    if (candidates.empty()) throw ContractError("cost_random: no candidates");
    return candidates[rng.uniform_index(candidates.size())];
}

} // namespace chaincatch
