#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chaincatch/rng.hpp"
#include "chaincatch/world.hpp"

namespace chaincatch {

// Every tunable used by the cost functions. Lengths are in cell units.
struct StrategyParams {
    double k = 18.75;           // safe-circle radius escapees hold from their pursuer
    double k2 = 1.0;            // half-width of the ring that triggers rotation
    double nsd = 10.0;          // neighbour safe distance between escapees
    double d_theta = 0.2;       // rotation increment, radians, counterclockwise
    double max_constant = 110.0;
    double r_safe = 7.5;        // spacing a tagged member keeps from its leader agent
    double r_touch = 0.0;       // distance the chasing member closes to on its escapee
    double r1 = 5.0;            // minimum link length
    double r2 = 10.0;           // maximum link length
    double r_c = 7.5;           // link length the variance method steers towards
    double radius = 2.5;        // agent radius, the variance ramp increment
    double switch_margin = 2.5; // a new chase target must be this much closer to replace the current one

    // K = height/4, NSD = 2 diameters, R_safe = 3 radii, r1/r2 = 1/2 diameters.
    static StrategyParams defaults_for(const Arena& arena);

    // Re-derives r1, r2, r_c, radius and switch_margin from the arena's agent diameter.
    void sync_geometry(const Arena& arena);

    void validate(const Arena& arena) const;
};

enum class EscapeeStrategy { Random, Naive, KCircle, KCircleRotation, SlidingSlope };
enum class ChainStrategy { TaggingC1, TaggingC2, VarianceC1, VarianceC2, Random };

inline constexpr EscapeeStrategy kAllEscapeeStrategies[] = {
    EscapeeStrategy::Random, EscapeeStrategy::Naive, EscapeeStrategy::KCircleRotation,
    EscapeeStrategy::KCircle, EscapeeStrategy::SlidingSlope};
inline constexpr ChainStrategy kAllChainStrategies[] = {
    ChainStrategy::TaggingC2, ChainStrategy::TaggingC1, ChainStrategy::VarianceC2,
    ChainStrategy::VarianceC1, ChainStrategy::Random};

std::string_view to_string(EscapeeStrategy s);
std::string_view to_string(ChainStrategy s);
std::optional<EscapeeStrategy> parse_escapee_strategy(std::string_view name);
std::optional<ChainStrategy> parse_chain_strategy(std::string_view name);

// Cost values within this absolute distance of the minimum count as ties.
inline constexpr double kTieTolerance = 1e-9;

// Minimum-cost candidate; among near-ties the earliest in scan order wins.
template <typename CostFn>
Cell select_move(std::span<const Cell> candidates, CostFn&& cost) {
    double costs[16];
    std::vector<double> spill;
    double* c = costs;
    if (candidates.size() > 16) {
        spill.resize(candidates.size());
        c = spill.data();
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        c[i] = cost(candidates[i]);
        if (c[i] < best) best = c[i];
    }
    for (std::size_t i = 0; i < candidates.size(); ++i)
        if (c[i] <= best + kTieTolerance) return candidates[i];
    return candidates.front();
}

double cost_catcher(Cell cell, Cell target) noexcept;

double cost_naive(Cell cell, Cell chaser, const StrategyParams& params) noexcept;

// Distance from `cell` to the closest of `others`; +inf when empty.
double nearest_neighbor_distance(Cell cell, std::span<const Cell> others) noexcept;

double cost_kcircle(Cell cell, Cell chaser, std::span<const Cell> other_escapees,
                    const StrategyParams& params) noexcept;

// Point on the K circle about `chaser`, d_theta ahead of the escapee's current bearing.
// Empty when the escapee sits on the chaser (bearing undefined).
std::optional<Point> rotation_point(Cell chaser, Cell escapee, const StrategyParams& params) noexcept;

// Evaluates the rotation cost for one moving escapee; the ring test and the
// rotation point depend only on the escapee's current cell so they are fixed
// at construction.
class KCircleRotationCost {
public:
    KCircleRotationCost(Cell chaser, Cell escapee_pos, std::span<const Cell> other_escapees,
                        const StrategyParams& params);

    bool rotating() const noexcept { return target_.has_value(); }
    double operator()(Cell cell) const noexcept;

private:
    Cell chaser_;
    std::span<const Cell> others_;
    const StrategyParams* params_;
    std::optional<Point> target_;
};

double cost_kcircle_rotation(Cell cell, Cell chaser, Cell escapee_pos,
                             std::span<const Cell> other_escapees, const StrategyParams& params);

// Slope branch of the sliding-slope strategy.
struct SlopePlan {
    bool on_slope = false;
    std::vector<Cell> candidates;  // restricted when on a slope, otherwise the input
    Cell target{};                 // endpoint farther from the chaser
};

SlopePlan plan_sliding_slope(const SlopeMap& slopes, std::span<const Cell> candidates,
                             Cell moving_agent, Cell chaser);

double cost_sliding_slope(Cell cell, const SlopePlan& plan, Cell chaser,
                          std::span<const Cell> other_escapees, const StrategyParams& params) noexcept;

// Uniform pick over the candidates.
Cell cost_random(std::span<const Cell> candidates, Rng& rng);

} // namespace chaincatch
