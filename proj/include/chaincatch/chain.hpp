#pragma once

#include <optional>
#include <span>
#include <vector>

#include "chaincatch/strategy.hpp"
#include "chaincatch/world.hpp"

namespace chaincatch {

// Which members may complete a catch.
enum class CatchMode { EndsOnly, AnyMember };

CatchMode catch_mode_of(ChainStrategy s) noexcept;

// Member indices are 0-based here; index 0 and size()-1 are the two ends.
struct ChainState {
    std::vector<int> members; // agent ids in chain order
    CatchMode mode = CatchMode::EndsOnly;

    int size() const noexcept { return static_cast<int>(members.size()); }
    bool exists() const noexcept { return !members.empty(); }
    bool is_end(int index) const noexcept { return index == 0 || index == size() - 1; }
};

struct LeaderChoice {
    int leader_index;
    int escapee_id;
    double distance;
};

// Closest (member, escapee) pair over the members allowed to catch under `mode`.
// Ties: lower member index, then lower escapee id. Throws GameOverError with no escapees.
LeaderChoice select_leader_and_target(std::span<const Cell> member_positions,
                                      std::span<const AgentState> agents, CatchMode mode);

// The member/escapee pair being pursued, by agent id so it survives chain growth.
struct ChaseLock {
    int member_id;
    int escapee_id;
    friend bool operator==(const ChaseLock&, const ChaseLock&) = default;
};

// Keeps pursuing `previous` while its member may still catch and its escapee is free,
// unless `fresh` is closer by more than `margin`.
LeaderChoice retain_chase(const LeaderChoice& fresh, std::optional<ChaseLock> previous, const ChainState& chain,
                          std::span<const Cell> member_positions, std::span<const AgentState> agents,
                          double margin);

// tags[i] is the member index that member i follows, or -1 for the leader,
// which follows the target escapee.
std::vector<int> assign_tags(int m, int leader_index);

double cost_tagging(Cell cell, Cell leader_agent, double spacing) noexcept;

// Target distance of each member from the chased escapee.
// EndsOnly: base + step*min(i, m-1-i). AnyMember: base + step*|leader - i|.
std::vector<double> variance_vector(int m, int leader_index, CatchMode mode, double base, double step);

// Neighbour whose distance enters the variance cost: the next member towards the
// middle (EndsOnly) or towards the leader (AnyMember). Empty for the AnyMember leader.
std::optional<int> variance_neighbor(int m, int index, int leader_index, CatchMode mode);

// Zero inside the open band (r1, r2), otherwise |R_c - distance|.
double link_penalty(Cell cell, Cell neighbor, const StrategyParams& params) noexcept;

double cost_variance(Cell cell, Cell escapee, std::optional<Cell> neighbor, double target_distance,
                     const StrategyParams& params) noexcept;

struct ConstraintVerdict {
    bool intact = true;
    std::vector<int> broken_links; // link i joins members i and i+1
    bool ends_meet = false;
};

// Links must lie in [r1, r2]; with three or more members the ends meet when they
// come within r1 (touching). `fresh_link` skips one just-formed link and the ends rule.
ConstraintVerdict check_chain_constraints(std::span<const Cell> member_positions,
                                          const StrategyParams& params,
                                          std::optional<int> fresh_link = std::nullopt);

// Drops candidates within `min_gap` of the other chain end; returns the input
// unchanged if nothing would remain.
std::vector<Cell> keep_ends_apart(std::vector<Cell> candidates, Cell other_end, double min_gap);

// Adds the caught escapee to the chain and flips its role. Returns the index of
// the link the new member formed. An empty chain is born as [catcher, caught].
int extend_chain(ChainState& chain, int caught_id, int catcher_id, std::span<AgentState> agents);

} // namespace chaincatch
