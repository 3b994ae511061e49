#include "chaincatch/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chaincatch/error.hpp"

namespace chaincatch {

Arena Arena::with_size(int width, int height, int agent_diameter) {
    Arena a;
    a.width = width;
    a.height = height;
    a.agent_diameter = agent_diameter;
    a.slope_length = std::max(1, std::min(width, height) / 5);
    // 2(W+H) cells around the periphery; the budget is ten such laps.
    a.max_steps = 10 * 2 * (width + height);
    return a;
}

void Arena::validate() const {
    if (agent_diameter < 1)
        throw InvariantError("agent_diameter must be >= 1 (got " + std::to_string(agent_diameter) + ")");
    if (width < 4 * agent_diameter || height < 4 * agent_diameter)
        throw InvariantError("width and height must be >= 4*agent_diameter (" +
                             std::to_string(4 * agent_diameter) + ")");
    // Opposite corner slopes share a wall; they stay disjoint while 2*len < side - 1.
    const int side = std::min(width, height);
    if (slope_length < 1 || 2 * slope_length >= side - 1)
        throw InvariantError("slope_length must satisfy 1 <= slope_length < (min(width,height)-1)/2 (got " +
                             std::to_string(slope_length) + ")");
    if (max_steps < 1)
        throw InvariantError("max_steps must be >= 1");
}

double euclidean_distance(Cell a, Cell b) noexcept {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

double euclidean_distance(Cell a, Point b) noexcept {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

Occupancy::Occupancy(const Arena& arena)
    : width_(arena.width), height_(arena.height),
      bits_(static_cast<std::size_t>(arena.width) * arena.height, 0) {}

Occupancy::Occupancy(const Arena& arena, std::span<const AgentState> agents) : Occupancy(arena) {
    for (const auto& a : agents) set(a.pos);
}

void Occupancy::set(Cell c, bool occupied) {
    if (c.x < 0 || c.x >= width_ || c.y < 0 || c.y >= height_) return;
    bits_[static_cast<std::size_t>(c.y) * width_ + c.x] = occupied ? 1 : 0;
}

bool Occupancy::contains(Cell c) const noexcept {
    if (c.x < 0 || c.x >= width_ || c.y < 0 || c.y >= height_) return false;
    return bits_[static_cast<std::size_t>(c.y) * width_ + c.x] != 0;
}

std::vector<Cell> candidate_cells(const Arena& arena, const Occupancy& occupancy, Cell from) {
    std::vector<Cell> out;
    out.reserve(kMoveOffsets.size());
    out.push_back(from);
    for (std::size_t i = 1; i < kMoveOffsets.size(); ++i) {
        const Cell c{from.x + kMoveOffsets[i].x, from.y + kMoveOffsets[i].y};
        if (arena.in_bounds(c) && !occupancy.contains(c)) out.push_back(c);
    }
    return out;
}

namespace {

Cell mirror(const Arena& arena, Corner corner, Cell c) {
    switch (corner) {
    case Corner::NW: return c;
    case Corner::NE: return {arena.width - 1 - c.x, c.y};
    case Corner::SW: return {c.x, arena.height - 1 - c.y};
    case Corner::SE: return {arena.width - 1 - c.x, arena.height - 1 - c.y};
    }
    return c;
}

} // namespace

SlopeMap::SlopeMap(const Arena& arena)
    : width_(arena.width), height_(arena.height),
      lookup_(static_cast<std::size_t>(arena.width) * arena.height, -1) {
    const int len = arena.slope_length;
    for (int g = 0; g < 4; ++g) {
        const auto corner = static_cast<Corner>(g);
        SlopeGroup group{corner, {}, {}};
        // Canonical NW diagonal x + y = len, walked from the west wall to the north wall.
        for (int x = 0; x <= len; ++x) {
            const Cell c = mirror(arena, corner, Cell{x, len - x});
            if (!arena.in_bounds(c)) continue;
            group.cells.push_back(c);
            lookup_[static_cast<std::size_t>(c.y) * width_ + c.x] = static_cast<std::int8_t>(g);
        }
        group.endpoints = {group.cells.front(), group.cells.back()};
        groups_[g] = std::move(group);
    }
}

std::optional<int> SlopeMap::group_of(Cell c) const noexcept {
    if (c.x < 0 || c.x >= width_ || c.y < 0 || c.y >= height_) return std::nullopt;
    const int g = lookup_[static_cast<std::size_t>(c.y) * width_ + c.x];
    if (g < 0) return std::nullopt;
    return g;
}

SlopeMap slope_cells(const Arena& arena) { return SlopeMap(arena); }

NearestEscapee nearest_escapee(std::span<const AgentState> agents, Cell from) {
    std::optional<NearestEscapee> best;
    for (const auto& a : agents) {
        if (a.role != Role::Escapee) continue;
        const double d = euclidean_distance(from, a.pos);
        if (!best || d < best->distance || (d == best->distance && a.id < best->id)) best = {a.id, d};
    }
    if (!best) throw GameOverError("no escapees remain");
    return *best;
}

Cell representation_point(std::span<const Cell> chain_members, Cell escapee) {
    if (chain_members.empty()) throw ContractError("representation_point: empty chain");
    Cell best = chain_members.front();
    double best_d = euclidean_distance(best, escapee);
    for (std::size_t i = 1; i < chain_members.size(); ++i) {
        const double d = euclidean_distance(chain_members[i], escapee);
        if (d < best_d) {
            best_d = d;
            best = chain_members[i];
        }
    }
    return best;
}

std::string to_string(Role role) {
    switch (role) {
    case Role::Catcher: return "catcher";
    case Role::Escapee: return "escapee";
    case Role::ChainMember: return "chain";
    }
    return "?";
}

} // namespace chaincatch
