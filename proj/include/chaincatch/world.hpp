#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace chaincatch {

struct Cell {
    int x = 0;
    int y = 0;

    friend bool operator==(const Cell&, const Cell&) = default;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

// Grid geometry shared by every game on it. Distances are in cell units,
// measured between cell centers.
struct Arena {
    int width = 75;
    int height = 75;
    int agent_diameter = 5;
    int slope_length = 15;
    int max_steps = 3000;

    // 75x75 arena, slope length min(w,h)/5, ten laps of the periphery as step budget.
    static Arena with_size(int width, int height, int agent_diameter = 5);

    bool in_bounds(Cell c) const noexcept {
        return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height;
    }

    // Throws InvariantError naming the first violated invariant.
    void validate() const;
};

enum class Role { Catcher, Escapee, ChainMember };

struct AgentState {
    int id = 0;
    Cell pos;
    Role role = Role::Escapee;
};

double euclidean_distance(Cell a, Cell b) noexcept;
double euclidean_distance(Cell a, Point b) noexcept;

// Dense occupancy bitmap over the arena.
class Occupancy {
public:
    explicit Occupancy(const Arena& arena);
    Occupancy(const Arena& arena, std::span<const AgentState> agents);

    void set(Cell c, bool occupied = true);
    bool contains(Cell c) const noexcept;

private:
    int width_;
    int height_;
    std::vector<std::uint8_t> bits_;
};

// Scan order for candidate moves: stay, N, NE, E, SE, S, SW, W, NW (N is y-1).
inline constexpr std::array<Cell, 9> kMoveOffsets{{
    {0, 0}, {0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}}};

// `from` itself is always included; out-of-bounds and occupied neighbors are dropped.
std::vector<Cell> candidate_cells(const Arena& arena, const Occupancy& occupancy, Cell from);

enum class Corner { NW = 0, NE = 1, SW = 2, SE = 3 };

struct SlopeGroup {
    Corner corner;
    std::vector<Cell> cells;         // ordered from first endpoint to second
    std::array<Cell, 2> endpoints;   // where the diagonal meets the two walls
};

// Four anti-diagonal corner slopes with a cell -> group lookup.
class SlopeMap {
public:
    explicit SlopeMap(const Arena& arena);

    const std::array<SlopeGroup, 4>& groups() const noexcept { return groups_; }
    // Index into groups() of the slope containing `c`, if any.
    std::optional<int> group_of(Cell c) const noexcept;

private:
    int width_;
    int height_;
    std::array<SlopeGroup, 4> groups_;
    std::vector<std::int8_t> lookup_;
};

SlopeMap slope_cells(const Arena& arena);

struct NearestEscapee {
    int id;
    double distance;
};

// Ties broken by lowest id. Throws GameOverError when no escapee is present.
NearestEscapee nearest_escapee(std::span<const AgentState> agents, Cell from);

// Chain member nearest to `escapee`; ties broken by lowest chain index.
Cell representation_point(std::span<const Cell> chain_members, Cell escapee);

std::string to_string(Role role);

} // namespace chaincatch
