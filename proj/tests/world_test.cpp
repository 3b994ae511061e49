#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "chaincatch/error.hpp"
#include "chaincatch/world.hpp"
#include "oracles.hpp"

using namespace chaincatch;

namespace {

std::set<Cell> as_set(const std::vector<Cell>& v) { return {v.begin(), v.end()}; }

Occupancy occupancy_of(const Arena& a, const std::set<Cell>& cells) {
    Occupancy occ(a);
    for (const Cell& c : cells) occ.set(c);
    return occ;
}

} // namespace

TEST_CASE("euclidean distance on small triangles") {
    CHECK(euclidean_distance(Cell{0, 0}, Cell{3, 4}) == 5.0);
    CHECK(euclidean_distance(Cell{7, 7}, Cell{7, 7}) == 0.0);
    CHECK(euclidean_distance(Cell{0, 0}, Cell{1, 1}) == doctest::Approx(1.4142135623730951).epsilon(1e-12));
}

TEST_CASE("distance is symmetric and obeys the triangle inequality") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> u(-200, 200);
    for (int i = 0; i < 20000; ++i) {
        const Cell a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
        CHECK(euclidean_distance(a, b) == euclidean_distance(b, a));
        CHECK(euclidean_distance(a, c) <= euclidean_distance(a, b) + euclidean_distance(b, c) + 1e-9);
        CHECK((euclidean_distance(a, b) == 0.0) == (a == b));
    }
}

TEST_CASE("candidate cells keep the fixed scan order") {
    const Arena a = Arena::with_size(10, 10, 2);
    const Occupancy empty(a);
    // Stay, E, SE, S: the four cells of the corner in scan order.
    const auto corner = candidate_cells(a, empty, {0, 0});
    CHECK(corner == std::vector<Cell>{{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    CHECK(as_set(corner) == std::set<Cell>{{0, 0}, {1, 0}, {0, 1}, {1, 1}});
    const auto interior = candidate_cells(a, empty, {5, 5});
    CHECK(interior == std::vector<Cell>{{5, 5}, {5, 4}, {6, 4}, {6, 5}, {6, 6}, {5, 6}, {4, 6}, {4, 5}, {4, 4}});

    const auto blocked = candidate_cells(a, occupancy_of(a, {{5, 4}}), {5, 5});
    CHECK(blocked.size() == 8);
    CHECK(std::find(blocked.begin(), blocked.end(), Cell{5, 4}) == blocked.end());
}

TEST_CASE("an enclosed agent may only stay") {
    const Arena a = Arena::with_size(20, 20, 2);
    std::set<Cell> ring;
    for (int dx = -1; dx <= 1; ++dx)
        for (int dy = -1; dy <= 1; ++dy)
            if (dx || dy) ring.insert({5 + dx, 5 + dy});
    CHECK(candidate_cells(a, occupancy_of(a, ring), {5, 5}) == std::vector<Cell>{{5, 5}});
}

TEST_CASE("candidate cells match a brute-force neighbourhood scan") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 2000; ++t) {
        const int w = 8 + int(rng() % 30), h = 8 + int(rng() % 30);
        const Arena a = Arena::with_size(w, h, 2);
        std::set<Cell> occ;
        for (int k = 0; k < 40; ++k) occ.insert({int(rng() % w), int(rng() % h)});
        const Cell from{int(rng() % w), int(rng() % h)};
        occ.erase(from);
        const auto got = candidate_cells(a, occupancy_of(a, occ), from);
        CHECK(got == oracle::moves(w, h, occ, from));
        CHECK(got.size() >= 1);
        CHECK(got.size() <= 9);
        for (const Cell& c : got) {
            CHECK(a.in_bounds(c));
            CHECK((c == from || !occ.count(c)));
        }
    }
}

TEST_CASE("NW slope of a 75x75 arena") {
    const Arena a = Arena::with_size(75, 75);
    REQUIRE(a.slope_length == 15);
    const SlopeMap slopes(a);
    const auto& nw = slopes.groups()[int(Corner::NW)];
    CHECK(nw.cells.size() == 16);
    for (int x = 0; x <= 15; ++x) CHECK(slopes.group_of({x, 15 - x}) == int(Corner::NW));
    CHECK(as_set(nw.cells) == as_set([] {
              std::vector<Cell> v;
              for (int x = 0; x <= 15; ++x) v.push_back({x, 15 - x});
              return v;
          }()));
    CHECK(as_set({nw.endpoints[0], nw.endpoints[1]}) == std::set<Cell>{{0, 15}, {15, 0}});
}

TEST_CASE("minimal slope has two cells") {
    Arena a = Arena::with_size(20, 20, 2);
    a.slope_length = 1;
    const SlopeMap slopes(a);
    CHECK(as_set(slopes.groups()[int(Corner::NW)].cells) == std::set<Cell>{{0, 1}, {1, 0}});
}

TEST_CASE("slope groups are disjoint, mirror-symmetric and match the corner formulas") {
    for (const auto& [w, h, len] : {std::tuple{75, 75, 15}, {40, 30, 8}, {21, 33, 9}, {20, 20, 1}, {22, 22, 10}}) {
        Arena a = Arena::with_size(w, h, 2);
        a.slope_length = len;
        a.validate();
        const SlopeMap slopes(a);
        std::set<Cell> all;
        std::size_t total = 0;
        for (const auto& g : slopes.groups()) {
            CHECK(g.cells.size() == std::size_t(len + 1));
            total += g.cells.size();
            for (const Cell& c : g.cells) {
                all.insert(c);
                CHECK(oracle::slope_group(w, h, len, c) == int(g.corner));
            }
            const auto [e0, e1] = oracle::slope_endpoints(w, h, len, int(g.corner));
            CHECK(g.endpoints[0] == e0);
            CHECK(g.endpoints[1] == e1);
        }
        CHECK(all.size() == total);
        for (const Cell& c : all) {
            CHECK(all.count({w - 1 - c.x, c.y}));
            CHECK(all.count({c.x, h - 1 - c.y}));
        }
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const int g = oracle::slope_group(w, h, len, {x, y});
                CHECK(slopes.group_of({x, y}) == (g < 0 ? std::nullopt : std::optional<int>(g)));
            }
    }
}

TEST_CASE("nearest escapee and its tie-break") {
    std::vector<AgentState> agents{{0, {0, 0}, Role::Catcher}, {1, {3, 4}, Role::Escapee}, {2, {6, 8}, Role::Escapee}};
    auto n = nearest_escapee(agents, {0, 0});
    CHECK(n.id == 1);
    CHECK(n.distance == 5.0);

    agents = {{0, {5, 5}, Role::Catcher}, {1, {6, 5}, Role::Escapee}, {2, {5, 6}, Role::Escapee}};
    n = nearest_escapee(agents, {5, 5});
    CHECK(n.id == 1);
    CHECK(n.distance == 1.0);

    agents = {{0, {5, 5}, Role::Catcher}, {1, {9, 9}, Role::ChainMember}};
    CHECK_THROWS_AS(nearest_escapee(agents, {5, 5}), GameOverError);
}

TEST_CASE("nearest escapee matches an exhaustive scan") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 500; ++t) {
        std::vector<AgentState> agents{{0, {0, 0}, Role::Catcher}};
        for (int i = 1; i <= 10; ++i) agents.push_back({i, {int(rng() % 75), int(rng() % 75)}, Role::Escapee});
        int best = -1;
        oracle::real bd = 1e300;
        for (const auto& a : agents)
            if (a.role == Role::Escapee && oracle::dist({0, 0}, a.pos) < bd) bd = oracle::dist({0, 0}, a.pos), best = a.id;
        const auto got = nearest_escapee(agents, {0, 0});
        CHECK(got.id == best);
        CHECK(got.distance == doctest::Approx(double(bd)).epsilon(1e-12));
    }
}

TEST_CASE("representation point") {
    const std::vector<Cell> line{{0, 0}, {2, 0}, {4, 0}};
    CHECK(representation_point(line, {5, 1}) == Cell{4, 0});
    const std::vector<Cell> single{{3, 3}};
    CHECK(representation_point(single, {70, 1}) == Cell{3, 3});
    const std::vector<Cell> tie{{0, 0}, {2, 0}};
    CHECK(representation_point(tie, {1, 5}) == Cell{0, 0});

    std::mt19937_64 rng(9);
    for (int t = 0; t < 500; ++t) {
        std::vector<Cell> members;
        for (int i = 0; i < 8; ++i) members.push_back({int(rng() % 75), int(rng() % 75)});
        const Cell e{int(rng() % 75), int(rng() % 75)};
        std::size_t best = 0;
        for (std::size_t i = 1; i < members.size(); ++i)
            if (oracle::dist(members[i], e) < oracle::dist(members[best], e)) best = i;
        CHECK(representation_point(members, e) == members[best]);
    }
}

TEST_CASE("arena invariants") {
    CHECK_NOTHROW(Arena::with_size(75, 75).validate());
    const Arena d = Arena::with_size(75, 75);
    CHECK(d.max_steps == 3000);
    CHECK(d.agent_diameter == 5);

    Arena small = Arena::with_size(19, 40, 5);
    CHECK_THROWS_AS(small.validate(), InvariantError);
    Arena slope = Arena::with_size(40, 40, 5);
    slope.slope_length = 20;
    CHECK_THROWS_AS(slope.validate(), InvariantError);
    slope.slope_length = 10; // 21 wide: the north-wall endpoints (10,0) would coincide
    slope.width = 21;
    CHECK_THROWS_AS(slope.validate(), InvariantError);
    slope.slope_length = 9;
    CHECK_NOTHROW(slope.validate());
    slope.slope_length = 0;
    CHECK_THROWS_AS(slope.validate(), InvariantError);
    Arena steps = Arena::with_size(40, 40, 5);
    steps.max_steps = 0;
    CHECK_THROWS_AS(steps.validate(), InvariantError);
}
