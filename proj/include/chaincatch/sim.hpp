#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "chaincatch/chain.hpp"
#include "chaincatch/rng.hpp"
#include "chaincatch/strategy.hpp"
#include "chaincatch/world.hpp"

namespace chaincatch {

struct GameConfig {
    Arena arena;
    int n_agents = 10;
    std::vector<Cell> initial_positions; // empty: seeded random placement
    int catcher_id = 0;
    EscapeeStrategy escapee_strategy = EscapeeStrategy::KCircle;
    ChainStrategy chain_strategy = ChainStrategy::TaggingC1;
    StrategyParams params;
    std::uint64_t seed = 1;
    std::vector<int> frozen_ids; // agents pinned in place (scenario setups)

    static GameConfig defaults();
    void validate() const;
};

enum class OutcomeKind { Complete, Timeout };

struct Outcome {
    OutcomeKind kind = OutcomeKind::Timeout;
    int cycles = 0; // T_c when complete, the step budget on timeout

    friend bool operator==(const Outcome&, const Outcome&) = default;
};

struct CatchEvent {
    int catcher;
    int caught;
    friend bool operator==(const CatchEvent&, const CatchEvent&) = default;
};
struct CatchRejectedEvent {
    int catcher;
    int caught;
    friend bool operator==(const CatchRejectedEvent&, const CatchRejectedEvent&) = default;
};
struct ChainBrokenEvent {
    std::vector<int> links;
    bool ends_meet = false;
    friend bool operator==(const ChainBrokenEvent&, const ChainBrokenEvent&) = default;
};
struct GameOverEvent {
    OutcomeKind kind;
    friend bool operator==(const GameOverEvent&, const GameOverEvent&) = default;
};
using Event = std::variant<CatchEvent, CatchRejectedEvent, ChainBrokenEvent, GameOverEvent>;

struct GameState {
    std::vector<AgentState> agents; // agents[i].id == i
    ChainState chain;
    int cycle = 0;
    std::optional<int> fresh_link;  // link formed by the previous cycle's catch
    std::optional<ChaseLock> chase; // pursuit chosen on the previous cycle
    std::optional<Outcome> outcome;

    bool over() const noexcept { return outcome.has_value(); }
    std::vector<Cell> positions() const;
    std::vector<Cell> chain_positions() const;
};

// Seeded rejection sampling with pairwise spacing > agent_diameter.
// Throws InvariantError after 10,000 consecutive rejections.
std::vector<Cell> place_agents_random(const Arena& arena, int n, std::uint64_t seed);

// Builds the cycle-0 state: validates the config and places agents.
GameState initial_state(const GameConfig& config);

// Drives one game. Every agent owns an independent random stream derived from
// the game seed and its id, so move choices do not depend on evaluation order.
class Game {
public:
    explicit Game(GameConfig config);
    Game(GameConfig config, GameState state); // resume from an explicit state

    const GameConfig& config() const noexcept { return config_; }
    const GameState& state() const noexcept { return state_; }

    // Moves each agent would like to make from the current snapshot, indexed by id.
    std::vector<Cell> desired_moves();

    // Applies moves in ascending id order (stay on conflict), then checks chain
    // constraints, resolves contacts and advances the cycle counter.
    std::vector<Event> apply_moves(std::span<const Cell> desired);

    std::vector<Event> step() { return apply_moves(desired_moves()); }

    // Verdict from the most recent step; intact before any chain exists.
    const ConstraintVerdict& last_verdict() const noexcept { return verdict_; }

private:
    Cell catcher_move(int id, const std::vector<Cell>& candidates);
    void chain_moves(std::vector<Cell>& out, const Occupancy& occ);
    Cell escapee_move(int id, const Occupancy& occ, std::span<const Cell> chain_pos,
                      std::vector<Cell>& others);

    GameConfig config_;
    GameState state_;
    SlopeMap slopes_;
    std::vector<Rng> rngs_;
    std::vector<bool> frozen_;
    ConstraintVerdict verdict_;
};

struct CycleRecord {
    int cycle = 0;
    std::vector<Cell> positions; // indexed by agent id
    std::vector<int> chain;      // member ids in order
    std::vector<Event> events;

    friend bool operator==(const CycleRecord&, const CycleRecord&) = default;
};

struct GameTrace {
    GameConfig config;
    std::vector<CycleRecord> records;
    Outcome outcome;
};

// Plays to completion or timeout and records every cycle.
GameTrace run_game(const GameConfig& config);

// Same game without recording.
Outcome play_game(const GameConfig& config);

} // namespace chaincatch
