#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chaincatch/sim.hpp"

namespace chaincatch {

struct MatrixSpec {
    std::vector<EscapeeStrategy> escapee_strategies;
    std::vector<ChainStrategy> chain_strategies;
    std::vector<int> agent_counts;
    int runs_per_cell = 25;
    std::uint64_t base_seed = 1;
    Arena arena;
    StrategyParams params;

    // Full 5x5 matrix at n = 10 on the default arena.
    static MatrixSpec defaults();
    void validate() const;
};

// Seed of one run. Keyed on the strategies themselves rather than their position
// in the matrix, so adding rows or columns leaves existing cells untouched.
std::uint64_t run_seed(std::uint64_t base_seed, ChainStrategy chain, EscapeeStrategy escapee, int n_agents,
                       int run);

GameConfig run_config(const MatrixSpec& spec, ChainStrategy chain, EscapeeStrategy escapee, int n_agents, int run);

struct RunResult {
    ChainStrategy chain;
    EscapeeStrategy escapee;
    int n_agents;
    int run;
    std::uint64_t seed;
    Outcome outcome;

    friend bool operator==(const RunResult&, const RunResult&) = default;
};

struct CellStats {
    ChainStrategy chain;
    EscapeeStrategy escapee;
    int n_agents;
    int runs = 0;
    int completed = 0;
    int timeouts = 0;
    double mean = 0.0;   // over completed runs
    double stddev = 0.0; // sample deviation over completed runs, 0 for fewer than two

    bool all_timeout() const noexcept { return runs > 0 && completed == 0; }
    // Mean used for rankings: +inf when every run timed out.
    double ranking_mean() const noexcept;

    friend bool operator==(const CellStats&, const CellStats&) = default;
};

// Statistics of one cell from its outcomes, in any order.
CellStats summarize_cell(ChainStrategy chain, EscapeeStrategy escapee, int n_agents,
                         const std::vector<Outcome>& outcomes);

struct TransitionTable {
    std::vector<EscapeeStrategy> escapee_strategies;
    std::vector<ChainStrategy> chain_strategies;
    std::vector<int> agent_counts;
    int max_steps = 3000;
    std::vector<CellStats> cells;  // agent count, then chain, then escapee
    std::vector<RunResult> runs;   // same order, runs ascending within a cell

    const CellStats* find(ChainStrategy chain, EscapeeStrategy escapee, int n_agents) const;
};

// Runs every cell of the matrix. `threads` > 1 spreads runs over worker threads;
// the table does not depend on the thread count.
TransitionTable run_batch(const MatrixSpec& spec, int threads = 1);

// Rebuilds a table from per-run results (e.g. read back from an export).
TransitionTable tabulate(const MatrixSpec& spec, std::vector<RunResult> runs);

enum class Verdict { Pass, Fail, NotEvaluable };

std::string_view to_string(Verdict v);

struct OrderingLine {
    int n_agents;
    std::string fixed;               // strategy held fixed for this line
    std::vector<std::string> order;  // observed order of the varied strategies
    Verdict verdict;
};

struct OrderingReport {
    // Per (n, chain strategy): escapees by descending mean T_c, checked against
    // slope > kcircle > kcircle-rot > naive > random.
    std::vector<OrderingLine> escapee_lines;
    // Per (n, escapee strategy): chain strategies by ascending mean T_c, checked
    // against tag2 < tag1 < var2 < var1 < random.
    std::vector<OrderingLine> chain_lines;

    Verdict escapee_verdict() const;
    Verdict chain_verdict() const;
    std::string render() const;
};

inline constexpr EscapeeStrategy kExpectedEscapeeOrder[] = {
    EscapeeStrategy::Random, EscapeeStrategy::Naive, EscapeeStrategy::KCircleRotation,
    EscapeeStrategy::KCircle, EscapeeStrategy::SlidingSlope};
inline constexpr ChainStrategy kExpectedChainOrder[] = {
    ChainStrategy::TaggingC2, ChainStrategy::TaggingC1, ChainStrategy::VarianceC2,
    ChainStrategy::VarianceC1, ChainStrategy::Random};

OrderingReport summarize_orderings(const TransitionTable& table);

// "mean±sd" with one decimal, or ">max_steps" for an all-timeout cell.
std::string format_cell(const CellStats& cell, int max_steps);

// Header "n,chain,<escapee names>", then one row per (n, chain strategy).
std::string export_csv(const TransitionTable& table);

// One "run ..." line per game; read back with parse_runs.
std::string export_runs(const TransitionTable& table);
std::vector<RunResult> parse_runs(std::string_view text);

} // namespace chaincatch
