#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "chaincatch/error.hpp"
#include "chaincatch/experiments.hpp"

using namespace chaincatch;

namespace {

constexpr EscapeeStrategy kAllEscapees[] = {EscapeeStrategy::Random, EscapeeStrategy::Naive,
                                            EscapeeStrategy::KCircle, EscapeeStrategy::KCircleRotation,
                                            EscapeeStrategy::SlidingSlope};
constexpr ChainStrategy kAllChains[] = {ChainStrategy::TaggingC1, ChainStrategy::TaggingC2,
                                        ChainStrategy::VarianceC1, ChainStrategy::VarianceC2,
                                        ChainStrategy::Random};

MatrixSpec small_spec() {
    MatrixSpec s;
    s.arena = Arena::with_size(40, 40, 5);
    s.params = StrategyParams::defaults_for(s.arena);
    s.agent_counts = {10};
    s.runs_per_cell = 5;
    s.escapee_strategies = {EscapeeStrategy::KCircle, EscapeeStrategy::Naive};
    s.chain_strategies = {ChainStrategy::TaggingC1, ChainStrategy::TaggingC2};
    return s;
}

Outcome done(int t) { return {OutcomeKind::Complete, t}; }
Outcome timeout(int t) { return {OutcomeKind::Timeout, t}; }

// Synthetic table: every run of a cell completes at the given value.
TransitionTable synthetic(const std::vector<std::pair<std::pair<ChainStrategy, EscapeeStrategy>, double>>& cells,
                          const std::vector<EscapeeStrategy>& escapees, const std::vector<ChainStrategy>& chains) {
    MatrixSpec spec = MatrixSpec::defaults();
    spec.escapee_strategies = escapees;
    spec.chain_strategies = chains;
    spec.runs_per_cell = 1;
    std::vector<RunResult> runs;
    for (const auto& [key, v] : cells) {
        const Outcome o = std::isinf(v) ? timeout(3000) : done(int(v));
        runs.push_back({key.first, key.second, 10, 0, 0, o});
    }
    return tabulate(spec, runs);
}

} // namespace

TEST_CASE("cell statistics") {
    const auto c = summarize_cell(ChainStrategy::TaggingC1, EscapeeStrategy::Naive, 10, {done(120)});
    CHECK(c.runs == 1);
    CHECK(c.mean == 120.0);
    CHECK(c.stddev == 0.0);
    CHECK(format_cell(c, 3000) == "120.0±0.0");

    // Sample deviation of 2, 4, 4, 4, 5, 5, 7, 9 is sqrt(32/7).
    std::vector<Outcome> os;
    for (int v : {2, 4, 4, 4, 5, 5, 7, 9}) os.push_back(done(v));
    os.push_back(timeout(3000));
    const auto d = summarize_cell(ChainStrategy::TaggingC1, EscapeeStrategy::Naive, 10, os);
    CHECK(d.runs == 9);
    CHECK(d.completed == 8);
    CHECK(d.timeouts == 1);
    CHECK(d.mean == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(d.stddev == doctest::Approx(std::sqrt(32.0 / 7.0)).epsilon(1e-12));
    CHECK(d.ranking_mean() == d.mean);

    const auto t = summarize_cell(ChainStrategy::Random, EscapeeStrategy::Naive, 10, {timeout(3000), timeout(3000)});
    CHECK(t.all_timeout());
    CHECK(std::isinf(t.ranking_mean()));
    CHECK(format_cell(t, 3000) == ">3000");
}

TEST_CASE("cell statistics do not depend on run order") {
    std::mt19937_64 gen(5);
    std::uniform_int_distribution<int> u(1, 3000);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Outcome> os;
        const int k = 1 + trial % 12;
        for (int i = 0; i < k; ++i) os.push_back(u(gen) > 2800 ? timeout(3000) : done(u(gen)));
        const auto a = summarize_cell(ChainStrategy::TaggingC1, EscapeeStrategy::Naive, 10, os);
        std::shuffle(os.begin(), os.end(), gen);
        const auto b = summarize_cell(ChainStrategy::TaggingC1, EscapeeStrategy::Naive, 10, os);
        CHECK(a.mean == doctest::Approx(b.mean).epsilon(1e-12));
        CHECK(a.stddev == doctest::Approx(b.stddev).epsilon(1e-12));
        CHECK(a.completed + a.timeouts == a.runs);
        CHECK(a.stddev >= 0.0);
    }
}

TEST_CASE("a single-run cell equals its game") {
    MatrixSpec spec = small_spec();
    spec.escapee_strategies = {EscapeeStrategy::KCircle};
    spec.chain_strategies = {ChainStrategy::TaggingC1};
    spec.runs_per_cell = 1;
    const auto table = run_batch(spec);
    REQUIRE(table.cells.size() == 1);
    const Outcome o = play_game(run_config(spec, ChainStrategy::TaggingC1, EscapeeStrategy::KCircle, 10, 0));
    CHECK(table.cells[0].stddev == 0.0);
    CHECK(table.runs[0].outcome == o);
    if (o.kind == OutcomeKind::Complete) CHECK(table.cells[0].mean == o.cycles);
}

TEST_CASE("cell means equal the replayed games") {
    const MatrixSpec spec = small_spec();
    const auto table = run_batch(spec, 3);
    REQUIRE(table.cells.size() == 4);
    for (const auto& cell : table.cells) {
        double sum = 0;
        int completed = 0;
        for (int r = 0; r < spec.runs_per_cell; ++r) {
            const Outcome o = play_game(run_config(spec, cell.chain, cell.escapee, cell.n_agents, r));
            if (o.kind == OutcomeKind::Complete) sum += o.cycles, ++completed;
        }
        CHECK(cell.completed == completed);
        if (completed) CHECK(cell.mean == doctest::Approx(sum / completed).epsilon(1e-12));
    }
}

TEST_CASE("batches are deterministic across thread counts") {
    const MatrixSpec spec = small_spec();
    const auto a = run_batch(spec, 1);
    const auto b = run_batch(spec, 4);
    CHECK(a.runs == b.runs);
    CHECK(a.cells == b.cells);
    CHECK(export_csv(a) == export_csv(b));
}

TEST_CASE("run seeds are keyed on the strategies, not the matrix layout") {
    MatrixSpec full = small_spec();
    MatrixSpec one = full;
    one.escapee_strategies = {EscapeeStrategy::Naive};
    one.chain_strategies = {ChainStrategy::TaggingC2};
    const auto a = run_batch(full);
    const auto b = run_batch(one);
    CHECK(*a.find(ChainStrategy::TaggingC2, EscapeeStrategy::Naive, 10) == b.cells[0]);

    MatrixSpec other = full;
    other.base_seed = 2;
    std::vector<std::uint64_t> s1, s2;
    for (const auto& r : a.runs) s1.push_back(r.seed);
    for (const auto& r : run_batch(other).runs) s2.push_back(r.seed);
    CHECK(s1 != s2);
    std::sort(s1.begin(), s1.end());
    CHECK(std::adjacent_find(s1.begin(), s1.end()) == s1.end());
}

TEST_CASE("run exports read back to the same table") {
    const MatrixSpec spec = small_spec();
    const auto table = run_batch(spec);
    const auto runs = parse_runs(export_runs(table));
    CHECK(runs == table.runs);
    const auto back = tabulate(spec, runs);
    CHECK(back.cells == table.cells);
    CHECK(export_csv(back) == export_csv(table));
    CHECK_THROWS_AS(parse_runs("run n=10 chain=tag1\n"), ParseError);
    CHECK_THROWS_AS(parse_runs("walk n=10\n"), ParseError);
}

TEST_CASE("csv layout") {
    const auto table = run_batch(small_spec());
    const auto csv = export_csv(table);
    CHECK(csv.starts_with("n,chain,kcircle,naive\n10,tag1,"));
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);

    MatrixSpec empty = small_spec();
    empty.escapee_strategies.clear();
    empty.chain_strategies.clear();
    const auto none = run_batch(empty);
    CHECK(none.cells.empty());
    CHECK(export_csv(none) == "n,chain\n");
}

TEST_CASE("matrix validation") {
    MatrixSpec s = small_spec();
    s.runs_per_cell = 0;
    CHECK_THROWS_AS(run_batch(s), InvariantError);
    s = small_spec();
    s.agent_counts = {10, 2};
    CHECK_THROWS_AS(run_batch(s), InvariantError);
    s = small_spec();
    s.params.k = -1;
    CHECK_THROWS_AS(run_batch(s), InvariantError);
}

TEST_CASE("orderings") {
    using CS = ChainStrategy;
    using ES = EscapeeStrategy;
    const std::vector<ES> escapees(std::begin(kAllEscapees), std::end(kAllEscapees));
    const std::vector<CS> chains(std::begin(kAllChains), std::end(kAllChains));
    const double inf = std::numeric_limits<double>::infinity();

    SUBCASE("expected escapee order passes") {
        const auto t = synthetic({{{CS::TaggingC1, ES::SlidingSlope}, 900},
                                  {{CS::TaggingC1, ES::KCircle}, 700},
                                  {{CS::TaggingC1, ES::KCircleRotation}, 500},
                                  {{CS::TaggingC1, ES::Naive}, 300},
                                  {{CS::TaggingC1, ES::Random}, 100}},
                                 escapees, {CS::TaggingC1});
        const auto r = summarize_orderings(t);
        CHECK(r.escapee_verdict() == Verdict::Pass);
        CHECK(r.escapee_lines[0].order ==
              std::vector<std::string>{"slope", "kcircle", "kcircle-rot", "naive", "random"});
        CHECK(r.chain_verdict() == Verdict::NotEvaluable);
    }
    SUBCASE("one swapped pair fails") {
        const auto t = synthetic({{{CS::TaggingC1, ES::SlidingSlope}, 600},
                                  {{CS::TaggingC1, ES::KCircle}, 700},
                                  {{CS::TaggingC1, ES::KCircleRotation}, 500},
                                  {{CS::TaggingC1, ES::Naive}, 300},
                                  {{CS::TaggingC1, ES::Random}, 100}},
                                 escapees, {CS::TaggingC1});
        CHECK(summarize_orderings(t).escapee_verdict() == Verdict::Fail);
    }
    SUBCASE("chain order with an all-timeout random chain") {
        const auto t = synthetic({{{CS::TaggingC2, ES::Naive}, 100},
                                  {{CS::TaggingC1, ES::Naive}, 200},
                                  {{CS::VarianceC2, ES::Naive}, 300},
                                  {{CS::VarianceC1, ES::Naive}, 400},
                                  {{CS::Random, ES::Naive}, inf}},
                                 {ES::Naive}, chains);
        const auto r = summarize_orderings(t);
        CHECK(r.chain_verdict() == Verdict::Pass);
        CHECK(r.chain_lines[0].order == std::vector<std::string>{"tag2", "tag1", "var2", "var1", "random"});
    }
    SUBCASE("two all-timeout cells cannot be ordered") {
        const auto t = synthetic({{{CS::TaggingC2, ES::Naive}, 100},
                                  {{CS::TaggingC1, ES::Naive}, 200},
                                  {{CS::VarianceC2, ES::Naive}, 300},
                                  {{CS::VarianceC1, ES::Naive}, inf},
                                  {{CS::Random, ES::Naive}, inf}},
                                 {ES::Naive}, chains);
        CHECK(summarize_orderings(t).chain_verdict() == Verdict::Fail);
    }
    SUBCASE("a single cell is not evaluable") {
        const auto t = synthetic({{{CS::TaggingC1, ES::Naive}, 100}}, {ES::Naive}, {CS::TaggingC1});
        const auto r = summarize_orderings(t);
        CHECK(r.escapee_verdict() == Verdict::NotEvaluable);
        CHECK(r.chain_verdict() == Verdict::NotEvaluable);
        CHECK(r.render().find("escapee ordering: not-evaluable") != std::string::npos);
    }
}
